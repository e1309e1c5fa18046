#pragma once
// G(F_p) = GL2 x GL3 acting on pairs of ternary quadratic forms (and GL2 on
// binary cubics): group elements, the action, exhaustive orbit decomposition
// by breadth-first closure, and an invariant-based orbit classifier.

#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "pvs/ext_field.hpp"
#include "pvs/modular.hpp"
#include "pvs/space.hpp"

namespace pvs {

// ---------------------------------------------------------------------------
// Labels

enum class Label : int {
  O0, D1sq, D11, D2, Dns, Cs, Cns, T11, T2,
  S1_4, S1_3_1, S1sq1sq, S2sq, S1sq11, S1sq2,
  S1111, S112, S22, S13, S4,
};

inline constexpr int kLabelCount = 20;

struct LabelInfo {
  Label label;
  const char* name;
  int dimension;
  int fc;
};

inline const std::array<LabelInfo, kLabelCount>& label_table() {
  static const std::array<LabelInfo, kLabelCount> t{{
      {Label::O0, "O0", 0, -1},
      {Label::D1sq, "D1^2", 4, -3},
      {Label::D11, "D11", 7, -4},
      {Label::D2, "D2", 8, -5},
      {Label::Dns, "Dns", 8, -5},
      {Label::Cs, "Cs", 7, -4},
      {Label::Cns, "Cns", 8, -5},
      {Label::T11, "T11", 8, -5},
      {Label::T2, "T2", 8, -5},
      {Label::S1_4, "1^4", 10, -6},
      {Label::S1_3_1, "1^31", 10, -6},
      {Label::S1sq1sq, "1^21^2", 10, -6},
      {Label::S2sq, "2^2", 10, -6},
      {Label::S1sq11, "1^211", 11, -7},
      {Label::S1sq2, "1^22", 11, -7},
      {Label::S1111, "1111", 12, -8},
      {Label::S112, "112", 12, -8},
      {Label::S22, "22", 12, -8},
      {Label::S13, "13", 12, -8},
      {Label::S4, "4", 12, -8},
  }};
  return t;
}

inline const LabelInfo& info(Label l) { return label_table()[static_cast<std::size_t>(l)]; }
inline std::string to_string(Label l) { return info(l).name; }
inline int dimension(Label l) { return info(l).dimension; }

/// Accepts the canonical names, an optional "O_" or "O" prefix, and the
/// aliases B11/B2 for T11/T2.
inline Label parse_label(std::string s) {
  if (s.rfind("O_", 0) == 0) s = s.substr(2);
  if (s == "B11") s = "T11";
  if (s == "B2") s = "T2";
  if (s == "0") s = "O0";
  for (const auto& e : label_table()) {
    if (s == e.name) return e.label;
  }
  fail(ErrorKind::invalid_label, "unknown orbit label '" + s + "'");
}

/// The dimension groups U_i and their Fourier contribution exponents.
struct DimensionRow {
  int dimension;
  int fc;
};

inline const std::vector<DimensionRow>& dimension_table() {
  static const std::vector<DimensionRow> t{{0, -1}, {4, -3}, {7, -4}, {8, -5}, {10, -6}, {11, -7}, {12, -8}};
  return t;
}

inline std::vector<Label> labels_of_dimension(int i) {
  std::vector<Label> out;
  for (const auto& e : label_table()) {
    if (e.dimension == i) out.push_back(e.label);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Group elements. p == 0 means integer matrices (determinants must be +-1).

struct GroupElement {
  i64 p = 0;
  std::array<i64, 4> g2{1, 0, 0, 1};                  // [[r, s], [t, u]]
  std::array<i64, 9> g3{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major

  static GroupElement identity(i64 p) { return GroupElement{p, {1, 0, 0, 1}, {1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

  static GroupElement make(i64 p, std::array<i64, 4> a, std::array<i64, 9> b = {1, 0, 0, 0, 1, 0, 0, 0, 1}) {
    GroupElement g{p, a, b};
    if (p > 0) {
      for (auto& v : g.g2) v = mod(v, p);
      for (auto& v : g.g3) v = mod(v, p);
    }
    g.validate();
    return g;
  }

  i64 det2() const { return reduce(g2[0] * g2[3] - g2[1] * g2[2]); }
  i64 det3() const {
    const auto& m = g3;
    return reduce(m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
                  m[2] * (m[3] * m[7] - m[4] * m[6]));
  }

  void validate() const {
    const bool ok = p > 0 ? (det2() != 0 && det3() != 0)
                          : ((det2() == 1 || det2() == -1) && (det3() == 1 || det3() == -1));
    if (!ok) fail(ErrorKind::invalid_group_element, "group element is not invertible");
  }

  GroupElement operator*(const GroupElement& h) const {
    GroupElement r{p, {}, {}};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        i64 s = 0;
        for (int k = 0; k < 2; ++k) s += g2[static_cast<std::size_t>(2 * i + k)] * h.g2[static_cast<std::size_t>(2 * k + j)];
        r.g2[static_cast<std::size_t>(2 * i + j)] = reduce(s);
      }
    }
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        i64 s = 0;
        for (int k = 0; k < 3; ++k) s += g3[static_cast<std::size_t>(3 * i + k)] * h.g3[static_cast<std::size_t>(3 * k + j)];
        r.g3[static_cast<std::size_t>(3 * i + j)] = reduce(s);
      }
    }
    return r;
  }

  /// Transpose-inverse in each factor (p > 0 only).
  GroupElement iota() const {
    if (p <= 0) fail(ErrorKind::domain, "iota is implemented over F_p only");
    const i64 d2 = inv_mod(det2(), p);
    const i64 d3 = inv_mod(det3(), p);
    GroupElement r{p, {}, {}};
    // (g^{-1})^T = adj(g)^T / det = cofactor matrix / det
    r.g2 = {mod(g2[3] * d2, p), mod(-g2[2] * d2, p), mod(-g2[1] * d2, p), mod(g2[0] * d2, p)};
    const auto& m = g3;
    auto cof = [&](int i, int j) {
      const int r0 = (i + 1) % 3, r1 = (i + 2) % 3, c0 = (j + 1) % 3, c1 = (j + 2) % 3;
      return m[static_cast<std::size_t>(3 * r0 + c0)] * m[static_cast<std::size_t>(3 * r1 + c1)] -
             m[static_cast<std::size_t>(3 * r0 + c1)] * m[static_cast<std::size_t>(3 * r1 + c0)];
    };
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) r.g3[static_cast<std::size_t>(3 * i + j)] = mul_mod(mod(cof(i, j), p), d3, p);
    }
    return r;
  }

  friend bool operator==(const GroupElement&, const GroupElement&) = default;

 private:
  i64 reduce(i64 v) const { return p > 0 ? mod(v, p) : v; }
};

inline GroupElement random_group_element(i64 p, std::mt19937_64& rng) {
  std::uniform_int_distribution<i64> dist(0, p - 1);
  for (;;) {
    GroupElement g{p, {}, {}};
    for (auto& v : g.g2) v = dist(rng);
    for (auto& v : g.g3) v = dist(rng);
    if (g.det2() != 0 && g.det3() != 0) return g;
  }
}

// ---------------------------------------------------------------------------
// The action.

/// (g f)(x, y) = f(r x + t y, s x + u y) on binary cubics.
inline CubicSpace::Coords act(const GroupElement& g, const CubicSpace::Coords& f) {
  const i64 p = g.p;
  auto red = [p](i64 v) { return p > 0 ? mod(v, p) : v; };
  using Lin = std::array<i64, 2>;
  using Quad = std::array<i64, 3>;
  const Lin X{g.g2[0], g.g2[2]}, Y{g.g2[1], g.g2[3]};
  auto mul11 = [&](const Lin& u, const Lin& v) { return Quad{red(u[0] * v[0]), red(u[0] * v[1] + u[1] * v[0]), red(u[1] * v[1])}; };
  auto mul21 = [&](const Quad& u, const Lin& v) {
    return CubicSpace::Coords{red(u[0] * v[0]), red(u[0] * v[1] + u[1] * v[0]), red(u[1] * v[1] + u[2] * v[0]), red(u[2] * v[1])};
  };
  const auto XX = mul11(X, X), XY = mul11(X, Y), YY = mul11(Y, Y);
  const CubicSpace::Coords terms[4] = {mul21(XX, X), mul21(XX, Y), mul21(XY, Y), mul21(YY, Y)};
  CubicSpace::Coords out{};
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) out[static_cast<std::size_t>(i)] += red(f[static_cast<std::size_t>(k)] * terms[k][static_cast<std::size_t>(i)]);
  }
  for (auto& v : out) v = red(v);
  return out;
}

namespace detail {

inline std::array<i64, 6> congruence(const std::array<i64, 9>& g, const std::array<i64, 6>& s, i64 p) {
  auto red = [p](i64 v) { return p > 0 ? mod(v, p) : v; };
  const i64 m[3][3] = {{s[0], s[3], s[4]}, {s[3], s[1], s[5]}, {s[4], s[5], s[2]}};
  i64 gm[3][3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      i64 v = 0;
      for (int k = 0; k < 3; ++k) v += g[static_cast<std::size_t>(3 * i + k)] * m[k][j];
      gm[i][j] = red(v);
    }
  }
  auto entry = [&](int i, int j) {
    i64 v = 0;
    for (int k = 0; k < 3; ++k) v += gm[i][k] * g[static_cast<std::size_t>(3 * j + k)];
    return red(v);
  };
  return {entry(0, 0), entry(1, 1), entry(2, 2), entry(0, 1), entry(0, 2), entry(1, 2)};
}

}  // namespace detail

/// (g2, g3)(A, B) = (r g3 A g3^T + s g3 B g3^T, t g3 A g3^T + u g3 B g3^T).
inline QuarticSpace::Coords act(const GroupElement& g, const QuarticSpace::Coords& x) {
  const i64 p = g.p;
  std::array<i64, 6> a{}, b{};
  std::copy(x.begin(), x.begin() + 6, a.begin());
  std::copy(x.begin() + 6, x.end(), b.begin());
  const auto ga = detail::congruence(g.g3, a, p);
  const auto gb = detail::congruence(g.g3, b, p);
  QuarticSpace::Coords out{};
  for (int i = 0; i < 6; ++i) {
    i64 na = g.g2[0] * ga[static_cast<std::size_t>(i)] + g.g2[1] * gb[static_cast<std::size_t>(i)];
    i64 nb = g.g2[2] * ga[static_cast<std::size_t>(i)] + g.g2[3] * gb[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = p > 0 ? mod(na, p) : na;
    out[static_cast<std::size_t>(i + 6)] = p > 0 ? mod(nb, p) : nb;
  }
  return out;
}

inline VElement act(const GroupElement& g, const VElement& x) {
  if (x.modulus != g.p) fail(ErrorKind::domain, "group element and vector live over different rings");
  g.validate();
  return visit_space(x.space, [&](auto s) {
    using S = decltype(s);
    return VElement::from<S>(act(g, x.template as<S>()), x.modulus);
  });
}

// ---------------------------------------------------------------------------
// Linear algebra mod p used by the classifier.

namespace detail {

using Mat3 = std::array<std::array<i64, 3>, 3>;

inline Mat3 full(const i64* s) {
  return Mat3{{{s[0], s[3], s[4]}, {s[3], s[1], s[5]}, {s[4], s[5], s[2]}}};
}

inline Mat3 combo(i64 x, const Mat3& a, i64 y, const Mat3& b, i64 p) {
  Mat3 m{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[i][j] = mod(x * a[i][j] + y * b[i][j], p);
  }
  return m;
}

/// Row-reduce in place; returns the rank and the pivot columns.
inline int row_reduce(std::vector<std::vector<i64>>& m, i64 p, std::vector<int>* pivots = nullptr) {
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int piv = -1;
    for (int i = r; i < rows; ++i) {
      if (mod(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)], p) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) continue;
    std::swap(m[static_cast<std::size_t>(r)], m[static_cast<std::size_t>(piv)]);
    auto& row = m[static_cast<std::size_t>(r)];
    const i64 inv = inv_mod(row[static_cast<std::size_t>(c)], p);
    for (auto& v : row) v = mul_mod(v, inv, p);
    for (int i = 0; i < rows; ++i) {
      if (i == r) continue;
      auto& other = m[static_cast<std::size_t>(i)];
      const i64 f = mod(other[static_cast<std::size_t>(c)], p);
      if (f == 0) continue;
      for (int j = 0; j < cols; ++j) other[static_cast<std::size_t>(j)] = mod(other[static_cast<std::size_t>(j)] - f * row[static_cast<std::size_t>(j)], p);
    }
    if (pivots) pivots->push_back(c);
    ++r;
  }
  return r;
}

inline int rank(const Mat3& a, i64 p) {
  std::vector<std::vector<i64>> m(3, std::vector<i64>(3));
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = a[i][j];
  }
  return row_reduce(m, p);
}

/// A rank-2 ternary form is a product of two rational lines iff minus a
/// nonzero principal 2x2 minor is a square.
inline bool splits(const Mat3& q, i64 p) {
  static constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  for (const auto& ij : pairs) {
    const int i = ij[0], j = ij[1];
    const i64 minor = mod(q[i][i] * q[j][j] - q[i][j] * q[i][j], p);
    if (minor != 0) return is_square_mod(-minor, p);
  }
  fail(ErrorKind::classifier_incomplete, "split test on a form of rank < 2");
}

/// Common kernel of A and B, as a basis of vectors in F_p^3.
inline std::vector<std::array<i64, 3>> common_kernel(const Mat3& a, const Mat3& b, i64 p) {
  std::vector<std::vector<i64>> m;
  for (int i = 0; i < 3; ++i) m.push_back({a[i][0], a[i][1], a[i][2]});
  for (int i = 0; i < 3; ++i) m.push_back({b[i][0], b[i][1], b[i][2]});
  std::vector<int> piv;
  row_reduce(m, p, &piv);
  std::vector<std::array<i64, 3>> basis;
  for (int free = 0; free < 3; ++free) {
    if (std::find(piv.begin(), piv.end(), free) != piv.end()) continue;
    std::array<i64, 3> v{};
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t r = 0; r < piv.size(); ++r) v[static_cast<std::size_t>(piv[r])] = mod(-m[r][static_cast<std::size_t>(free)], p);
    basis.push_back(v);
  }
  return basis;
}

struct Root {
  i64 x, y;  // point (x : y) of P^1(F_p)
};

/// Roots in P^1(F_p) of c0 x^3 + c1 x^2 y + c2 x y^2 + c3 y^3 (not identically 0).
inline std::vector<Root> cubic_roots(const std::array<i64, 4>& c, i64 p) {
  std::vector<Root> out;
  if (mod(c[0], p) == 0) out.push_back({1, 0});
  for (i64 t = 0; t < p; ++t) {
    // x = t, y = 1
    const i64 v = mod(((c[0] * t % p + c[1]) % p * t % p + c[2]) % p * t + c[3], p);
    if (v == 0) out.push_back({t, 1});
  }
  return out;
}

inline bool is_multiple_root(const std::array<i64, 4>& c, const Root& r, i64 p) {
  const i64 x = r.x, y = r.y;
  const i64 fx = mod(3 * c[0] * x % p * x + 2 * c[1] * x % p * y + c[2] * y % p * y, p);
  const i64 fy = mod(c[1] * x % p * x + 2 * c[2] * x % p * y + 3 * c[3] * y % p * y, p);
  return fx == 0 && fy == 0;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Classifier

/// Orbit label of x in V(F_p) from invariants of the pencil xA + yB: the span
/// and ranks of its members, the roots of the resolvent cubic over F_p, and
/// whether the degenerate members split into rational line pairs.
inline Label classify(const QuarticSpace::Coords& xin, i64 p) {
  if (p == 2) fail(ErrorKind::bad_prime, "no orbit classification at p = 2");
  QuarticSpace::Coords x{};
  for (int i = 0; i < 12; ++i) x[static_cast<std::size_t>(i)] = mod(xin[static_cast<std::size_t>(i)], p);
  const detail::Mat3 A = detail::full(x.data()), B = detail::full(x.data() + 6);

  std::vector<std::vector<i64>> span{std::vector<i64>(x.begin(), x.begin() + 6), std::vector<i64>(x.begin() + 6, x.end())};
  const int dim = detail::row_reduce(span, p);
  if (dim == 0) return Label::O0;
  if (dim == 1) {
    bool a_zero = std::all_of(x.begin(), x.begin() + 6, [](i64 v) { return v == 0; });
    const detail::Mat3& q = a_zero ? B : A;
    switch (detail::rank(q, p)) {
      case 1: return Label::D1sq;
      case 2: return detail::splits(q, p) ? Label::D11 : Label::D2;
      default: return Label::Dns;
    }
  }

  const auto f = QuarticSpace::resolvent_mod(x, p);
  const bool f_zero = f[0] == 0 && f[1] == 0 && f[2] == 0 && f[3] == 0;
  if (f_zero) {
    const auto ker = detail::common_kernel(A, B, p);
    if (ker.empty()) return Label::Cns;
    const auto& v = ker.front();
    int pivot = 0;
    while (v[static_cast<std::size_t>(pivot)] == 0) ++pivot;
    const int e0 = (pivot + 1) % 3, e1 = (pivot + 2) % 3;
    // restrict to span(e_{e0}, e_{e1}), a complement of the kernel vector
    const i64 a00 = A[e0][e0], a01 = A[e0][e1], a11 = A[e1][e1];
    const i64 b00 = B[e0][e0], b01 = B[e0][e1], b11 = B[e1][e1];
    // g(s, t) = det(s A' + t B') = g0 s^2 + g1 s t + g2 t^2
    const i64 g0 = mod(a00 * a11 - a01 * a01, p);
    const i64 g1 = mod(a00 * b11 + b00 * a11 - 2 * a01 * b01, p);
    const i64 g2 = mod(b00 * b11 - b01 * b01, p);
    const i64 dg = mod(g1 * g1 - 4 * g0 * g2, p);
    if ((g0 == 0 && g1 == 0 && g2 == 0) || dg == 0) return Label::Cs;
    return is_square_mod(dg, p) ? Label::T11 : Label::T2;
  }

  const auto roots = detail::cubic_roots(f, p);
  auto member = [&](const detail::Root& r) { return detail::combo(r.x, A, r.y, B, p); };
  const i64 disc = cubic_disc_mod(f[0], f[1], f[2], f[3], p);
  if (disc != 0) {
    switch (roots.size()) {
      case 0: return Label::S13;
      case 1: return detail::splits(member(roots[0]), p) ? Label::S112 : Label::S4;
      case 3: {
        const bool all = std::all_of(roots.begin(), roots.end(), [&](const auto& r) { return detail::splits(member(r), p); });
        return all ? Label::S1111 : Label::S22;
      }
      default: break;
    }
  } else if (roots.size() == 1) {
    const int rk = detail::rank(member(roots[0]), p);
    if (rk == 1) return Label::S1_4;
    if (rk == 2) return Label::S1_3_1;
  } else if (roots.size() == 2) {
    const bool first_double = detail::is_multiple_root(f, roots[0], p);
    const auto& r2 = first_double ? roots[0] : roots[1];
    const auto& r1 = first_double ? roots[1] : roots[0];
    const auto m2 = member(r2), m1 = member(r1);
    const int rk = detail::rank(m2, p);
    if (rk == 1) return detail::splits(m1, p) ? Label::S1sq1sq : Label::S2sq;
    if (rk == 2) return (detail::splits(m1, p) && detail::splits(m2, p)) ? Label::S1sq11 : Label::S1sq2;
  }
  fail(ErrorKind::classifier_incomplete, "unrecognized invariant signature for " +
                                             serialize(VElement::from<QuarticSpace>(x, p)));
}

inline Label classify(const VElement& x) {
  if (x.space != SpaceId::quartic) fail(ErrorKind::domain, "orbit labels are defined for the quartic space");
  if (x.modulus <= 0 || !is_prime(x.modulus)) fail(ErrorKind::invalid_modulus, "classify needs a prime modulus");
  return classify(x.as<QuarticSpace>(), x.modulus);
}

// ---------------------------------------------------------------------------
// Point counts of the base locus {A = B = 0} in P^2(F_{p^k}); an independent
// check on the nonsingular splitting types.

inline i64 base_locus_points(const QuarticSpace::Coords& x, i64 p, int k) {
  const ExtField F(p, k);
  const i64 q = F.size();
  using E = ExtField::Elem;
  auto quad = [&](int off, const E& u, const E& v, const E& w) {
    const E vars[3] = {u, v, w};
    E acc{};
    static constexpr int idx[6][2] = {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}};
    for (int t = 0; t < 6; ++t) {
      const i64 coef = mod(x[static_cast<std::size_t>(off + t)] * (t < 3 ? 1 : 2), p);
      if (coef == 0) continue;
      acc = F.add(acc, F.mul(F.from_int(coef), F.mul(vars[idx[t][0]], vars[idx[t][1]])));
    }
    return acc;
  };
  auto on_locus = [&](const E& u, const E& v, const E& w) {
    return ExtField::is_zero(quad(0, u, v, w)) && ExtField::is_zero(quad(6, u, v, w));
  };
  const E zero{}, one = F.from_int(1);
  i64 count = 0;
  for (i64 i = 0; i < q; ++i) {
    for (i64 j = 0; j < q; ++j) count += on_locus(one, F.from_index(i), F.from_index(j));
  }
  for (i64 j = 0; j < q; ++j) count += on_locus(zero, one, F.from_index(j));
  count += on_locus(zero, zero, one);
  return count;
}

/// Splitting type of a nonsingular pair from (#F_p points, #F_{p^2} points).
inline Label splitting_type_from_counts(i64 n1, i64 n2) {
  if (n1 == 4 && n2 == 4) return Label::S1111;
  if (n1 == 2 && n2 == 4) return Label::S112;
  if (n1 == 0 && n2 == 4) return Label::S22;
  if (n1 == 1 && n2 == 1) return Label::S13;
  if (n1 == 0 && n2 == 0) return Label::S4;
  fail(ErrorKind::classifier_incomplete,
       "point counts (" + std::to_string(n1) + ", " + std::to_string(n2) + ") fit no nonsingular type");
}

// ---------------------------------------------------------------------------
// Exhaustive orbit decomposition of V(F_p).

/// Index of x in V(F_p): sum x_k p^k, so A occupies the low six digits.
class QuarticCodec {
 public:
  explicit QuarticCodec(i64 p) : p_(p) {
    p3_ = p * p * p;
    p6_ = p3_ * p3_;
  }
  i64 p() const noexcept { return p_; }
  u64 half() const noexcept { return static_cast<u64>(p6_); }
  u64 size() const noexcept { return static_cast<u64>(p6_) * static_cast<u64>(p6_); }

  u64 encode(const QuarticSpace::Coords& x) const {
    u64 idx = 0;
    for (int k = 11; k >= 0; --k) idx = idx * static_cast<u64>(p_) + static_cast<u64>(mod(x[static_cast<std::size_t>(k)], p_));
    return idx;
  }
  QuarticSpace::Coords decode(u64 idx) const {
    QuarticSpace::Coords x{};
    for (int k = 0; k < 12; ++k) {
      x[static_cast<std::size_t>(k)] = static_cast<i64>(idx % static_cast<u64>(p_));
      idx /= static_cast<u64>(p_);
    }
    return x;
  }
  std::array<i64, 6> decode_half(u64 h) const {
    std::array<i64, 6> s{};
    for (int k = 0; k < 6; ++k) {
      s[static_cast<std::size_t>(k)] = static_cast<i64>(h % static_cast<u64>(p_));
      h /= static_cast<u64>(p_);
    }
    return s;
  }
  u64 encode_half(const std::array<i64, 6>& s) const {
    u64 h = 0;
    for (int k = 5; k >= 0; --k) h = h * static_cast<u64>(p_) + static_cast<u64>(mod(s[static_cast<std::size_t>(k)], p_));
    return h;
  }

 private:
  i64 p_, p3_, p6_;
};

struct OrbitRecord {
  u64 representative;  // smallest index in the orbit
  u64 size;
};

struct OrbitDecomposition {
  i64 p = 0;
  std::vector<OrbitRecord> orbits;  // in order of representative
  std::vector<std::uint8_t> orbit_of;  // per index, only when requested
};

struct DecomposeOptions {
  u64 memory_budget = 2ULL << 30;
  bool keep_orbit_ids = false;
  /// Called once per element as (index, orbit number) when set.
  std::function<void(u64, std::size_t)> on_visit;
};

/// Standard generators: diag(w,1), the elementary matrix E12 and the swap for
/// GL2; diag(w,1,1), E12, the transposition (12) and the 3-cycle for GL3,
/// with w a primitive root mod p.
inline std::vector<GroupElement> standard_generators(i64 p) {
  const i64 w = primitive_root(p);
  const std::array<i64, 9> I3{1, 0, 0, 0, 1, 0, 0, 0, 1};
  const std::array<i64, 4> I2{1, 0, 0, 1};
  return {
      GroupElement::make(p, {w, 0, 0, 1}, I3),
      GroupElement::make(p, {1, 1, 0, 1}, I3),
      GroupElement::make(p, {0, 1, 1, 0}, I3),
      GroupElement::make(p, I2, {w, 0, 0, 0, 1, 0, 0, 0, 1}),
      GroupElement::make(p, I2, {1, 1, 0, 0, 1, 0, 0, 0, 1}),
      GroupElement::make(p, I2, {0, 1, 0, 1, 0, 0, 0, 0, 1}),
      GroupElement::make(p, I2, {0, 0, 1, 1, 0, 0, 0, 1, 0}),
  };
}

inline OrbitDecomposition decompose_orbits(i64 p, const DecomposeOptions& opt = {}) {
  if (!is_prime(p)) fail(ErrorKind::invalid_modulus, std::to_string(p) + " is not prime");
  if (p == 2) fail(ErrorKind::bad_prime, "orbit decomposition excludes p = 2");
  const double points = std::pow(static_cast<double>(p), 12.0);
  const double need = points / 8.0 + 4.0 * points / 2.0 + (opt.keep_orbit_ids ? points : 0.0);
  if (need > static_cast<double>(opt.memory_budget) || points > 4.0e9) {
    fail(ErrorKind::resource_limit, "orbit decomposition at p = " + std::to_string(p) + " needs about " +
                                        std::to_string(static_cast<u64>(need)) + " bytes");
  }
  const QuarticCodec codec(p);
  const u64 half = codec.half();
  const u64 n = codec.size();
  const auto gens = standard_generators(p);

  // GL3 generators act on each matrix separately; tabulate them.
  std::vector<std::vector<std::uint32_t>> g3_tables;
  for (std::size_t gi = 3; gi < gens.size(); ++gi) {
    std::vector<std::uint32_t> t(half);
    for (u64 h = 0; h < half; ++h) {
      t[h] = static_cast<std::uint32_t>(codec.encode_half(detail::congruence(gens[gi].g3, codec.decode_half(h), p)));
    }
    g3_tables.push_back(std::move(t));
  }
  const i64 w = gens[0].g2[0];
  std::vector<std::uint32_t> scale(half);
  for (u64 h = 0; h < half; ++h) {
    auto s = codec.decode_half(h);
    for (auto& v : s) v = mod(v * w, p);
    scale[h] = static_cast<std::uint32_t>(codec.encode_half(s));
  }
  // A + B digit-wise, three digits at a time.
  const u64 p3 = static_cast<u64>(p * p * p);
  std::vector<std::uint32_t> add3(p3 * p3);
  for (u64 a = 0; a < p3; ++a) {
    for (u64 b = 0; b < p3; ++b) {
      u64 r = 0, pw = 1, x = a, y = b;
      for (int k = 0; k < 3; ++k) {
        r += ((x % static_cast<u64>(p) + y % static_cast<u64>(p)) % static_cast<u64>(p)) * pw;
        x /= static_cast<u64>(p);
        y /= static_cast<u64>(p);
        pw *= static_cast<u64>(p);
      }
      add3[a * p3 + b] = static_cast<std::uint32_t>(r);
    }
  }
  auto add_half = [&](u64 a, u64 b) { return add3[(a % p3) * p3 + b % p3] + p3 * add3[(a / p3) * p3 + b / p3]; };

  OrbitDecomposition out;
  out.p = p;
  if (opt.keep_orbit_ids) out.orbit_of.assign(n, 0xFF);
  std::vector<std::uint64_t> visited((n + 63) / 64, 0);
  auto test_and_set = [&](u64 i) {
    const u64 bit = 1ULL << (i & 63);
    if (visited[i >> 6] & bit) return false;
    visited[i >> 6] |= bit;
    return true;
  };
  std::vector<std::uint32_t> queue;
  for (u64 start = 0; start < n; ++start) {
    if (!test_and_set(start)) continue;
    const std::size_t orbit = out.orbits.size();
    if (opt.keep_orbit_ids && orbit >= 0xFF) fail(ErrorKind::resource_limit, "too many orbits to record ids");
    queue.clear();
    queue.push_back(static_cast<std::uint32_t>(start));
    auto visit = [&](u64 i) {
      if (opt.keep_orbit_ids) out.orbit_of[i] = static_cast<std::uint8_t>(orbit);
      if (opt.on_visit) opt.on_visit(i, orbit);
    };
    visit(start);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const u64 idx = queue[head];
      const u64 a = idx % half, b = idx / half;
      u64 next[7];
      next[0] = scale[a] + half * b;
      next[1] = add_half(a, b) + half * b;
      next[2] = b + half * a;
      for (std::size_t t = 0; t < g3_tables.size(); ++t) next[3 + t] = g3_tables[t][a] + half * g3_tables[t][b];
      for (u64 nx : next) {
        if (test_and_set(nx)) {
          queue.push_back(static_cast<std::uint32_t>(nx));
          visit(nx);
        }
      }
    }
    out.orbits.push_back({start, queue.size()});
  }
  return out;
}

/// |GL2(F_p)| * |GL3(F_p)|.
inline BigInt group_order(i64 p) {
  const BigInt P(p);
  return (P * P - 1) * (P * P - P) * (P * P * P - 1) * (P * P * P - P) * (P * P * P - P * P);
}

// ---------------------------------------------------------------------------
// Orbit tables.

struct OrbitEntry {
  Label label;
  u64 cardinality;
  QuarticSpace::Coords representative;
};

struct OrbitTable {
  i64 p = 0;
  std::vector<OrbitEntry> entries;  // one per label, in label order

  const OrbitEntry& at(Label l) const {
    for (const auto& e : entries) {
      if (e.label == l) return e;
    }
    fail(ErrorKind::invalid_label, "label " + to_string(l) + " not in table");
  }

  u64 group_cardinality(int dimension) const {
    u64 s = 0;
    for (const auto& e : entries) {
      if (pvs::dimension(e.label) == dimension) s += e.cardinality;
    }
    return s;
  }
};

/// Attach labels to the orbits of a decomposition. Every label must occur
/// exactly once, otherwise the classifier and the decomposition disagree.
inline OrbitTable label_orbits(const OrbitDecomposition& d) {
  const QuarticCodec codec(d.p);
  OrbitTable t;
  t.p = d.p;
  std::array<int, kLabelCount> seen{};
  for (const auto& o : d.orbits) {
    const auto rep = codec.decode(o.representative);
    const Label l = classify(rep, d.p);
    if (seen[static_cast<std::size_t>(l)]++) {
      fail(ErrorKind::classifier_incomplete, "label " + to_string(l) + " assigned to two orbits at p = " + std::to_string(d.p));
    }
    t.entries.push_back({l, o.size, rep});
  }
  if (t.entries.size() != kLabelCount) {
    fail(ErrorKind::classifier_incomplete, std::to_string(t.entries.size()) + " orbits at p = " + std::to_string(d.p));
  }
  std::sort(t.entries.begin(), t.entries.end(), [](const auto& a, const auto& b) { return a.label < b.label; });
  return t;
}

inline constexpr const char* kOrbitTableVersion = "pvs-orbit-table/1";

inline void write_orbit_table(std::ostream& os, const OrbitTable& t) {
  os << "# " << kOrbitTableVersion << " p=" << t.p << '\n';
  os << "# label\tdimension\tfc\tcardinality\trepresentative\n";
  for (const auto& e : t.entries) {
    const auto& li = info(e.label);
    os << li.name << '\t' << li.dimension << '\t' << li.fc << '\t' << e.cardinality << '\t'
       << serialize(VElement::from<QuarticSpace>(e.representative, t.p)) << '\n';
  }
}

inline OrbitTable read_orbit_table(std::istream& is) {
  OrbitTable t;
  std::string line;
  if (!std::getline(is, line) || line.rfind(std::string("# ") + kOrbitTableVersion, 0) != 0) {
    fail(ErrorKind::parse, "missing or unsupported orbit table header");
  }
  const auto pos = line.find("p=");
  if (pos == std::string::npos) fail(ErrorKind::parse, "orbit table header lacks p");
  t.p = std::stoll(line.substr(pos + 2));
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string name, dim, fc, card, rep;
    if (!(std::getline(ls, name, '\t') && std::getline(ls, dim, '\t') && std::getline(ls, fc, '\t') &&
          std::getline(ls, card, '\t') && std::getline(ls, rep))) {
      fail(ErrorKind::parse, "malformed orbit table row: " + line);
    }
    const Label l = parse_label(name);
    if (std::stoi(dim) != info(l).dimension || std::stoi(fc) != info(l).fc) {
      fail(ErrorKind::parse, "dimension or fc does not match label " + name);
    }
    const VElement x = parse_element(rep);
    t.entries.push_back({l, std::stoull(card), x.as<QuarticSpace>()});
  }
  return t;
}

}  // namespace pvs
