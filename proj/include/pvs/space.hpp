#pragma once
// The two prehomogeneous spaces: binary cubic forms (r = d = 4) and pairs of
// ternary quadratic forms (r = d = 12), with discriminants, the invariant
// bilinear pairing, the dual lattice and box enumeration.
//
// Coordinates:
//   cubic   (a, b, c, d) for a u^3 + b u^2 v + c u v^2 + d v^3
//   quartic (a11, a22, a33, a12, a13, a23, b11, b22, b33, b12, b13, b23),
//           the entries of two symmetric 3x3 matrices (A, B)

#include <array>
#include <cmath>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "pvs/modular.hpp"
#include "pvs/rational.hpp"

namespace pvs {

enum class SpaceId { cubic, quartic };

inline std::string to_string(SpaceId s) { return s == SpaceId::cubic ? "cubic" : "quartic"; }

inline SpaceId parse_space(const std::string& s) {
  if (s == "cubic") return SpaceId::cubic;
  if (s == "quartic") return SpaceId::quartic;
  fail(ErrorKind::parse, "unknown space '" + s + "'");
}

struct SpaceDescriptor {
  SpaceId id;
  int r;  // dimension
  int d;  // degree of the discriminant
  int m;  // index of the dual lattice
  std::vector<i64> bad_primes;

  bool is_bad(i64 p) const {
    return std::find(bad_primes.begin(), bad_primes.end(), p) != bad_primes.end();
  }
};

inline const SpaceDescriptor& descriptor(SpaceId id) {
  static const SpaceDescriptor cubic{SpaceId::cubic, 4, 4, 3, {2, 3}};
  static const SpaceDescriptor quartic{SpaceId::quartic, 12, 12, 2, {2}};
  return id == SpaceId::cubic ? cubic : quartic;
}

// ---------------------------------------------------------------------------
// Binary cubic discriminant, generic over the coefficient ring.

template <class T>
T cubic_disc(const T& a, const T& b, const T& c, const T& d) {
  return b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * d - 27 * a * a * d * d + 18 * a * b * c * d;
}

inline i64 cubic_disc_mod(i64 a, i64 b, i64 c, i64 d, i64 p) {
  // All inputs reduced mod p < 2^15 keep every product below 2^63.
  a = mod(a, p), b = mod(b, p), c = mod(c, p), d = mod(d, p);
  const i64 bc = b * c % p;
  i64 r = bc * bc % p;
  r -= 4 * (a * (c * c % p) % p * c % p);
  r -= 4 * (b * b % p * b % p * d % p);
  r -= 27 * (a * a % p * (d * d % p) % p);
  r += 18 * (a * b % p * (c * d % p) % p);
  return mod(r, p);
}

// ---------------------------------------------------------------------------

struct CubicSpace {
  static constexpr SpaceId id = SpaceId::cubic;
  static constexpr int r = 4;
  static constexpr int d = 4;
  static constexpr int m = 3;
  using Coords = std::array<i64, 4>;

  static i64 disc(const Coords& x) { return cubic_disc<i64>(x[0], x[1], x[2], x[3]); }
  static BigInt disc_big(const Coords& x) {
    return cubic_disc<BigInt>(BigInt(x[0]), BigInt(x[1]), BigInt(x[2]), BigInt(x[3]));
  }
  static i64 disc_mod(const Coords& x, i64 p) { return cubic_disc_mod(x[0], x[1], x[2], x[3], p); }

  /// [x, y] = a a' + b b'/3 + c c'/3 + d d'.
  static Rational pairing(const Coords& x, const Coords& y) {
    return Rational(x[0] * y[0] + x[3] * y[3]) + Rational(x[1] * y[1] + x[2] * y[2], 3);
  }

  static i64 pairing_mod(const Coords& x, const Coords& y, i64 p) {
    if (p % 3 == 0) fail(ErrorKind::bad_prime, "cubic pairing is not defined mod 3");
    const i64 third = inv_mod(3, p);
    return mod(mul_mod(x[0], y[0], p) + mul_mod(x[3], y[3], p) +
                   mul_mod(third, mul_mod(x[1], y[1], p) + mul_mod(x[2], y[2], p), p),
               p);
  }

  /// Integral pairing of x in V(Z) with w in V*(Z) given in dual coordinates;
  /// equals pairing(x, rho(w)).
  static i64 dual_pairing(const Coords& x, const Coords& w) {
    return x[0] * w[0] + x[1] * w[1] + x[2] * w[2] + x[3] * w[3];
  }

  static bool in_dual_image(const Coords& y) { return mod(y[1], 3) == 0 && mod(y[2], 3) == 0; }
  static Coords rho(const Coords& w) { return {w[0], 3 * w[1], 3 * w[2], w[3]}; }
  static Coords rho_inverse_unchecked(const Coords& y) { return {y[0], y[1] / 3, y[2] / 3, y[3]}; }

  /// Disc(rho(w)) / 27: the natural invariant of the dual, which also makes
  /// sense at the prime 3 where rho degenerates.
  static i64 dual_disc(const Coords& w) {
    const i64 a = w[0], b = w[1], c = w[2], dd = w[3];
    return 3 * b * b * c * c - 4 * a * c * c * c - 4 * b * b * b * dd - a * a * dd * dd + 6 * a * b * c * dd;
  }
  static i64 dual_disc_mod(const Coords& w, i64 p) {
    const i64 a = mod(w[0], p), b = mod(w[1], p), c = mod(w[2], p), dd = mod(w[3], p);
    i64 r = 3 * (b * b % p * (c * c % p) % p);
    r -= 4 * (a * (c * c % p) % p * c % p);
    r -= 4 * (b * b % p * b % p * dd % p);
    r -= a * a % p * (dd * dd % p) % p;
    r += 6 * (a * b % p * (c * dd % p) % p);
    return mod(r, p);
  }

  static constexpr std::array<i64, 4> pairing_weights_num{3, 1, 1, 3};  // [x,y] = sum w_i x_i y_i / 3
};

// ---------------------------------------------------------------------------

/// Symmetric 3x3 matrix stored as (s11, s22, s33, s12, s13, s23).
template <class T>
struct Sym3 {
  T s11, s22, s33, s12, s13, s23;

  T det() const {
    return s11 * (s22 * s33 - s23 * s23) - s12 * (s12 * s33 - s23 * s13) + s13 * (s12 * s23 - s22 * s13);
  }
  Sym3 adjugate() const {
    return {s22 * s33 - s23 * s23, s11 * s33 - s13 * s13, s11 * s22 - s12 * s12,
            s13 * s23 - s12 * s33, s12 * s23 - s13 * s22, s12 * s13 - s11 * s23};
  }
  /// tr(this * other) for symmetric matrices.
  T trace_product(const Sym3& o) const {
    return s11 * o.s11 + s22 * o.s22 + s33 * o.s33 + 2 * (s12 * o.s12 + s13 * o.s13 + s23 * o.s23);
  }
};

struct QuarticSpace {
  static constexpr SpaceId id = SpaceId::quartic;
  static constexpr int r = 12;
  static constexpr int d = 12;
  static constexpr int m = 2;
  using Coords = std::array<i64, 12>;

  template <class T = i64>
  static Sym3<T> matrix_a(const Coords& x) {
    return {T(x[0]), T(x[1]), T(x[2]), T(x[3]), T(x[4]), T(x[5])};
  }
  template <class T = i64>
  static Sym3<T> matrix_b(const Coords& x) {
    return {T(x[6]), T(x[7]), T(x[8]), T(x[9]), T(x[10]), T(x[11])};
  }

  /// Coefficients of the binary cubic 4 det(A x + B y).
  template <class T>
  static std::array<T, 4> resolvent(const Coords& x) {
    const auto a = matrix_a<T>(x), b = matrix_b<T>(x);
    return {4 * a.det(), 4 * a.adjugate().trace_product(b), 4 * b.adjugate().trace_product(a), 4 * b.det()};
  }

  static std::array<i64, 4> resolvent_mod(const Coords& x, i64 p) {
    Coords r{};
    for (int i = 0; i < 12; ++i) r[i] = mod(x[i], p);
    auto f = resolvent<i64>(r);  // entries < p, products fit easily for p < 2^10
    for (auto& c : f) c = mod(c, p);
    return f;
  }

  static BigInt disc_big(const Coords& x) {
    const auto f = resolvent<BigInt>(x);
    return cubic_disc<BigInt>(f[0], f[1], f[2], f[3]);
  }
  static i64 disc_mod(const Coords& x, i64 p) {
    const auto f = resolvent_mod(x, p);
    return cubic_disc_mod(f[0], f[1], f[2], f[3], p);
  }

  /// Trace pairing tr(A A') + tr(B B').
  static Rational pairing(const Coords& x, const Coords& y) { return Rational(pairing_int(x, y)); }
  static i64 pairing_int(const Coords& x, const Coords& y) {
    return matrix_a(x).trace_product(matrix_a(y)) + matrix_b(x).trace_product(matrix_b(y));
  }
  static i64 pairing_mod(const Coords& x, const Coords& y, i64 p) {
    if (p % 2 == 0) fail(ErrorKind::bad_prime, "quartic pairing is not used mod 2");
    i64 s = 0;
    for (int i = 0; i < 12; ++i) s += mod(x[i], p) * mod(y[i], p) * pairing_weights_num[i];
    return mod(s, p);
  }

  static bool in_dual_image(const Coords& y) {
    for (int i : {3, 4, 5, 9, 10, 11}) {
      if (mod(y[i], 2) != 0) return false;
    }
    return true;
  }
  static Coords rho(const Coords& w) {
    Coords y = w;
    for (int i : {3, 4, 5, 9, 10, 11}) y[i] *= 2;
    return y;
  }
  static Coords rho_inverse_unchecked(const Coords& y) {
    Coords w = y;
    for (int i : {3, 4, 5, 9, 10, 11}) w[i] /= 2;
    return w;
  }
  static i64 dual_pairing(const Coords& x, const Coords& w) { return pairing_int(x, rho(w)); }

  static constexpr std::array<i64, 12> pairing_weights_num{1, 1, 1, 2, 2, 2, 1, 1, 1, 2, 2, 2};
};

template <class F>
decltype(auto) visit_space(SpaceId id, F&& f) {
  if (id == SpaceId::cubic) return f(CubicSpace{});
  return f(QuarticSpace{});
}

// ---------------------------------------------------------------------------
// Runtime element type used at interface boundaries.

/// An element of V(Z) (modulus == 0) or V(Z/q) (modulus == q), coordinates
/// reduced to [0, q) in the latter case.
struct VElement {
  SpaceId space = SpaceId::cubic;
  std::vector<i64> coords;
  i64 modulus = 0;

  VElement() = default;
  VElement(SpaceId s, std::vector<i64> c, i64 q = 0) : space(s), coords(std::move(c)), modulus(q) {
    const int r = descriptor(space).r;
    if (static_cast<int>(coords.size()) != r) {
      fail(ErrorKind::parse, to_string(space) + " element needs " + std::to_string(r) + " coordinates");
    }
    if (modulus < 0) fail(ErrorKind::invalid_modulus, "negative modulus");
    if (modulus > 0) {
      for (auto& v : coords) v = mod(v, modulus);
    }
  }

  template <class Space>
  static VElement from(const typename Space::Coords& c, i64 q = 0) {
    return VElement(Space::id, std::vector<i64>(c.begin(), c.end()), q);
  }

  template <class Space>
  typename Space::Coords as() const {
    if (space != Space::id) fail(ErrorKind::domain, "element belongs to the other space");
    typename Space::Coords c{};
    std::copy(coords.begin(), coords.end(), c.begin());
    return c;
  }

  VElement reduce(i64 q) const { return VElement(space, coords, q); }

  friend bool operator==(const VElement&, const VElement&) = default;
};

/// A dual-lattice element, stored through its image rho(w) in V(Z).
struct DualElement {
  VElement image;
  friend bool operator==(const DualElement&, const DualElement&) = default;
};

/// disc(x) over Z, or its residue when x lives mod q.
inline BigInt disc(const VElement& x) {
  BigInt v = visit_space(x.space, [&](auto s) {
    using S = decltype(s);
    return S::disc_big(x.template as<S>());
  });
  if (x.modulus > 0) {
    v %= x.modulus;
    if (v < 0) v += x.modulus;
  }
  return v;
}

/// Invariant pairing. Over Z the result is rational; mod q it is reduced and
/// requires q coprime to the space's bad primes.
inline Rational pairing(const VElement& x, const VElement& y) {
  if (x.space != y.space || x.modulus != y.modulus) fail(ErrorKind::domain, "pairing across different spaces or rings");
  if (x.modulus > 0) {
    const Modulus q(x.modulus);
    for (i64 p : q.primes()) {
      if (descriptor(x.space).is_bad(p)) fail(ErrorKind::bad_prime, "pairing at bad prime " + std::to_string(p));
    }
    return visit_space(x.space, [&](auto s) {
      using S = decltype(s);
      const auto xs = x.template as<S>(), ys = y.template as<S>();
      std::vector<Residue> res;
      for (i64 p : q.primes()) res.push_back({S::pairing_mod(xs, ys, p), p});
      return Rational(crt_combine(res).value);
    });
  }
  return visit_space(x.space, [&](auto s) {
    using S = decltype(s);
    return S::pairing(x.template as<S>(), y.template as<S>());
  });
}

inline bool rho_image_check(const VElement& y) {
  if (y.modulus != 0) fail(ErrorKind::domain, "rho_image_check expects an element over Z");
  return visit_space(y.space, [&](auto s) {
    using S = decltype(s);
    return S::in_dual_image(y.template as<S>());
  });
}

inline DualElement rho_inverse(const VElement& y) {
  if (!rho_image_check(y)) fail(ErrorKind::not_in_dual_lattice, "element is not in rho(V*(Z))");
  return DualElement{y};
}

/// Dual coordinates of a dual element (middle coefficients / 3 for cubics,
/// off-diagonal entries / 2 for pairs).
inline std::vector<i64> dual_coordinates(const DualElement& w) {
  return visit_space(w.image.space, [&](auto s) {
    using S = decltype(s);
    const auto c = S::rho_inverse_unchecked(w.image.template as<S>());
    return std::vector<i64>(c.begin(), c.end());
  });
}

inline DualElement from_dual_coordinates(SpaceId space, const std::vector<i64>& w) {
  return visit_space(space, [&](auto s) {
    using S = decltype(s);
    typename S::Coords c{};
    if (static_cast<int>(w.size()) != S::r) fail(ErrorKind::parse, "wrong number of dual coordinates");
    std::copy(w.begin(), w.end(), c.begin());
    return DualElement{VElement::from<S>(S::rho(c))};
  });
}

// ---------------------------------------------------------------------------
// Serialization: "<space>,<c1>,...,<cr>" over Z, "<space>/<q>,<c1>,..." mod q.

inline std::string serialize(const VElement& x) {
  std::ostringstream os;
  os << to_string(x.space);
  if (x.modulus > 0) os << '/' << x.modulus;
  for (i64 c : x.coords) os << ',' << c;
  return os.str();
}

inline VElement parse_element(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (fields.empty()) fail(ErrorKind::parse, "empty element line");
  std::string head = fields.front();
  i64 q = 0;
  if (const auto slash = head.find('/'); slash != std::string::npos) {
    try {
      q = std::stoll(head.substr(slash + 1));
    } catch (const std::exception&) {
      fail(ErrorKind::parse, "bad modulus in '" + head + "'");
    }
    head = head.substr(0, slash);
  }
  std::vector<i64> coords;
  for (std::size_t i = 1; i < fields.size(); ++i) {
    try {
      std::size_t used = 0;
      coords.push_back(std::stoll(fields[i], &used));
      if (used != fields[i].size()) throw std::invalid_argument(fields[i]);
    } catch (const std::exception&) {
      fail(ErrorKind::parse, "bad coordinate '" + fields[i] + "'");
    }
  }
  return VElement(parse_space(head), std::move(coords), q);
}

// ---------------------------------------------------------------------------
// Boxes, optionally intersected with a progression x0 + m_prog Z^r.

struct BoxRegion {
  double side = 0.0;                       // Z: |x_i| <= Z
  std::optional<std::vector<i64>> center;  // x0
  i64 progression = 1;                     // m_prog

  BoxRegion(double z = 0.0, std::optional<std::vector<i64>> x0 = std::nullopt, i64 m = 1)
      : side(z), center(std::move(x0)), progression(m) {}
};

inline constexpr u64 kDefaultPointBudget = 2'000'000'000ULL;

/// Lexicographic enumeration of box points (first coordinate slowest).
/// Random access by index lets callers split the range across workers.
template <class Space>
class BoxEnumerator {
 public:
  using Coords = typename Space::Coords;

  explicit BoxEnumerator(const BoxRegion& box, u64 budget = kDefaultPointBudget) {
    if (!(box.side >= 0.0)) fail(ErrorKind::domain, "box side must be non-negative");
    if (box.progression < 1) fail(ErrorKind::domain, "progression modulus must be positive");
    const i64 bound = static_cast<i64>(std::floor(box.side + 1e-9));
    double volume = 1.0;
    for (int i = 0; i < Space::r; ++i) {
      const i64 x0 = box.center ? (*box.center)[static_cast<std::size_t>(i)] : 0;
      // smallest value >= -bound congruent to x0
      const i64 first = -bound + mod(x0 + bound, box.progression);
      std::vector<i64> vals;
      for (i64 v = first; v <= bound; v += box.progression) vals.push_back(v);
      axes_[static_cast<std::size_t>(i)] = std::move(vals);
      volume *= static_cast<double>(axes_[static_cast<std::size_t>(i)].size());
    }
    if (box.center && static_cast<int>(box.center->size()) != Space::r) fail(ErrorKind::domain, "center has wrong length");
    if (volume > static_cast<double>(budget)) {
      fail(ErrorKind::resource_limit, "box holds " + std::to_string(volume) + " points, budget " + std::to_string(budget));
    }
    size_ = static_cast<u64>(volume);
  }

  u64 size() const noexcept { return size_; }
  const std::vector<i64>& axis(int i) const { return axes_[static_cast<std::size_t>(i)]; }

  Coords at(u64 index) const {
    Coords x{};
    for (int i = Space::r - 1; i >= 0; --i) {
      const auto& ax = axes_[static_cast<std::size_t>(i)];
      x[static_cast<std::size_t>(i)] = ax[index % ax.size()];
      index /= ax.size();
    }
    return x;
  }

  /// Visit points with index in [begin, end) in lexicographic order.
  template <class F>
  void for_each(u64 begin, u64 end, F&& f) const {
    if (begin >= end || size_ == 0) return;
    std::array<std::size_t, Space::r> digit{};
    u64 rem = begin;
    for (int i = Space::r - 1; i >= 0; --i) {
      const auto n = axes_[static_cast<std::size_t>(i)].size();
      digit[static_cast<std::size_t>(i)] = rem % n;
      rem /= n;
    }
    Coords x{};
    for (int i = 0; i < Space::r; ++i) x[static_cast<std::size_t>(i)] = axes_[static_cast<std::size_t>(i)][digit[static_cast<std::size_t>(i)]];
    for (u64 k = begin; k < end; ++k) {
      f(static_cast<const Coords&>(x));
      for (int i = Space::r - 1; i >= 0; --i) {
        const auto& ax = axes_[static_cast<std::size_t>(i)];
        auto& dgt = digit[static_cast<std::size_t>(i)];
        if (++dgt < ax.size()) {
          x[static_cast<std::size_t>(i)] = ax[dgt];
          break;
        }
        dgt = 0;
        x[static_cast<std::size_t>(i)] = ax[0];
      }
    }
  }

  template <class F>
  void for_each(F&& f) const {
    for_each(0, size_, std::forward<F>(f));
  }

 private:
  std::array<std::vector<i64>, Space::r> axes_;
  u64 size_ = 0;
};

/// Materialized enumeration for small boxes (tests, CLI listing).
inline std::vector<VElement> enumerate_box(SpaceId space, const BoxRegion& box, u64 budget = kDefaultPointBudget) {
  return visit_space(space, [&](auto s) {
    using S = decltype(s);
    BoxEnumerator<S> en(box, budget);
    std::vector<VElement> out;
    out.reserve(en.size());
    en.for_each([&](const typename S::Coords& x) { out.push_back(VElement::from<S>(x)); });
    return out;
  });
}

}  // namespace pvs
