#pragma once
// Fourier transforms of Psi_q = 1[q | Disc]: brute force by pairing
// histograms, the closed forms per orbit (quartic) or class (cubic), and the
// multiplicative extension to squarefree q.

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pvs/histogram.hpp"
#include "pvs/orbits.hpp"
#include "pvs/rational.hpp"
#include "pvs/space.hpp"

namespace pvs {

inline constexpr const char* kLibraryVersion = "1.0.0";

enum class ConditionKind { disc_divisible };

struct LocalCondition {
  SpaceId space = SpaceId::cubic;
  ConditionKind kind = ConditionKind::disc_divisible;
};

inline std::string to_string(ConditionKind) { return "disc-divisible"; }

inline void require_good_prime(SpaceId space, i64 p) {
  if (!is_prime(p)) fail(ErrorKind::invalid_modulus, std::to_string(p) + " is not prime");
  if (descriptor(space).is_bad(p)) fail(ErrorKind::bad_prime, to_string(space) + " formulas exclude p = " + std::to_string(p));
}

// ---------------------------------------------------------------------------
// Cubic classes

enum class CubicClass { pV, singular, nonsingular };

inline std::string to_string(CubicClass c) {
  switch (c) {
    case CubicClass::pV: return "pV";
    case CubicClass::singular: return "singular";
    case CubicClass::nonsingular: return "nonsingular";
  }
  return "?";
}

inline CubicClass parse_cubic_class(const std::string& s) {
  for (auto c : {CubicClass::pV, CubicClass::singular, CubicClass::nonsingular}) {
    if (s == to_string(c)) return c;
  }
  fail(ErrorKind::invalid_label, "unknown cubic class '" + s + "'");
}

/// Class of y in V(F_p), p != 3.
inline CubicClass cubic_class(const CubicSpace::Coords& y, i64 p) {
  if (std::all_of(y.begin(), y.end(), [p](i64 v) { return mod(v, p) == 0; })) return CubicClass::pV;
  return CubicSpace::disc_mod(y, p) == 0 ? CubicClass::singular : CubicClass::nonsingular;
}

/// Class of a dual element given in dual coordinates; valid for every odd p,
/// including 3, through the dual discriminant Disc(rho(w)) / 27.
inline CubicClass cubic_class_dual(const CubicSpace::Coords& w, i64 p) {
  if (std::all_of(w.begin(), w.end(), [p](i64 v) { return mod(v, p) == 0; })) return CubicClass::pV;
  return CubicSpace::dual_disc_mod(w, p) == 0 ? CubicClass::singular : CubicClass::nonsingular;
}

// ---------------------------------------------------------------------------
// Closed forms

namespace detail {

/// sum_k coeffs[k] p^{-k}
inline Rational poly_inv(i64 p, std::initializer_list<int> coeffs) {
  Rational s = 0;
  unsigned k = 0;
  for (int c : coeffs) {
    if (c != 0) s += Rational(c) * inv_pow(p, k);
    ++k;
  }
  return s;
}

}  // namespace detail

inline Rational cubic_closed_form(i64 p, CubicClass c) {
  switch (c) {
    case CubicClass::pV: return detail::poly_inv(p, {0, 1, 1, -1});
    case CubicClass::singular: return detail::poly_inv(p, {0, 0, 1, -1});
    case CubicClass::nonsingular: return detail::poly_inv(p, {0, 0, 0, -1});
  }
  fail(ErrorKind::invalid_label, "unknown cubic class");
}

inline Rational quartic_closed_form(i64 p, Label l) {
  using detail::poly_inv;
  switch (l) {
    case Label::O0: return poly_inv(p, {0, 1, 2, -1, -2, -1, 2, 1, -1});
    case Label::D1sq: return poly_inv(p, {0, 0, 0, 1, -1, -2, 2, 1, -1});
    case Label::D11: return poly_inv(p, {0, 0, 0, 0, 2, -5, 3, 1, -1});
    case Label::Cs: return poly_inv(p, {0, 0, 0, 0, 1, -3, 2, 1, -1});
    case Label::D2:
    case Label::Dns:
    case Label::Cns:
    case Label::T11:
    case Label::T2: return poly_inv(p, {0, 0, 0, 0, 0, -1, 1, 1, -1});
    case Label::S1sq1sq: return poly_inv(p, {0, 0, 0, 0, 0, 0, -1, 2, -1});
    case Label::S2sq: return poly_inv(p, {0, 0, 0, 0, 0, 0, 1, 0, -1});
    case Label::S1_4:
    case Label::S1_3_1:
    case Label::S1sq11:
    case Label::S1sq2: return poly_inv(p, {0, 0, 0, 0, 0, 0, 0, 1, -1});
    case Label::S1111:
    case Label::S112:
    case Label::S22:
    case Label::S13:
    case Label::S4: return poly_inv(p, {0, 0, 0, 0, 0, 0, 0, 0, -1});
  }
  fail(ErrorKind::invalid_label, "unknown orbit label");
}

/// Closed form by label name: a cubic class name or a quartic orbit label.
inline Rational ft_closed_form(const LocalCondition& cond, i64 p, const std::string& label) {
  if (cond.space == SpaceId::cubic) return cubic_closed_form(p, parse_cubic_class(label));
  return quartic_closed_form(p, parse_label(label));
}

/// omega(p) = Psi_p-hat(0), the density of p | Disc.
inline Rational omega(SpaceId space, i64 p) {
  return space == SpaceId::cubic ? cubic_closed_form(p, CubicClass::pV) : quartic_closed_form(p, Label::O0);
}

// ---------------------------------------------------------------------------
// Brute force

/// Support of Psi_q for the cubic space: all x mod q with q | Disc(x).
inline std::vector<CubicSpace::Coords> cubic_support(i64 q) {
  Modulus mq(q);
  std::vector<CubicSpace::Coords> out;
  for (i64 a = 0; a < q; ++a) {
    for (i64 b = 0; b < q; ++b) {
      for (i64 c = 0; c < q; ++c) {
        for (i64 d = 0; d < q; ++d) {
          const CubicSpace::Coords x{a, b, c, d};
          bool in = true;
          for (i64 p : mq.primes()) in = in && CubicSpace::disc_mod(x, p) == 0;
          if (in) out.push_back(x);
        }
      }
    }
  }
  return out;
}

/// Exact Psi_q-hat on V*(Z/q) for the cubic space, q squarefree, with the
/// argument in dual coordinates and the integral pairing sum x_i w_i. The
/// support is enumerated once; each evaluation is one histogram.
class CubicDualTransform {
 public:
  explicit CubicDualTransform(i64 q) : q_(q), support_(cubic_support(q)) {}

  i64 q() const noexcept { return q_; }
  std::size_t support_size() const noexcept { return support_.size(); }

  PairingHistogram histogram(const CubicSpace::Coords& w) const {
    PairingHistogram h(q_);
    CubicSpace::Coords wr{};
    for (int i = 0; i < 4; ++i) wr[static_cast<std::size_t>(i)] = mod(w[static_cast<std::size_t>(i)], q_);
    for (const auto& x : support_) h.add((x[0] * wr[0] + x[1] * wr[1] + x[2] * wr[2] + x[3] * wr[3]) % q_);
    return h;
  }

  Rational operator()(const CubicSpace::Coords& w) const { return ft_value_from_histogram(histogram(w), 4); }

 private:
  i64 q_;
  std::vector<CubicSpace::Coords> support_;
};

/// Brute-force Psi_p-hat(y) for y in V(F_p), pairing in V-coordinates. One
/// sweep over V(F_p); p^12 points for the quartic space.
inline Rational ft_bruteforce(const LocalCondition& cond, i64 p, const VElement& y) {
  require_good_prime(cond.space, p);
  if (y.space != cond.space) fail(ErrorKind::domain, "target lives in the other space");
  const VElement yr = y.reduce(p);
  PairingHistogram h(p);
  if (cond.space == SpaceId::cubic) {
    const auto t = yr.as<CubicSpace>();
    for (const auto& x : cubic_support(p)) h.add(CubicSpace::pairing_mod(x, t, p));
    return ft_value_from_histogram(h, 4);
  }
  const double points = std::pow(static_cast<double>(p), 12.0);
  if (points > 1.0e9) fail(ErrorKind::resource_limit, "single-target quartic sweep at p = " + std::to_string(p));
  const auto t = yr.as<QuarticSpace>();
  const QuarticCodec codec(p);
  for (u64 i = 0; i < codec.size(); ++i) {
    const auto x = codec.decode(i);
    if (QuarticSpace::disc_mod(x, p) == 0) h.add(QuarticSpace::pairing_mod(x, t, p));
  }
  return ft_value_from_histogram(h, 12);
}

/// Cubic transform at p = 3 or any odd p with the argument in dual coordinates.
inline Rational ft_bruteforce_dual(i64 q, const CubicSpace::Coords& w) { return CubicDualTransform(q)(w); }

/// One sweep over V(F_p) for the quartic space, one pairing histogram per
/// target. The sweep is split over the A-matrix index across workers; each
/// worker owns its histograms and the integer merge is order independent.
inline std::vector<PairingHistogram> quartic_histograms(i64 p, const std::vector<QuarticSpace::Coords>& targets,
                                                        int workers = 1) {
  require_good_prime(SpaceId::quartic, p);
  if (p > 7) fail(ErrorKind::resource_limit, "quartic sweep beyond p = 7");
  const QuarticCodec codec(p);
  const u64 half = codec.half();
  const std::size_t T = targets.size();
  static constexpr int w6[6] = {1, 1, 1, 2, 2, 2};

  std::vector<std::array<std::uint8_t, 6>> digits(half);
  std::vector<std::uint16_t> det(half);
  std::vector<std::array<std::uint16_t, 6>> adjw(half);
  for (u64 h = 0; h < half; ++h) {
    const auto s = codec.decode_half(h);
    for (int i = 0; i < 6; ++i) digits[h][static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(s[static_cast<std::size_t>(i)]);
    const Sym3<i64> m{s[0], s[1], s[2], s[3], s[4], s[5]};
    det[h] = static_cast<std::uint16_t>(mod(m.det(), p));
    const auto adj = m.adjugate();
    const i64 ad[6] = {adj.s11, adj.s22, adj.s33, adj.s12, adj.s13, adj.s23};
    for (int i = 0; i < 6; ++i) adjw[h][static_cast<std::size_t>(i)] = static_cast<std::uint16_t>(mod(ad[i] * w6[i], p));
  }
  const std::size_t p4 = static_cast<std::size_t>(p * p * p * p);
  std::vector<std::uint8_t> singular(p4);
  for (std::size_t k = 0; k < p4; ++k) {
    const i64 f0 = static_cast<i64>(k) % p, f1 = static_cast<i64>(k) / p % p, f2 = static_cast<i64>(k) / (p * p) % p,
              f3 = static_cast<i64>(k) / (p * p * p);
    singular[k] = cubic_disc_mod(f0, f1, f2, f3, p) == 0;
  }
  // Per-target pairing contributions of the A and B halves, laid out [half][target].
  std::vector<std::uint16_t> pa(half * T), pb(half * T);
  for (u64 h = 0; h < half; ++h) {
    for (std::size_t t = 0; t < T; ++t) {
      i64 sa = 0, sb = 0;
      for (int i = 0; i < 6; ++i) {
        sa += w6[i] * digits[h][static_cast<std::size_t>(i)] * mod(targets[t][static_cast<std::size_t>(i)], p);
        sb += w6[i] * digits[h][static_cast<std::size_t>(i)] * mod(targets[t][static_cast<std::size_t>(i + 6)], p);
      }
      pa[h * T + t] = static_cast<std::uint16_t>(sa % p);
      pb[h * T + t] = static_cast<std::uint16_t>(sb % p);
    }
  }

  const auto pu = static_cast<std::uint32_t>(p);
  auto body = [&](u64 begin, u64 end) {
    std::vector<u64> counts(T * static_cast<std::size_t>(p), 0);
    std::vector<std::uint32_t> pair_mod(2 * static_cast<std::size_t>(p));
    for (std::size_t k = 0; k < pair_mod.size(); ++k) pair_mod[k] = static_cast<std::uint32_t>(k % pu);
    for (u64 a = begin; a < end; ++a) {
      const auto& da = digits[a];
      const auto& wa = adjw[a];
      const std::uint32_t f0 = det[a];
      const std::uint16_t* pa_row = &pa[a * T];
      for (u64 b = 0; b < half; ++b) {
        const auto& db = digits[b];
        const auto& wb = adjw[b];
        std::uint32_t c1 = 0, c2 = 0;
        for (int i = 0; i < 6; ++i) {
          c1 += static_cast<std::uint32_t>(wa[static_cast<std::size_t>(i)]) * db[static_cast<std::size_t>(i)];
          c2 += static_cast<std::uint32_t>(wb[static_cast<std::size_t>(i)]) * da[static_cast<std::size_t>(i)];
        }
        const std::size_t key = f0 + pu * ((c1 % pu) + pu * ((c2 % pu) + pu * det[b]));
        if (!singular[key]) continue;
        const std::uint16_t* pb_row = &pb[b * T];
        for (std::size_t t = 0; t < T; ++t) ++counts[t * p + pair_mod[pa_row[t] + pb_row[t]]];
      }
    }
    return counts;
  };
  const auto parts = run_partitioned<std::vector<u64>>(half, workers, body);
  std::vector<PairingHistogram> out(T, PairingHistogram(p));
  for (const auto& part : parts) {
    for (std::size_t t = 0; t < T; ++t) {
      for (i64 k = 0; k < p; ++k) out[t].counts[static_cast<std::size_t>(k)] += part[t * static_cast<std::size_t>(p) + static_cast<std::size_t>(k)];
    }
  }
  return out;
}

inline std::vector<Rational> ft_bruteforce_multi(i64 p, const std::vector<QuarticSpace::Coords>& targets, int workers = 1) {
  std::vector<Rational> out;
  for (const auto& h : quartic_histograms(p, targets, workers)) out.push_back(ft_value_from_histogram(h, 12));
  return out;
}

/// Psi_2-hat for the cubic space by brute force over V(F_2). No closed form is
/// claimed at 2; since 1/3 = 1 mod 2 the V and integral pairings agree there,
/// so the table serves both V(Z) and dual-coordinate arguments.
inline const Rational& cubic_ft_at_two(const CubicSpace::Coords& y) {
  static const std::vector<Rational> table = [] {
    const CubicDualTransform t(2);
    std::vector<Rational> v;
    for (i64 i = 0; i < 16; ++i) v.push_back(t({i >> 3 & 1, i >> 2 & 1, i >> 1 & 1, i & 1}));
    return v;
  }();
  return table[static_cast<std::size_t>(mod(y[0], 2) * 8 + mod(y[1], 2) * 4 + mod(y[2], 2) * 2 + mod(y[3], 2))];
}

// ---------------------------------------------------------------------------
// Squarefree q on the lattice

/// Psi_q-hat(y) for y in V(Z), in the paper's convention: the factor (q, m)
/// is dropped, each remaining p | q is classified and the closed forms are
/// multiplied (cubic p = 2 from the brute-force table).
inline Rational ft_on_lattice(const LocalCondition& cond, const Modulus& q, const VElement& y) {
  if (y.modulus != 0) fail(ErrorKind::domain, "ft_on_lattice expects y over Z");
  const auto& desc = descriptor(cond.space);
  Rational v = 1;
  for (i64 p : q.primes()) {
    if (desc.m % p == 0) continue;
    if (cond.space == SpaceId::cubic && p == 2) {
      v *= cubic_ft_at_two(y.as<CubicSpace>());
      continue;
    }
    if (desc.is_bad(p)) fail(ErrorKind::bad_prime, "no closed form at p = " + std::to_string(p));
    if (cond.space == SpaceId::cubic) {
      v *= cubic_closed_form(p, cubic_class(y.as<CubicSpace>(), p));
    } else {
      v *= quartic_closed_form(p, classify(y.as<QuarticSpace>(), p));
    }
  }
  return v;
}

inline Rational ft_on_lattice(const LocalCondition& cond, i64 q, const VElement& y) {
  return ft_on_lattice(cond, Modulus(q), y);
}

/// The transform on the dual lattice itself, no factor dropped: the cubic
/// argument is in dual coordinates, and each p | q (3 included) is classified
/// by the dual discriminant; p = 2 comes from the brute-force table.
inline Rational ft_dual(const Modulus& q, const CubicSpace::Coords& w) {
  Rational v = 1;
  for (i64 p : q.primes()) {
    if (p == 2) {
      v *= cubic_ft_at_two(w);
      continue;
    }
    v *= cubic_closed_form(p, cubic_class_dual(w, p));
  }
  return v;
}

struct QSplitResult {
  Rational lhs;
  Rational rhs;
  bool holds;
};

/// Psi_q-hat(x) = Psi_{q0}-hat(x) Psi_{q1}-hat(x / q0) for x in q0 V*(Z),
/// q = q0 q1, both sides by brute force on the cubic dual lattice.
class QSplitChecker {
 public:
  QSplitChecker(i64 q0, i64 q1) : q0_(q0), q1_(q1), full_(q0 * q1), t0_(q0), t1_(q1) {
    if (std::gcd(q0, q1) != 1) fail(ErrorKind::invalid_modulus, "q0 and q1 must be coprime");
  }

  QSplitResult operator()(const CubicSpace::Coords& x) const {
    CubicSpace::Coords scaled{};
    for (int i = 0; i < 4; ++i) {
      if (mod(x[static_cast<std::size_t>(i)], q0_) != 0) fail(ErrorKind::domain, "x is not in q0 V(Z)");
      scaled[static_cast<std::size_t>(i)] = x[static_cast<std::size_t>(i)] / q0_;
    }
    const Rational lhs = full_(x);
    const Rational rhs = t0_(x) * t1_(scaled);
    return {lhs, rhs, lhs == rhs};
  }

 private:
  i64 q0_, q1_;
  CubicDualTransform full_, t0_, t1_;
};

inline bool ft_qsplit_check(i64 q0, i64 q1, const CubicSpace::Coords& x) { return QSplitChecker(q0, q1)(x).holds; }

// ---------------------------------------------------------------------------
// Fourier tables

struct FourierRow {
  i64 p;
  std::string label;
  Rational value;
  std::string source;  // "bruteforce" or "closed_form"
};

struct FourierTable {
  SpaceId space = SpaceId::cubic;
  std::vector<FourierRow> rows;
};

inline constexpr const char* kFourierTableVersion = "pvs-fourier-table/1";

inline std::string fourier_header(SpaceId space) {
  return std::string("# ") + kFourierTableVersion + " space=" + to_string(space) + " condition=disc-divisible version=" +
         kLibraryVersion;
}

inline void write_fourier_table(std::ostream& os, const FourierTable& t) {
  os << fourier_header(t.space) << '\n';
  os << "# prime\tlabel\tnumerator\tdenominator\tsource\n";
  for (const auto& r : t.rows) {
    os << r.p << '\t' << r.label << '\t' << numerator(r.value) << '\t' << denominator(r.value) << '\t' << r.source << '\n';
  }
}

/// Returns nothing if the header names another space or library version.
inline std::optional<FourierTable> read_fourier_table(std::istream& is, SpaceId space) {
  std::string line;
  if (!std::getline(is, line) || line != fourier_header(space)) return std::nullopt;
  FourierTable t;
  t.space = space;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string p, label, num, den, source;
    if (!(std::getline(ls, p, '\t') && std::getline(ls, label, '\t') && std::getline(ls, num, '\t') &&
          std::getline(ls, den, '\t') && std::getline(ls, source))) {
      fail(ErrorKind::parse, "malformed fourier table row: " + line);
    }
    t.rows.push_back({std::stoll(p), label, make_rational(BigInt(num), BigInt(den)), source});
  }
  return t;
}

/// File cache keyed by (space, p, condition, version) through the file name
/// and the header line; stale files are ignored.
class FourierCache {
 public:
  explicit FourierCache(std::string dir) : dir_(std::move(dir)) {}

  std::string path(SpaceId space, i64 p) const {
    return dir_ + "/ft-" + to_string(space) + "-p" + std::to_string(p) + ".tsv";
  }

  std::optional<FourierTable> load(SpaceId space, i64 p) const {
    std::ifstream in(path(space, p));
    if (!in) return std::nullopt;
    try {
      return read_fourier_table(in, space);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  void store(const FourierTable& t, i64 p) const {
    std::ofstream out(path(t.space, p));
    if (!out) fail(ErrorKind::config, "cannot write cache file " + path(t.space, p));
    write_fourier_table(out, t);
  }

 private:
  std::string dir_;
};

// ---------------------------------------------------------------------------
// Verification drivers

struct Mismatch {
  i64 p;
  std::string label;
  Rational bruteforce;
  Rational closed_form;
};

struct VerifyResult {
  FourierTable table;
  std::vector<Mismatch> mismatches;
  u64 targets_checked = 0;
};

/// Cubic table at p. Targets are taken in dual coordinates so that p = 3 is
/// covered; for p != 3 the V-coordinate sweep is run as well on the class
/// representatives. exhaustive = every w in V*(F_p), otherwise one
/// representative per class.
inline VerifyResult verify_cubic(i64 p, bool exhaustive) {
  if (!is_prime(p)) fail(ErrorKind::invalid_modulus, std::to_string(p) + " is not prime");
  if (p == 2) fail(ErrorKind::bad_prime, "cubic formulas exclude p = 2");
  VerifyResult res;
  res.table.space = SpaceId::cubic;
  const CubicDualTransform ft(p);
  std::map<CubicClass, std::optional<Rational>> class_value;
  auto check = [&](const CubicSpace::Coords& w) {
    const CubicClass c = cubic_class_dual(w, p);
    const Rational bf = ft(w);
    const Rational cf = cubic_closed_form(p, c);
    ++res.targets_checked;
    if (bf != cf) res.mismatches.push_back({p, to_string(c), bf, cf});
    if (!class_value[c]) class_value[c] = bf;
  };
  if (exhaustive) {
    for (i64 a = 0; a < p; ++a)
      for (i64 b = 0; b < p; ++b)
        for (i64 c = 0; c < p; ++c)
          for (i64 d = 0; d < p; ++d) check({a, b, c, d});
  } else {
    check({0, 0, 0, 0});
    check({1, 0, 0, 0});  // a u^3: singular
    // first nonsingular element in lexicographic order
    for (i64 n = 1; n < p * p * p * p; ++n) {
      const CubicSpace::Coords w{n / (p * p * p), n / (p * p) % p, n / p % p, n % p};
      if (cubic_class_dual(w, p) == CubicClass::nonsingular) {
        check(w);
        break;
      }
    }
  }
  if (p != 3) {
    // V-coordinate route on the same classes
    const LocalCondition cond{SpaceId::cubic};
    for (const CubicSpace::Coords y : {CubicSpace::Coords{0, 0, 0, 0}, CubicSpace::Coords{1, 0, 0, 0}, CubicSpace::Coords{1, 0, -1, 0}}) {
      const CubicClass c = cubic_class(y, p);
      const Rational bf = ft_bruteforce(cond, p, VElement::from<CubicSpace>(y, p));
      const Rational cf = cubic_closed_form(p, c);
      if (bf != cf) res.mismatches.push_back({p, to_string(c) + "(V)", bf, cf});
    }
  }
  for (auto c : {CubicClass::pV, CubicClass::singular, CubicClass::nonsingular}) {
    if (class_value[c]) res.table.rows.push_back({p, to_string(c), *class_value[c], "bruteforce"});
    res.table.rows.push_back({p, to_string(c), cubic_closed_form(p, c), "closed_form"});
  }
  return res;
}

/// Quartic table from an orbit table: one brute-force value per orbit
/// representative through the multi-target sweep.
inline VerifyResult verify_quartic(const OrbitTable& orbits, int workers = 1) {
  const i64 p = orbits.p;
  VerifyResult res;
  res.table.space = SpaceId::quartic;
  std::vector<QuarticSpace::Coords> reps;
  for (const auto& e : orbits.entries) reps.push_back(e.representative);
  const auto values = ft_bruteforce_multi(p, reps, workers);
  for (std::size_t i = 0; i < reps.size(); ++i) {
    const Label l = orbits.entries[i].label;
    const Rational cf = quartic_closed_form(p, l);
    ++res.targets_checked;
    res.table.rows.push_back({p, to_string(l), values[i], "bruteforce"});
    res.table.rows.push_back({p, to_string(l), cf, "closed_form"});
    if (values[i] != cf) res.mismatches.push_back({p, to_string(l), values[i], cf});
  }
  return res;
}

}  // namespace pvs
