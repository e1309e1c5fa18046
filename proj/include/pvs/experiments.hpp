#pragma once
// Desk-scale experiments on binary cubic forms (and the quartic dual-side
// sum): smoothed lattice counts with q | Disc, the Poisson identity and its
// truncation bound, level-of-distribution error sums, dual-side bound sums,
// geometric-sieve pair counts and the reducible locus.

#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "pvs/fourier.hpp"
#include "pvs/sieve.hpp"
#include "pvs/smooth.hpp"

namespace pvs {

// ---------------------------------------------------------------------------
// Box weights

/// phi(x X^{-1/4}) on the cubic box: w[i + M] = psi(i / (s X^{1/4})),
/// coordinates in [-M, M] (outside the weight vanishes).
struct CubicBoxWeights {
  double X = 0.0;
  double T = 0.0;  // s X^{1/4}
  i64 M = 0;
  std::vector<double> w;

  double at(i64 i) const { return w[static_cast<std::size_t>(i + M)]; }
  u64 points() const { return static_cast<u64>(std::pow(2 * M + 1, 4)); }
};

inline CubicBoxWeights cubic_box_weights(double X, const SmoothWeight& phi, u64 budget = kDefaultPointBudget) {
  if (!(X >= 1.0)) fail(ErrorKind::domain, "X must be at least 1");
  CubicBoxWeights b;
  b.X = X;
  b.T = phi.scale() * std::pow(X, 0.25);
  b.M = static_cast<i64>(std::ceil(b.T)) - 1;
  if (std::pow(2.0 * b.M + 1.0, 4) > static_cast<double>(budget)) {
    fail(ErrorKind::resource_limit, "box of side " + std::to_string(2 * b.M + 1) + " exceeds the point budget");
  }
  for (i64 i = -b.M; i <= b.M; ++i) b.w.push_back(SmoothWeight::psi(static_cast<double>(i) / b.T));
  return b;
}

/// Direct enumeration: sum of phi over the box with q | Disc(x), in
/// lexicographic order (a slowest, d fastest) with Neumaier summation.
inline double weighted_count_direct(const CubicBoxWeights& box, i64 q) {
  if (q < 1) fail(ErrorKind::invalid_modulus, "q must be positive");
  NeumaierSum acc;
  const i64 M = box.M;
  for (i64 a = -M; a <= M; ++a) {
    for (i64 b = -M; b <= M; ++b) {
      const double wab = box.at(a) * box.at(b);
      for (i64 c = -M; c <= M; ++c) {
        const double wabc = wab * box.at(c);
        for (i64 d = -M; d <= M; ++d) {
          if (cubic_disc<i64>(a, b, c, d) % q == 0) acc.add(wabc * box.at(d));
        }
      }
    }
  }
  return acc.value();
}

/// Serves many squarefree q from one pass over (a, b, c). For fixed (a, b, c)
/// the discriminant is A d^2 + B d + C; its roots modulo each p | q combine by
/// CRT into residues d mod q', and progression sums of psi(d / T) finish the
/// count (q' drops the primes at which every d is a root).
class CubicBatchCounter {
 public:
  CubicBatchCounter(const CubicBoxWeights& box, std::vector<i64> qs) : box_(box), qs_(std::move(qs)) {
    i64 qmax = 1;
    for (i64 q : qs_) {
      if (q < 1) fail(ErrorKind::invalid_modulus, "q must be positive");
      qmax = std::max(qmax, q);
    }
    primes_ = primes_up_to(qmax);
    std::vector<int> index(static_cast<std::size_t>(qmax) + 1, -1);
    for (std::size_t i = 0; i < primes_.size(); ++i) index[static_cast<std::size_t>(primes_[i])] = static_cast<int>(i);
    for (i64 q : qs_) {
      std::vector<int> f;
      for (i64 p : factorize(q)) f.push_back(index[static_cast<std::size_t>(p)]);
      factors_.push_back(std::move(f));
    }
    for (i64 p : primes_) {
      std::vector<int> sq(static_cast<std::size_t>(p), -1), inv(static_cast<std::size_t>(p), 0);
      for (i64 s = 0; s < p; ++s) sq[static_cast<std::size_t>(s * s % p)] = static_cast<int>(s);
      for (i64 a = 1; a < p; ++a) inv[static_cast<std::size_t>(a)] = static_cast<int>(inv_mod(a, p));
      sqrt_.push_back(std::move(sq));
      inv_.push_back(std::move(inv));
    }
    // progression sums for every squarefree modulus that can occur as q'
    prog_.resize(static_cast<std::size_t>(qmax) + 1);
    const auto mu = mobius_table(qmax);
    for (i64 m = 1; m <= qmax; ++m) {
      if (mu[static_cast<std::size_t>(m)] == 0) continue;
      auto& s = prog_[static_cast<std::size_t>(m)];
      s.assign(static_cast<std::size_t>(m), 0.0);
      for (i64 d = -box_.M; d <= box_.M; ++d) s[static_cast<std::size_t>(mod(d, m))] += box_.at(d);
    }
  }

  const std::vector<i64>& moduli() const noexcept { return qs_; }

  /// Lattice sums for all q. Workers split the a-range; per-worker Neumaier
  /// accumulators are merged in worker order.
  std::vector<double> run(int workers = 1) const {
    const i64 M = box_.M;
    const u64 n = static_cast<u64>(2 * M + 1);
    auto parts = run_partitioned<std::vector<NeumaierSum>>(n, workers, [&](u64 begin, u64 end) {
      std::vector<NeumaierSum> acc(qs_.size());
      Roots roots(primes_.size());
      Residues res;
      for (u64 ia = begin; ia < end; ++ia) {
        const i64 a = static_cast<i64>(ia) - M;
        for (i64 b = -M; b <= M; ++b) {
          const double wab = box_.at(a) * box_.at(b);
          for (i64 c = -M; c <= M; ++c) {
            const double wabc = wab * box_.at(c);
            compute_roots(a, b, c, roots);
            for (std::size_t qi = 0; qi < qs_.size(); ++qi) {
              if (!residues(qi, roots, res)) continue;
              const auto& s = prog_[static_cast<std::size_t>(res.modulus)];
              double inner = 0.0;
              for (int k = 0; k < res.count; ++k) inner += s[static_cast<std::size_t>(res.r[k])];
              acc[qi].add(wabc * inner);
            }
          }
        }
      }
      return acc;
    });
    std::vector<double> out(qs_.size());
    for (std::size_t qi = 0; qi < qs_.size(); ++qi) {
      NeumaierSum total;
      for (const auto& part : parts) total.add(part[qi]);
      out[qi] = parts.size() == 1 ? parts[0][qi].value() : total.value();
    }
    return out;
  }

  /// Comparison mode for one q (by index): the same root sets, but every
  /// admissible d is added individually in ascending order, reproducing the
  /// direct enumeration's summation order bit for bit.
  double run_ordered(std::size_t qi) const {
    const i64 M = box_.M;
    NeumaierSum acc;
    Roots roots(primes_.size());
    Residues res;
    for (i64 a = -M; a <= M; ++a) {
      for (i64 b = -M; b <= M; ++b) {
        const double wab = box_.at(a) * box_.at(b);
        for (i64 c = -M; c <= M; ++c) {
          const double wabc = wab * box_.at(c);
          compute_roots(a, b, c, roots);
          if (!residues(qi, roots, res)) continue;
          for (i64 d = -M; d <= M; ++d) {
            const i64 r = mod(d, res.modulus);
            for (int k = 0; k < res.count; ++k) {
              if (res.r[k] == r) {
                acc.add(wabc * box_.at(d));
                break;
              }
            }
          }
        }
      }
    }
    return acc.value();
  }

 private:
  enum : unsigned char { kNone = 0, kOne = 1, kTwo = 2, kAll = 3 };
  struct Roots {
    explicit Roots(std::size_t n) : kind(n), r0(n), r1(n) {}
    std::vector<unsigned char> kind;
    std::vector<i64> r0, r1;
  };
  struct Residues {
    i64 modulus = 1;
    int count = 0;
    i64 r[64] = {};
  };

  void compute_roots(i64 a, i64 b, i64 c, Roots& out) const {
    const i64 A = -27 * a * a;
    const i64 B = 18 * a * b * c - 4 * b * b * b;
    const i64 C = b * b * c * c - 4 * a * c * c * c;
    for (std::size_t i = 0; i < primes_.size(); ++i) {
      const i64 p = primes_[i];
      const i64 Ap = mod(A, p), Bp = mod(B, p), Cp = mod(C, p);
      auto& k = out.kind[i];
      if (Ap == 0) {
        if (Bp == 0) {
          k = Cp == 0 ? kAll : kNone;
        } else {
          k = kOne;
          out.r0[i] = mod(-Cp * inv_[i][static_cast<std::size_t>(Bp)], p);
        }
        continue;
      }
      if (p == 2) {
        // A = -27a^2 is odd here
        const bool z0 = Cp == 0, z1 = (Ap + Bp + Cp) % 2 == 0;
        k = static_cast<unsigned char>(z0 + z1);
        out.r0[i] = z0 ? 0 : 1;
        out.r1[i] = 1;
        continue;
      }
      const i64 delta = mod(Bp * Bp - 4 * Ap * Cp, p);
      const int s = sqrt_[i][static_cast<std::size_t>(delta)];
      if (s < 0) {
        k = kNone;
        continue;
      }
      const i64 inv2a = inv_[i][static_cast<std::size_t>(2 * Ap % p)];
      out.r0[i] = mod((-Bp + s) * inv2a, p);
      out.r1[i] = mod((-Bp - s) * inv2a, p);
      k = s == 0 ? kOne : kTwo;
    }
  }

  bool residues(std::size_t qi, const Roots& roots, Residues& res) const {
    res.modulus = 1;
    res.count = 1;
    res.r[0] = 0;
    for (int pi : factors_[qi]) {
      const auto i = static_cast<std::size_t>(pi);
      const unsigned char k = roots.kind[i];
      if (k == kNone) return false;
      if (k == kAll) continue;
      const i64 p = primes_[i];
      const i64 inv_m = inv_[i][static_cast<std::size_t>(res.modulus % p)];
      const int n = res.count;
      const i64 cand[2] = {roots.r0[i], roots.r1[i]};
      int out = 0;
      i64 next[64];
      for (int j = 0; j < n; ++j) {
        for (int t = 0; t < k; ++t) {
          const i64 r = res.r[j];
          next[out++] = r + res.modulus * mod((cand[t] - r % p) * inv_m, p);
        }
      }
      res.modulus *= p;
      res.count = out;
      std::copy(next, next + out, res.r);
    }
    return true;
  }

  const CubicBoxWeights& box_;
  std::vector<i64> qs_;
  std::vector<i64> primes_;
  std::vector<std::vector<int>> factors_;
  std::vector<std::vector<int>> sqrt_, inv_;
  std::vector<std::vector<double>> prog_;
};

// ---------------------------------------------------------------------------
// Weighted counts and the Poisson identity

struct WeightedCount {
  i64 q = 1;
  double lattice = 0.0;
  double main_term = 0.0;  // Psi_q-hat(0) phi-hat(0) X
  double error = 0.0;      // E(X, q) = lattice - main_term
};

/// Psi_q-hat(0) as a double: the density of q | Disc on V(Z/q), p = 3 included.
inline double disc_density(i64 q) { return to_double(ft_dual(Modulus(q), CubicSpace::Coords{0, 0, 0, 0})); }

enum class CountMode { direct, batched };

inline WeightedCount weighted_count(i64 q, double X, const SmoothWeight& phi = SmoothWeight(),
                                    CountMode mode = CountMode::direct) {
  const Modulus mq(q);
  const auto box = cubic_box_weights(X, phi);
  WeightedCount r;
  r.q = q;
  if (mode == CountMode::direct) {
    r.lattice = weighted_count_direct(box, q);
  } else {
    r.lattice = CubicBatchCounter(box, {q}).run(1)[0];
  }
  r.main_term = disc_density(q) * phi.phi_hat0(4) * X;
  r.error = r.lattice - r.main_term;
  return r;
}

struct PoissonReport {
  i64 q = 1;
  double X = 0.0, eta = 0.0;
  double Z = 0.0;
  i64 radius = 0;
  double lattice = 0.0;
  double main_term = 0.0;
  double dual = 0.0;        // X sum_{|w_i| <= radius} Psi_q-hat(w) phi-hat(w X^{1/4} / q)
  double tail_bound = 0.0;  // bound on the omitted w
  double allowance = 0.0;   // quadrature and rounding error of the computed sides
  bool within_tail = false;
  i64 radius2 = 0;
  double dual2 = 0.0;
  double relative_diff2 = 0.0;
  bool within_relative = false;
};

/// Left side of the Poisson identity by box enumeration against the dual side
/// truncated at Z = q X^{eta - 1/4} and at twice that radius. The dual side
/// uses the transform on V*(Z/q) in dual coordinates, w = 0 included.
inline PoissonReport poisson_check(double X, i64 q, double eta = 0.25, const SmoothWeight& phi = SmoothWeight(),
                                   double relative_tolerance = 1e-6) {
  if (!(eta > 0.0)) fail(ErrorKind::domain, "eta must be positive");
  const Modulus mq(q);
  PoissonReport rep;
  rep.q = q;
  rep.X = X;
  rep.eta = eta;
  const auto box = cubic_box_weights(X, phi);
  rep.lattice = weighted_count_direct(box, q);
  rep.main_term = disc_density(q) * phi.phi_hat0(4) * X;

  rep.Z = static_cast<double>(q) * std::pow(X, eta - 0.25);
  rep.radius = static_cast<i64>(std::floor(rep.Z + 1e-9));
  rep.radius2 = 2 * rep.radius;
  const double step = std::pow(X, 0.25) / static_cast<double>(q);  // frequency of w_i = 1

  // psi-hat is evaluated up to frequency 100; beyond it the eighth-derivative
  // majorant takes over
  const i64 K = std::max<i64>(rep.radius2, static_cast<i64>(std::ceil(100.0 / step)));
  std::vector<double> f(static_cast<std::size_t>(K) + 1), e(static_cast<std::size_t>(K) + 1);
  for (i64 k = 0; k <= K; ++k) {
    const auto v = phi.factor_hat(static_cast<double>(k) * step);
    f[static_cast<std::size_t>(k)] = v.value;
    e[static_cast<std::size_t>(k)] = v.error;
  }

  // Psi_q-hat on (Z/q)^4, from the per-prime classes
  std::vector<double> ft(static_cast<std::size_t>(q * q * q * q));
  for (i64 idx = 0; idx < q * q * q * q; ++idx) {
    const CubicSpace::Coords w{idx / (q * q * q), idx / (q * q) % q, idx / q % q, idx % q};
    ft[static_cast<std::size_t>(idx)] = to_double(ft_dual(mq, w));
  }

  auto dual_sum = [&](i64 R) {
    NeumaierSum acc;
    auto fa = [&](i64 k) { return f[static_cast<std::size_t>(k < 0 ? -k : k)]; };
    for (i64 w0 = -R; w0 <= R; ++w0) {
      for (i64 w1 = -R; w1 <= R; ++w1) {
        const double f01 = fa(w0) * fa(w1);
        for (i64 w2 = -R; w2 <= R; ++w2) {
          const double f012 = f01 * fa(w2);
          const i64 base = ((mod(w0, q) * q + mod(w1, q)) * q + mod(w2, q)) * q;
          for (i64 w3 = -R; w3 <= R; ++w3) acc.add(ft[static_cast<std::size_t>(base + mod(w3, q))] * (f012 * fa(w3)));
        }
      }
    }
    return X * acc.value();
  };
  rep.dual = dual_sum(rep.radius);
  rep.dual2 = dual_sum(rep.radius2);

  // one-dimensional sums of |psi-hat| inside and over all of Z
  auto one_dim = [&](i64 R, bool upper) {
    double s = 0.0;
    for (i64 k = -R; k <= R; ++k) {
      const auto i = static_cast<std::size_t>(k < 0 ? -k : k);
      s += upper ? std::abs(f[i]) + e[i] : std::max(0.0, std::abs(f[i]) - e[i]);
    }
    return s;
  };
  const double in_lo = one_dim(rep.radius, false), in_hi = one_dim(rep.radius, true);
  // sum_{k > K} C / (k step)^8 <= (K / 7) C / (K step)^8
  const double far = 2.0 * phi.decay_majorant(static_cast<double>(K) * step) * static_cast<double>(K) / 7.0;
  const double all_hi = one_dim(K, true) + far;
  // |Psi_q-hat| <= 1 and phi-hat is a tensor product
  rep.tail_bound = X * (std::pow(all_hi, 4) - std::pow(in_hi, 4));
  rep.allowance = X * (std::pow(in_hi, 4) - std::pow(in_lo, 4)) + 1e-12 * (std::abs(rep.lattice) + X * std::pow(in_hi, 4));
  rep.within_tail = std::abs(rep.lattice - rep.dual) <= rep.tail_bound + rep.allowance;
  rep.relative_diff2 = std::abs(rep.lattice - rep.dual2) / std::abs(rep.lattice);
  rep.within_relative = rep.relative_diff2 <= relative_tolerance;
  return rep;
}

// ---------------------------------------------------------------------------
// Level of distribution

struct LodConfig {
  double X = 1e5;
  double alpha = 0.45;
  double eta = 0.25;
  int workers = 1;
  double scale = 1.0;  // s in phi(x) = prod psi(x_i / s)
  double cap = 1e7;
};

struct LodRow {
  i64 q = 1;
  double lattice = 0.0;
  double main_term = 0.0;
  double error = 0.0;
  double Z = 0.0;  // q X^{eta - 1/4}, diagnostic only
};

struct LodBlock {
  i64 N = 1;  // q in [N, 2N)
  double sum_abs_error = 0.0;
};

struct LodReport {
  LodConfig config;
  std::vector<LodRow> rows;
  std::vector<LodBlock> blocks;
  double cumulative = 0.0;  // sum_{q <= X^alpha} |E(X, q)|
};

/// sum of |E(X, q)| over squarefree q <= X^alpha, all q from one batched pass.
inline LodReport lod_error_sum(const LodConfig& cfg, CountMode mode = CountMode::batched) {
  if (!(cfg.X >= 1.0) || cfg.X > cfg.cap) fail(ErrorKind::config, "X must lie in [1, cap]");
  if (cfg.alpha < 0.0) fail(ErrorKind::config, "alpha must be non-negative");
  if (!(cfg.eta > 0.0)) fail(ErrorKind::config, "eta must be positive");
  const SmoothWeight phi(cfg.scale);
  const auto box = cubic_box_weights(cfg.X, phi);
  const i64 qmax = std::max<i64>(1, static_cast<i64>(std::floor(std::pow(cfg.X, cfg.alpha) + 1e-9)));
  const auto qs = squarefree_up_to(qmax);
  std::vector<double> lattice;
  if (mode == CountMode::batched) {
    lattice = CubicBatchCounter(box, qs).run(cfg.workers);
  } else {
    for (i64 q : qs) lattice.push_back(weighted_count_direct(box, q));
  }
  LodReport rep;
  rep.config = cfg;
  const double ph0 = phi.phi_hat0(4);
  NeumaierSum cumulative;
  for (std::size_t i = 0; i < qs.size(); ++i) {
    LodRow row;
    row.q = qs[i];
    row.lattice = lattice[i];
    row.main_term = disc_density(row.q) * ph0 * cfg.X;
    row.error = row.lattice - row.main_term;
    row.Z = static_cast<double>(row.q) * std::pow(cfg.X, cfg.eta - 0.25);
    cumulative.add(std::abs(row.error));
    rep.rows.push_back(row);
  }
  rep.cumulative = cumulative.value();
  for (i64 N = 1; N <= qmax; N *= 2) {
    NeumaierSum s;
    for (const auto& row : rep.rows) {
      if (row.q >= N && row.q < 2 * N) s.add(std::abs(row.error));
    }
    rep.blocks.push_back({N, s.value()});
  }
  return rep;
}

struct LogLogFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::vector<double> residuals;
};

/// Least squares for log y = slope log x + intercept.
inline LogLogFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) fail(ErrorKind::domain, "need at least two points to fit");
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0) || !(y[i] > 0)) fail(ErrorKind::domain, "log-log fit needs positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  LogLogFit f;
  const double dn = static_cast<double>(n);
  f.slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / dn;
  for (std::size_t i = 0; i < n; ++i) f.residuals.push_back(ly[i] - (f.slope * lx[i] + f.intercept));
  return f;
}

// ---------------------------------------------------------------------------
// Reducible locus

/// #{x in [-Y, Y]^4 : Disc(x) = 0}. Every such nonzero form is l^2 m with l a
/// primitive linear form, unique up to sign, and m a nonzero linear form.
inline u64 reducible_count(i64 Y) {
  if (Y < 0) fail(ErrorKind::domain, "Y must be non-negative");
  u64 count = 1;  // the zero form
  const i64 U = static_cast<i64>(std::floor(std::sqrt(static_cast<double>(Y)))) + 1;
  for (i64 u = 0; u <= U; ++u) {
    for (i64 v = -U; v <= U; ++v) {
      if (std::gcd(u, v) != 1) continue;
      if (u == 0 && v != 1) continue;
      if (u * u > Y || v * v > Y) continue;
      const i64 smax = u == 0 ? Y : Y / (u * u);
      const i64 tmax = v == 0 ? Y : Y / (v * v);
      for (i64 s = -smax; s <= smax; ++s) {
        for (i64 t = -tmax; t <= tmax; ++t) {
          if (s == 0 && t == 0) continue;
          // (ux + vy)^2 (sx + ty)
          const i64 c1 = u * u * t + 2 * u * v * s, c2 = 2 * u * v * t + v * v * s;
          if (std::abs(c1) <= Y && std::abs(c2) <= Y) ++count;
        }
      }
    }
  }
  return count;
}

inline u64 reducible_count_bruteforce(i64 Y) {
  u64 n = 0;
  for (i64 a = -Y; a <= Y; ++a)
    for (i64 b = -Y; b <= Y; ++b)
      for (i64 c = -Y; c <= Y; ++c)
        for (i64 d = -Y; d <= Y; ++d) n += cubic_disc<i64>(a, b, c, d) == 0;
  return n;
}

// ---------------------------------------------------------------------------
// Dual-side bound sum

struct DualBoundConfig {
  SpaceId space = SpaceId::cubic;
  double X = 1e6;
  double eta = 0.1;
  i64 N = 10;
  bool check_split = false;
  u64 budget = kDefaultPointBudget;
};

struct DualBoundRow {
  i64 q = 1;
  Rational value;      // sum over 0 != x, |x_i| <= Z of |Psi_q-hat(x)|
  Rational zero_part;  // the part with Disc(x) = 0
};

struct DualBoundReport {
  double Z = 0.0;  // N X^{eta - 1/d}
  i64 radius = 0;
  Rational total, zero_part, nonzero_part;
  std::vector<DualBoundRow> rows;
  u64 split_checked = 0;
  u64 split_failed = 0;
};

namespace detail {

/// Cubic Psi_p-hat on a class; p = 2 through the brute-force table.
inline Rational cubic_local_value(i64 p, CubicClass c) {
  if (p != 2) return cubic_closed_form(p, c);
  static const CubicSpace::Coords reps[3] = {{0, 0, 0, 0}, {0, 0, 0, 1}, {0, 1, 1, 0}};
  return cubic_ft_at_two(reps[static_cast<int>(c)]);
}

/// Squarefree q in [lo, hi].
inline std::vector<i64> squarefree_between(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 q : squarefree_up_to(std::max<i64>(hi, 1))) {
    if (q >= lo && q <= hi) out.push_back(q);
  }
  return out;
}

}  // namespace detail

/// sum over squarefree q in [N, 2N] and 0 != x in V(Z) with |x_i| <= Z of
/// |Psi_q-hat(x)|, exactly, with Psi_q-hat from ft_on_lattice (primes dividing
/// m dropped). Points are tallied by their class tuple at the primes of q.
inline DualBoundReport dual_bound_sum(const DualBoundConfig& cfg) {
  if (cfg.N < 1) fail(ErrorKind::config, "N must be positive");
  const auto& desc = descriptor(cfg.space);
  DualBoundReport rep;
  rep.Z = static_cast<double>(cfg.N) * std::pow(cfg.X, cfg.eta - 1.0 / desc.d);
  rep.radius = static_cast<i64>(std::floor(rep.Z + 1e-9));
  const auto qs = detail::squarefree_between(cfg.N, 2 * cfg.N);
  const LocalCondition cond{cfg.space, ConditionKind::disc_divisible};

  // primes that count, per q, and the union of them
  std::vector<std::vector<i64>> qprimes;
  std::vector<i64> all_primes;
  for (i64 q : qs) {
    std::vector<i64> ps;
    for (i64 p : factorize(q)) {
      if (desc.m % p == 0) continue;
      ps.push_back(p);
      all_primes.push_back(p);
    }
    qprimes.push_back(ps);
  }
  std::sort(all_primes.begin(), all_primes.end());
  all_primes.erase(std::unique(all_primes.begin(), all_primes.end()), all_primes.end());
  std::map<i64, std::size_t> pindex;
  for (std::size_t i = 0; i < all_primes.size(); ++i) pindex[all_primes[i]] = i;

  const int r = desc.r;
  const i64 R = rep.radius;
  const double points = std::pow(2.0 * static_cast<double>(R) + 1.0, r);
  if (points > static_cast<double>(cfg.budget)) fail(ErrorKind::resource_limit, "dual box exceeds the point budget");

  // class index per prime: cubic 0..2, quartic the label index
  const int nclass = cfg.space == SpaceId::cubic ? 3 : static_cast<int>(kLabelCount);
  // key = tuple of classes at the primes of q (base nclass), [0] nonzero disc, [1] zero disc
  std::vector<std::map<u64, std::array<u64, 2>>> tally(qs.size());
  std::vector<int> cls(all_primes.size());

  if (R >= 1) {
    std::vector<i64> x(static_cast<std::size_t>(r), -R);
    for (;;) {
      if (std::any_of(x.begin(), x.end(), [](i64 v) { return v != 0; })) {
        bool disc_zero;
        if (cfg.space == SpaceId::cubic) {
          const i64 D = cubic_disc<i64>(x[0], x[1], x[2], x[3]);
          disc_zero = D == 0;
          for (std::size_t i = 0; i < all_primes.size(); ++i) {
            const i64 p = all_primes[i];
            const bool zero = std::all_of(x.begin(), x.end(), [p](i64 v) { return v % p == 0; });
            cls[i] = zero ? 0 : (D % p == 0 ? 1 : 2);
          }
        } else {
          QuarticSpace::Coords c{};
          std::copy(x.begin(), x.end(), c.begin());
          disc_zero = QuarticSpace::disc_big(c) == 0;
          for (std::size_t i = 0; i < all_primes.size(); ++i) cls[i] = static_cast<int>(classify(c, all_primes[i]));
        }
        for (std::size_t qi = 0; qi < qs.size(); ++qi) {
          u64 key = 0;
          for (i64 p : qprimes[qi]) key = key * static_cast<u64>(nclass) + static_cast<u64>(cls[pindex[p]]);
          ++tally[qi][key][disc_zero ? 1 : 0];
        }
        if (cfg.check_split && cfg.space == SpaceId::cubic) {
          for (std::size_t qi = 0; qi < qs.size(); ++qi) {
            i64 q0 = 1;
            for (i64 p : qprimes[qi]) {
              if (cls[pindex[p]] == 0) q0 *= p;
            }
            if (q0 == 1) continue;
            const i64 q1 = qs[qi] / q0;
            CubicSpace::Coords xc{x[0], x[1], x[2], x[3]}, y{};
            for (int i = 0; i < 4; ++i) y[static_cast<std::size_t>(i)] = xc[static_cast<std::size_t>(i)] / q0;
            const VElement ex = VElement::from<CubicSpace>(xc), ey = VElement::from<CubicSpace>(y);
            const Rational lhs = ft_on_lattice(cond, qs[qi], ex);
            const Rational rhs = ft_on_lattice(cond, q0, ex) * ft_on_lattice(cond, q1, ey);
            ++rep.split_checked;
            if (lhs != rhs) ++rep.split_failed;
          }
        }
      }
      int i = r - 1;
      while (i >= 0 && x[static_cast<std::size_t>(i)] == R) x[static_cast<std::size_t>(i--)] = -R;
      if (i < 0) break;
      ++x[static_cast<std::size_t>(i)];
    }
  }

  for (std::size_t qi = 0; qi < qs.size(); ++qi) {
    DualBoundRow row;
    row.q = qs[qi];
    const auto& ps = qprimes[qi];
    for (const auto& [key, counts] : tally[qi]) {
      Rational v = 1;
      u64 k = key;
      for (std::size_t j = ps.size(); j-- > 0;) {
        const int c = static_cast<int>(k % static_cast<u64>(nclass));
        k /= static_cast<u64>(nclass);
        v *= cfg.space == SpaceId::cubic ? detail::cubic_local_value(ps[j], static_cast<CubicClass>(c))
                                         : quartic_closed_form(ps[j], static_cast<Label>(c));
      }
      v = abs(v);
      row.value += v * (counts[0] + counts[1]);
      row.zero_part += v * counts[1];
    }
    rep.total += row.value;
    rep.zero_part += row.zero_part;
    rep.rows.push_back(row);
  }
  rep.nonzero_part = rep.total - rep.zero_part;
  return rep;
}

/// Majorant for the cubic dual_bound_sum, split like the sum. Writing x = q0 y
/// with q0 the primes of q dividing x, |Psi_{q0}-hat(x)| = prod (p^-1 + p^-2 - p^-3)
/// and for the remaining q1 = q / q0: |Psi_{q1}-hat(y)| <= q1^-2 when
/// Disc(y) = 0, counted by reducible_count; otherwise <= gcd(Disc(y), q1) q1^-3,
/// summed over q1 with the gcd-sum majorant. Since 3 is dropped, q in [N, 2N]
/// contributes through q' = q / (q, 3), so blocks N and N / 3 are both bounded.
struct CubicDualMajorant {
  double zero_part = 0.0;
  double nonzero_part = 0.0;
};

inline CubicDualMajorant cubic_dual_majorant(double X, double eta, i64 N) {
  CubicDualMajorant maj;
  const double Z = static_cast<double>(N) * std::pow(X, eta - 0.25);
  const i64 R = static_cast<i64>(std::floor(Z + 1e-9));
  if (R < 1) return maj;
  std::map<i64, u64> reducible;
  for (const double Nb : {static_cast<double>(N), static_cast<double>(N) / 3.0}) {
    for (i64 q0 : squarefree_up_to(R)) {
      if (q0 % 3 == 0) continue;
      double g = 1.0;
      for (i64 p : factorize(q0)) g *= to_double(detail::cubic_local_value(p, CubicClass::pV));
      const double lo = Nb / static_cast<double>(q0), hi = 2.0 * Nb / static_cast<double>(q0);
      const double count_q1 = std::floor(hi) - std::ceil(lo) + 1.0;
      if (count_q1 <= 0) continue;
      const double q1min = std::max(1.0, std::ceil(lo));
      const i64 Ry = R / q0;
      if (!reducible.count(Ry)) reducible[Ry] = reducible_count(Ry);
      maj.zero_part += g * count_q1 * static_cast<double>(reducible[Ry] - 1) / (q1min * q1min);
      // gcd part: sum over y with Disc(y) != 0 of sum_{f | Disc, f <= hi} ((hi - lo) + f)
      double gsum = 0.0;
      for (i64 a = -Ry; a <= Ry; ++a)
        for (i64 b = -Ry; b <= Ry; ++b)
          for (i64 c = -Ry; c <= Ry; ++c)
            for (i64 d = -Ry; d <= Ry; ++d) {
              const i64 D = std::abs(cubic_disc<i64>(a, b, c, d));
              if (D == 0) continue;
              for (i64 f = 1; f * f <= D; ++f) {
                if (D % f != 0) continue;
                for (const i64 h : {f, D / f}) {
                  if (static_cast<double>(h) <= hi) gsum += (hi - lo) + static_cast<double>(h);
                  if (f * f == D) break;
                }
              }
            }
      maj.nonzero_part += g * gsum / (q1min * q1min * q1min);
    }
  }
  maj.zero_part *= 1.0 + 1e-12;
  maj.nonzero_part *= 1.0 + 1e-12;
  return maj;
}

// ---------------------------------------------------------------------------
// Geometric sieve

/// A closed subscheme of the cubic space, tested on x mod p.
struct GeoScheme {
  std::string name;
  int codim = 1;
  std::function<bool(const CubicSpace::Coords&, i64)> contains;
  bool disc_zero = false;  // fast path: p | Disc(x)
};

inline GeoScheme scheme_disc_zero() {
  return {"disc=0", 1, [](const CubicSpace::Coords& x, i64 p) { return CubicSpace::disc_mod(x, p) == 0; }, true};
}

inline GeoScheme scheme_origin() {
  return {"origin", 4,
          [](const CubicSpace::Coords& x, i64 p) {
            return std::all_of(x.begin(), x.end(), [p](i64 v) { return v % p == 0; });
          },
          false};
}

struct GeoSieveQuery {
  double lambda = 20.0;
  i64 m = 1;
  CubicSpace::Coords x0{0, 0, 0, 0};
  i64 P_lo = 2;
  i64 P_hi = 4;
  GeoScheme scheme = scheme_disc_zero();

  /// Window [P, 2P].
  static GeoSieveQuery standard(double lambda, i64 m, i64 P, GeoScheme scheme = scheme_disc_zero()) {
    GeoSieveQuery g;
    g.lambda = lambda;
    g.m = m;
    g.P_lo = P;
    g.P_hi = 2 * P;
    g.scheme = std::move(scheme);
    return g;
  }
};

struct GeoPairResult {
  u64 pairs = 0;
  u64 points = 0;
  std::vector<i64> primes;  // window primes not dividing m
  double bound = 0.0;       // (lambda/m)^{r-a} P lambda^{0.1}
  double ratio = 0.0;
};

/// Pairs (x, p): x in [-lambda, lambda]^4 with x = x0 mod m, p prime in
/// [P_lo, P_hi] with p not dividing m, and x mod p on the scheme.
inline GeoPairResult geo_pair_count(const GeoSieveQuery& g, u64 budget = kDefaultPointBudget) {
  if (g.m < 1) fail(ErrorKind::config, "m must be positive");
  if (!(g.lambda >= 0.0)) fail(ErrorKind::config, "lambda must be non-negative");
  GeoPairResult res;
  for (i64 p : primes_in(std::max<i64>(g.P_lo, 2), g.P_hi)) {
    if (g.m % p != 0) res.primes.push_back(p);
  }
  const i64 L = static_cast<i64>(std::floor(g.lambda));
  std::vector<i64> axis[4];
  for (int i = 0; i < 4; ++i) {
    for (i64 v = -L; v <= L; ++v) {
      if (mod(v - g.x0[static_cast<std::size_t>(i)], g.m) == 0) axis[i].push_back(v);
    }
  }
  res.points = static_cast<u64>(axis[0].size() * axis[1].size() * axis[2].size() * axis[3].size());
  if (static_cast<double>(res.points) * std::max<double>(1.0, static_cast<double>(res.primes.size())) > static_cast<double>(budget)) {
    fail(ErrorKind::resource_limit, "geometric sieve query exceeds the point budget");
  }
  res.bound = std::pow(g.lambda / static_cast<double>(g.m), 4 - g.scheme.codim) * static_cast<double>(g.P_lo) *
              std::pow(g.lambda, 0.1);
  if (res.primes.empty()) return res;
  const auto& ps = res.primes;
  u64 pairs = 0;
  for (i64 a : axis[0])
    for (i64 b : axis[1])
      for (i64 c : axis[2])
        for (i64 d : axis[3]) {
          if (g.scheme.disc_zero) {
            const i64 D = cubic_disc<i64>(a, b, c, d);
            if (D == 0) {
              pairs += ps.size();
              continue;
            }
            for (i64 p : ps) pairs += (D % p == 0);
          } else {
            const CubicSpace::Coords x{a, b, c, d};
            for (i64 p : ps) pairs += g.scheme.contains(x, p);
          }
        }
  res.pairs = pairs;
  res.ratio = res.bound > 0.0 ? static_cast<double>(pairs) / res.bound : 0.0;
  return res;
}

}  // namespace pvs
