#pragma once
// Exponent bookkeeping for the quartic space, weighted-sieve thresholds,
// linear-sieve conditions on omega(p), and the gcd-sum bound.

#include <cmath>
#include <numeric>
#include <vector>

#include "pvs/fourier.hpp"
#include "pvs/orbits.hpp"
#include "pvs/rational.hpp"

namespace pvs {

struct ExponentRow {
  int j;
  Rational x_exponent;  // 1 - j/d
  int n_exponent;       // j + fc(j) + 1
  Rational alpha_cap;   // j / (d (j + fc(j) + 1))
};

struct ExponentTable {
  std::vector<ExponentRow> rows;
  Rational alpha_max;
  int bottleneck = 0;
};

/// Rows X^{1 - j/d} N^{j + fc(j) + 1} for the nonzero dimension groups.
inline ExponentTable exponent_table(SpaceId space = SpaceId::quartic) {
  if (space != SpaceId::quartic) fail(ErrorKind::domain, "the exponent table is tabulated for the quartic space");
  const int d = descriptor(space).d;
  ExponentTable t;
  for (const auto& row : dimension_table()) {
    if (row.dimension == 0) continue;
    const int j = row.dimension;
    const int n = j + row.fc + 1;
    ExponentRow e{j, Rational(1) - Rational(j, d), n, Rational(j, d * n)};
    if (t.rows.empty() || e.alpha_cap < t.alpha_max) {
      t.alpha_max = e.alpha_cap;
      t.bottleneck = j;
    }
    t.rows.push_back(e);
  }
  return t;
}

/// The constant added to 1/alpha - 1 in the weighted sieve: log 4 / log 3
/// (exact comparisons), or Greaves' 1.124... held as the interval [1.124, 1.125).
enum class SieveConstant { log4_over_log3, greaves };

namespace detail {

/// r >= log 4 / log 3 for rational r, decided exactly via 3^n >= 4^d.
inline bool at_least_log4_log3(const Rational& r) {
  if (r <= 0) return false;
  const BigInt n = numerator(r), d = denominator(r);
  if (n > 100000 || d > 100000) {
    // Far from the boundary a double decides safely.
    const double v = to_double(r), c = std::log(4.0) / std::log(3.0);
    if (std::abs(v - c) > 1e-9) return v > c;
    fail(ErrorKind::domain, "threshold too close to log 4 / log 3 to decide");
  }
  return boost::multiprecision::pow(BigInt(3), n.convert_to<unsigned>()) >=
         boost::multiprecision::pow(BigInt(4), d.convert_to<unsigned>());
}

}  // namespace detail

/// Smallest integer t with t >= 1/alpha + c - 1.
inline int weighted_sieve_t(const Rational& alpha, SieveConstant c = SieveConstant::log4_over_log3) {
  if (alpha <= 0) fail(ErrorKind::domain, "alpha must be positive");
  const Rational inv = 1 / alpha;
  BigInt start = numerator(inv) / denominator(inv);  // floor(1/alpha); t + 1 - 1/alpha > 1 forces t >= it
  if (start > 1000000) fail(ErrorKind::domain, "alpha too small");
  for (int t = std::max(0, start.convert_to<int>() - 1);; ++t) {
    const Rational r = Rational(t + 1) - inv;
    if (c == SieveConstant::log4_over_log3) {
      if (detail::at_least_log4_log3(r)) return t;
    } else {
      if (r >= Rational(1125, 1000)) return t;
      if (r >= Rational(1124, 1000)) fail(ErrorKind::domain, "threshold falls inside the uncertainty of Greaves' constant");
    }
  }
}

// ---------------------------------------------------------------------------
// Linear sieve conditions

struct LinearSieveReport {
  SpaceId space;
  i64 p_max = 0;
  std::size_t primes_checked = 0;
  Rational max_scaled_gap;  // max over p of |omega(p) - 1/p| p^2
  i64 worst_prime = 0;
  Rational constant;        // the C tested against
  bool below_constant = true;
  bool omega_below_one = true;
  Rational tail_bound;      // bound on |omega(p) - 1/p| p^2 for all p > p_max
};

namespace detail {

/// Coefficients c_k of omega(p) = sum_k c_k p^{-k}.
inline std::vector<int> omega_coefficients(SpaceId space) {
  if (space == SpaceId::cubic) return {0, 1, 1, -1};
  return {0, 1, 2, -1, -2, -1, 2, 1, -1};
}

}  // namespace detail

/// |omega(p) - 1/p| < C / p^2 for all odd p <= p_max, exactly; also the
/// triangle-inequality bound sum_{k>=2} |c_k| p^{2-k} at p = p_max + 1, which
/// covers every larger prime since each term decreases in p.
inline LinearSieveReport linear_sieve_check(SpaceId space, i64 p_max, const Rational& C = 3) {
  LinearSieveReport rep;
  rep.space = space;
  rep.p_max = p_max;
  rep.constant = C;
  for (i64 p : primes_up_to(p_max)) {
    if (p == 2) continue;
    const Rational w = omega(space, p);
    const Rational gap = abs(w - Rational(1, p)) * p * p;
    ++rep.primes_checked;
    if (gap > rep.max_scaled_gap || rep.worst_prime == 0) {
      rep.max_scaled_gap = gap;
      rep.worst_prime = p;
    }
    if (!(gap < C)) rep.below_constant = false;
    if (!(w < 1 && w >= 0)) rep.omega_below_one = false;
  }
  const auto c = detail::omega_coefficients(space);
  const i64 p0 = p_max + 1;
  for (std::size_t k = 2; k < c.size(); ++k) {
    rep.tail_bound += Rational(std::abs(c[k])) / Rational(big_pow(p0, static_cast<unsigned>(k - 2)));
  }
  return rep;
}

struct OneSidedReport {
  long double K = 0.0L;  // witnessed on the calibration range
  i64 witness_limit = 0;
  i64 check_limit = 0;
  std::size_t pairs_checked = 0;
  bool holds = true;
  long double worst_margin = 0.0L;  // max over checked pairs of lhs / rhs
};

/// prod_{w <= p < z} (1 - omega(p))^{-1} <= (log z / log w)(1 + K / log w).
/// K is the smallest constant that works for 3 <= w < z <= witness_limit; the
/// inequality is then checked with that K for all w < z <= check_limit.
inline OneSidedReport one_sided_sieve_check(SpaceId space, i64 witness_limit, i64 check_limit) {
  OneSidedReport rep;
  rep.witness_limit = witness_limit;
  rep.check_limit = check_limit;
  std::vector<i64> primes;
  for (i64 p : primes_up_to(check_limit)) {
    if (p > 2) primes.push_back(p);
  }
  std::vector<long double> inv(primes.size());
  for (std::size_t i = 0; i < primes.size(); ++i) inv[i] = 1.0L / (1.0L - static_cast<long double>(to_double(omega(space, primes[i]))));
  // The product only changes at primes, so w runs over primes.
  auto needed_k = [&](std::size_t iw, std::size_t iz_exclusive, long double prod) {
    const long double lw = std::log(static_cast<long double>(primes[iw]));
    // z just above the last included prime: the right side is smallest there
    const long double lz = std::log(static_cast<long double>(primes[iz_exclusive - 1]) + 1.0L);
    return (prod * lw / lz - 1.0L) * lw;
  };
  for (std::size_t iw = 0; iw < primes.size() && primes[iw] <= witness_limit; ++iw) {
    long double prod = 1.0L;
    for (std::size_t iz = iw; iz < primes.size() && primes[iz] < witness_limit; ++iz) {
      prod *= inv[iz];
      rep.K = std::max(rep.K, needed_k(iw, iz + 1, prod));
    }
  }
  for (std::size_t iw = 0; iw < primes.size(); ++iw) {
    long double prod = 1.0L;
    const long double lw = std::log(static_cast<long double>(primes[iw]));
    for (std::size_t iz = iw; iz < primes.size(); ++iz) {
      prod *= inv[iz];
      const long double lz = std::log(static_cast<long double>(primes[iz]) + 1.0L);
      const long double rhs = (lz / lw) * (1.0L + rep.K / lw);
      ++rep.pairs_checked;
      rep.worst_margin = std::max(rep.worst_margin, prod / rhs);
      if (prod > rhs * (1.0L + 1e-15L)) rep.holds = false;
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

struct GcdSumResult {
  BigInt sum;       // sum_{n in [N, 2N]} gcd(m, n)
  BigInt majorant;  // sum_{f | m, f <= 2N} f (N/f + 1) = sum (N + f)
  bool within;
};

inline GcdSumResult gcd_sum_check(i64 m, i64 N) {
  if (m == 0) fail(ErrorKind::domain, "m must be nonzero");
  if (N < 1) fail(ErrorKind::domain, "N must be positive");
  const i64 am = m < 0 ? -m : m;
  GcdSumResult r{0, 0, false};
  for (i64 n = N; n <= 2 * N; ++n) r.sum += std::gcd(am, n);
  for (i64 f = 1; f * f <= am; ++f) {
    if (am % f != 0) continue;
    for (i64 g : {f, am / f}) {
      if (g <= 2 * N) r.majorant += N + g;
      if (f * f == am) break;
    }
  }
  r.within = r.sum <= r.majorant;
  return r;
}

}  // namespace pvs
