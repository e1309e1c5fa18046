#pragma once
// Modular integer arithmetic, prime utilities, squarefree moduli and CRT.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "pvs/errors.hpp"

namespace pvs {

using i64 = std::int64_t;
using u64 = std::uint64_t;

/// Canonical representative of a mod m in [0, m).
constexpr i64 mod(i64 a, i64 m) {
  i64 r = a % m;
  return r < 0 ? r + m : r;
}

constexpr i64 mul_mod(i64 a, i64 b, i64 m) {
  return static_cast<i64>((static_cast<__int128>(mod(a, m)) * mod(b, m)) % m);
}

constexpr i64 pow_mod(i64 base, u64 e, i64 m) {
  i64 result = 1 % m;
  base = mod(base, m);
  while (e > 0) {
    if (e & 1U) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    e >>= 1U;
  }
  return result;
}

/// Inverse of a modulo m; throws invalid-modulus when gcd(a, m) != 1.
inline i64 inv_mod(i64 a, i64 m) {
  i64 old_r = mod(a, m), r = m, old_s = 1, s = 0;
  while (r != 0) {
    const i64 q = old_r / r;
    std::tie(old_r, r) = std::pair{r, old_r - q * r};
    std::tie(old_s, s) = std::pair{s, old_s - q * s};
  }
  if (old_r != 1) fail(ErrorKind::invalid_modulus, std::to_string(a) + " is not invertible mod " + std::to_string(m));
  return mod(old_s, m);
}

inline bool is_prime(i64 n) {
  if (n < 2) return false;
  for (i64 p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  i64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic witness set for 64-bit inputs.
  for (i64 a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    i64 x = pow_mod(a, static_cast<u64>(d), n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s && composite; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) composite = false;
    }
    if (composite) return false;
  }
  return true;
}

inline std::vector<i64> primes_up_to(i64 n) {
  std::vector<i64> out;
  if (n < 2) return out;
  std::vector<bool> composite(static_cast<std::size_t>(n + 1), false);
  for (i64 i = 2; i <= n; ++i) {
    if (composite[static_cast<std::size_t>(i)]) continue;
    out.push_back(i);
    for (i64 j = i * i; j <= n; j += i) composite[static_cast<std::size_t>(j)] = true;
  }
  return out;
}

inline std::vector<i64> primes_in(i64 lo, i64 hi) {
  std::vector<i64> out;
  for (i64 p : primes_up_to(hi)) {
    if (p >= lo) out.push_back(p);
  }
  return out;
}

/// Prime factorization by trial division, ascending, with multiplicity.
inline std::vector<i64> factorize(i64 n) {
  std::vector<i64> out;
  if (n < 0) n = -n;
  for (i64 p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      out.push_back(p);
      n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline i64 primitive_root(i64 p) {
  if (p == 2) return 1;
  std::vector<i64> qs = factorize(p - 1);
  qs.erase(std::unique(qs.begin(), qs.end()), qs.end());
  for (i64 g = 2; g < p; ++g) {
    const bool ok = std::all_of(qs.begin(), qs.end(),
                                [&](i64 q) { return pow_mod(g, static_cast<u64>((p - 1) / q), p) != 1; });
    if (ok) return g;
  }
  fail(ErrorKind::domain, "no primitive root mod " + std::to_string(p));
}

/// Euler's criterion; p odd prime, a not necessarily reduced. Zero counts as a square.
inline bool is_square_mod(i64 a, i64 p) {
  a = mod(a, p);
  if (a == 0 || p == 2) return true;
  return pow_mod(a, static_cast<u64>((p - 1) / 2), p) == 1;
}

/// Positive squarefree modulus with its ascending prime factorization.
class Modulus {
 public:
  Modulus() = default;

  /// Factor q and check it is squarefree; throws invalid-modulus otherwise.
  explicit Modulus(i64 q) : q_(q) {
    if (q < 1) fail(ErrorKind::invalid_modulus, "modulus must be positive, got " + std::to_string(q));
    primes_ = factorize(q);
    if (std::adjacent_find(primes_.begin(), primes_.end()) != primes_.end()) {
      fail(ErrorKind::invalid_modulus, std::to_string(q) + " is not squarefree");
    }
  }

  static Modulus from_primes(std::vector<i64> primes) {
    std::sort(primes.begin(), primes.end());
    i64 q = 1;
    for (i64 p : primes) {
      if (!is_prime(p)) fail(ErrorKind::invalid_modulus, std::to_string(p) + " is not prime");
      q *= p;
    }
    return Modulus(q);
  }

  i64 value() const noexcept { return q_; }
  const std::vector<i64>& primes() const noexcept { return primes_; }
  bool is_prime_modulus() const noexcept { return primes_.size() == 1; }

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  i64 q_ = 1;
  std::vector<i64> primes_;
};

struct Residue {
  i64 value = 0;
  i64 modulus = 1;
};

/// Chinese remainder composition; moduli must be pairwise coprime.
inline Residue crt_combine(std::span<const Residue> parts) {
  std::vector<Residue> sorted(parts.begin(), parts.end());
  std::sort(sorted.begin(), sorted.end(), [](const Residue& a, const Residue& b) { return a.modulus < b.modulus; });
  Residue acc{0, 1};
  for (const Residue& r : sorted) {
    if (r.modulus < 1) fail(ErrorKind::invalid_modulus, "non-positive modulus");
    if (std::gcd(acc.modulus, r.modulus) != 1) {
      fail(ErrorKind::invalid_modulus,
           "moduli " + std::to_string(acc.modulus) + " and " + std::to_string(r.modulus) + " are not coprime");
    }
    // acc.value + acc.modulus * t == r.value (mod r.modulus)
    const i64 t = mul_mod(mod(r.value - acc.value, r.modulus), inv_mod(acc.modulus, r.modulus), r.modulus);
    acc.value += acc.modulus * t;
    acc.modulus *= r.modulus;
    acc.value = mod(acc.value, acc.modulus);
  }
  return acc;
}

inline Residue crt_combine(std::initializer_list<Residue> parts) {
  return crt_combine(std::span<const Residue>(parts.begin(), parts.size()));
}

/// Moebius function on [0, n] via a multiplicity sieve; mu[0] is unused (0).
inline std::vector<int> mobius_table(i64 n) {
  std::vector<int> mu(static_cast<std::size_t>(std::max<i64>(n, 1) + 1), 1);
  mu[0] = 0;
  for (i64 p : primes_up_to(n)) {
    for (i64 k = p; k <= n; k += p) mu[static_cast<std::size_t>(k)] *= -1;
    for (i64 k = p * p; k <= n; k += p * p) mu[static_cast<std::size_t>(k)] = 0;
  }
  return mu;
}

inline std::vector<i64> squarefree_up_to(i64 n) {
  std::vector<i64> out;
  const auto mu = mobius_table(n);
  for (i64 q = 1; q <= n; ++q) {
    if (mu[static_cast<std::size_t>(q)] != 0) out.push_back(q);
  }
  return out;
}

inline int mobius(i64 n) {
  const auto f = factorize(n);
  if (std::adjacent_find(f.begin(), f.end()) != f.end()) return 0;
  return (f.size() % 2 == 0) ? 1 : -1;
}

}  // namespace pvs
