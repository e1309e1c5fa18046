#pragma once
// Pairing histograms: exact Fourier transforms of 0/1 functions on (Z/q)^r
// reduce to counting how many support points pair to each residue class.
//
// For a squarefree modulus q and a support invariant under multiplication by
// units, counts[k] depends only on g = gcd(k, q), and summing the roots of
// unity of exact order q/g gives mu(q/g). Hence
//
//   sum_x Psi(x) e(<x, y>/q) = sum_{g | q} count_g * mu(q/g),
//
// which is an integer, and the transform is that integer over q^r.

#include <cstdint>
#include <numeric>
#include <thread>
#include <vector>

#include "pvs/modular.hpp"
#include "pvs/rational.hpp"

namespace pvs {

struct PairingHistogram {
  Modulus modulus;
  std::vector<u64> counts;

  PairingHistogram() = default;
  explicit PairingHistogram(Modulus q)
      : modulus(std::move(q)), counts(static_cast<std::size_t>(modulus.value()), 0) {}
  explicit PairingHistogram(i64 q) : PairingHistogram(Modulus(q)) {}

  i64 q() const noexcept { return modulus.value(); }

  void add(i64 residue, u64 weight = 1) { counts[static_cast<std::size_t>(residue)] += weight; }

  u64 total() const { return std::accumulate(counts.begin(), counts.end(), u64{0}); }

  /// Associative merge; integer sums make partitioned accumulation exact.
  PairingHistogram& operator+=(const PairingHistogram& other) {
    if (!(other.modulus == modulus)) fail(ErrorKind::invalid_modulus, "merging histograms of different moduli");
    for (std::size_t k = 0; k < counts.size(); ++k) counts[k] += other.counts[k];
    return *this;
  }

  friend bool operator==(const PairingHistogram& a, const PairingHistogram& b) {
    return a.modulus == b.modulus && a.counts == b.counts;
  }
};

/// Exact value q^{-r} sum_x Psi(x) e(<x,y>/q) from the histogram of <x,y> over
/// the support. Throws non-invariant-support if counts are not constant on
/// each gcd class (the support is then not dilation invariant).
inline Rational ft_value_from_histogram(const PairingHistogram& h, int r) {
  const i64 q = h.q();
  if (static_cast<i64>(h.counts.size()) != q) fail(ErrorKind::invalid_modulus, "histogram size does not match modulus");
  BigInt sum = 0;
  std::vector<bool> seen(static_cast<std::size_t>(q) + 1, false);
  for (i64 k = 0; k < q; ++k) {
    const i64 g = std::gcd(k, q);  // gcd(0, q) = q
    const u64 c = h.counts[static_cast<std::size_t>(k)];
    const u64 first = h.counts[static_cast<std::size_t>(g % q)];
    if (c != first) {
      fail(ErrorKind::non_invariant_support,
           "counts differ within gcd class " + std::to_string(g) + " of modulus " + std::to_string(q));
    }
    if (!seen[static_cast<std::size_t>(g)]) {
      seen[static_cast<std::size_t>(g)] = true;
      sum += BigInt(c) * mobius(q / g);
    }
  }
  return Rational(sum, big_pow(q, static_cast<unsigned>(r)));
}

/// Split [0, n) into `workers` contiguous chunks, run body(begin, end, slot)
/// on each, and return the per-slot results in slot order so callers merge
/// with a fixed tree. workers <= 1 runs inline.
template <class Result, class Body>
std::vector<Result> run_partitioned(u64 n, int workers, Body body) {
  const u64 w = static_cast<u64>(std::max(1, workers));
  std::vector<Result> results(w);
  auto chunk = [&](u64 slot) {
    const u64 begin = n * slot / w;
    const u64 end = n * (slot + 1) / w;
    results[slot] = body(begin, end);
  };
  if (w == 1) {
    chunk(0);
    return results;
  }
  std::vector<std::thread> threads;
  threads.reserve(w);
  for (u64 slot = 0; slot < w; ++slot) threads.emplace_back(chunk, slot);
  for (auto& t : threads) t.join();
  return results;
}

}  // namespace pvs
