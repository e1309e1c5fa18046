// Smoothed counts of cubic forms with q | Disc: the Poisson check at X = 10^4
// and the error terms E(X, q) for q <= X^0.45 at X = 10^5.
#include <cstdio>

#include "pvs/experiments.hpp"

using namespace pvs;

int main() {
  for (i64 q : {1, 3, 5}) {
    const auto r = poisson_check(1e4, q);
    std::printf("q=%-3ld lattice=%.6f dual=%.6f  |diff|=%.3g  tail bound=%.3g\n", static_cast<long>(q), r.lattice, r.dual,
                std::abs(r.lattice - r.dual), r.tail_bound);
  }
  LodConfig cfg;
  cfg.X = 1e5;
  const auto rep = lod_error_sum(cfg);
  for (const auto& b : rep.blocks) std::printf("q in [%ld, %ld): sum |E| = %.1f\n", static_cast<long>(b.N), static_cast<long>(2 * b.N), b.sum_abs_error);
  std::printf("total %.1f, / X = %.4f\n", rep.cumulative, rep.cumulative / cfg.X);
}
