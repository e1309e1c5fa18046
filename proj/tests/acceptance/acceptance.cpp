// End-to-end acceptance run. One PASS/FAIL line per criterion; the exit
// status is nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "pvs/experiments.hpp"

using namespace pvs;

namespace {

int workers() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

// Orbit data shared by criteria 2 and 3.
struct OrbitData {
  OrbitDecomposition d3;
  OrbitTable t3, t5;
};

OrbitData& orbit_data() {
  static OrbitData data = [] {
    OrbitData o;
    DecomposeOptions opt;
    opt.keep_orbit_ids = true;
    o.d3 = decompose_orbits(3, opt);
    o.t3 = label_orbits(o.d3);
    o.t5 = label_orbits(decompose_orbits(5));
    return o;
  }();
  return data;
}

void c1(Outcome& o) {
  u64 targets = 0;
  std::size_t mismatches = 0;
  for (i64 p : {5, 7}) {
    const auto r = verify_cubic(p, true);
    targets += r.targets_checked;
    mismatches += r.mismatches.size();
  }
  for (i64 p : {11, 13, 17, 19, 23}) {
    const auto r = verify_cubic(p, false);
    targets += r.targets_checked;
    mismatches += r.mismatches.size();
  }
  o.detail << "targets=" << targets << " mismatches=" << mismatches;
  o.require(mismatches == 0, "cubic table mismatch");
}

void c2(Outcome& o) {
  auto& od = orbit_data();
  for (const OrbitTable* t : {&od.t3, &od.t5}) {
    const auto r = verify_quartic(*t, workers());
    o.detail << "p=" << t->p << " orbits=" << t->entries.size() << " mismatches=" << r.mismatches.size() << "; ";
    o.require(t->entries.size() == 20, "orbit count at p=" + std::to_string(t->p));
    o.require(r.mismatches.empty(), "quartic table mismatch at p=" + std::to_string(t->p));
    for (const auto& m : r.mismatches) o.detail << m.label << ": " << m.bruteforce << " vs " << m.closed_form << "; ";
  }
}

void c3(Outcome& o) {
  auto& od = orbit_data();
  u64 total = 0;
  for (const auto& rec : od.d3.orbits) total += rec.size;
  o.detail << "orbits=" << od.d3.orbits.size() << " total=" << total;
  o.require(od.d3.orbits.size() == 20, "20 orbits");
  o.require(total == 531441, "orbit sizes sum to 3^12");

  const QuarticCodec codec(3);
  std::vector<Label> orbit_label;
  for (const auto& rec : od.d3.orbits) orbit_label.push_back(classify(codec.decode(rec.representative), 3));
  u64 agree = 0;
  for (u64 i = 0; i < codec.size(); ++i) agree += classify(codec.decode(i), 3) == orbit_label[od.d3.orbit_of[i]];
  o.detail << " classify-agree=" << agree << "/" << codec.size();
  o.require(agree == codec.size(), "classifier disagrees with the BFS partition");

  for (const auto& row : dimension_table()) {
    const double ratio = static_cast<double>(od.t5.group_cardinality(row.dimension)) /
                         static_cast<double>(od.t3.group_cardinality(row.dimension));
    const double expect = std::pow(5.0 / 3.0, row.dimension);
    const double f = ratio / expect;
    o.detail << " U" << row.dimension << ":" << f;
    o.require(f >= 1.0 / 3.0 && f <= 3.0, "U" + std::to_string(row.dimension) + " ratio");
  }
}

void c4(Outcome& o) {
  const auto t = exponent_table();
  const std::vector<std::tuple<int, Rational, int>> expect{
      {4, Rational(2, 3), 2}, {7, Rational(5, 12), 4}, {8, Rational(1, 3), 4},
      {10, Rational(1, 6), 5}, {11, Rational(1, 12), 5}, {12, Rational(0), 5}};
  o.require(t.rows.size() == expect.size(), "six rows");
  for (std::size_t i = 0; i < std::min(t.rows.size(), expect.size()); ++i) {
    const auto& [j, xe, n] = expect[i];
    o.detail << "X^" << t.rows[i].x_exponent << " N^" << t.rows[i].n_exponent << "; ";
    o.require(t.rows[i].j == j && t.rows[i].x_exponent == xe && t.rows[i].n_exponent == n, "row j=" + std::to_string(j));
  }
  const int t748 = weighted_sieve_t(Rational(7, 48)), t12 = weighted_sieve_t(Rational(1, 2));
  o.detail << "alpha_max=" << t.alpha_max << " bottleneck=" << t.bottleneck << " t(7/48)=" << t748 << " t(1/2)=" << t12;
  o.require(t.alpha_max == Rational(7, 48) && t.bottleneck == 7, "alpha_max");
  o.require(t748 == 8 && t12 == 3, "weighted sieve thresholds");
}

void c5(Outcome& o) {
  for (SpaceId s : {SpaceId::cubic, SpaceId::quartic}) {
    const auto r = linear_sieve_check(s, 10000, 3);
    o.detail << to_string(s) << ": primes=" << r.primes_checked << " max|w-1/p|p^2=" << to_double(r.max_scaled_gap)
             << " at p=" << r.worst_prime << "; ";
    o.require(r.below_constant, to_string(s) + " gap");
    o.require(r.omega_below_one, to_string(s) + " omega < 1");
  }
}

void c6(Outcome& o) {
  for (i64 q : {1, 3, 5, 15}) {
    const auto r = poisson_check(1e4, q);
    o.detail << "q=" << q << " R=" << r.radius << " |lat-dual|=" << std::abs(r.lattice - r.dual)
             << " tail=" << r.tail_bound << " rel(2R)=" << r.relative_diff2 << "; ";
    o.require(r.within_tail, "tail bound at q=" + std::to_string(q));
    o.require(r.within_relative, "relative 1e-6 at q=" + std::to_string(q));
  }
}

void c7(Outcome& o) {
  std::vector<double> xs, cs;
  double prev = std::numeric_limits<double>::infinity();
  for (double X : {1e5, 1e6, 1e7}) {
    LodConfig cfg;
    cfg.X = X;
    cfg.alpha = 0.45;
    cfg.workers = workers();
    const auto rep = lod_error_sum(cfg);
    const double norm = rep.cumulative / X;
    o.detail << "X=" << X << " q-count=" << rep.rows.size() << " cum/X=" << norm << "; ";
    o.require(norm < prev, "cum/X decreasing at X=" + std::to_string(static_cast<long long>(X)));
    prev = norm;
    xs.push_back(X);
    cs.push_back(rep.cumulative);
  }
  const auto fit = fit_loglog(xs, cs);
  o.detail << "c=" << fit.slope << " residuals=";
  for (double r : fit.residuals) o.detail << r << ",";
  o.require(fit.slope < 1.0, "c < 1");
}

void c8(Outcome& o) {
  std::vector<double> ys, ns;
  for (i64 Y : {25, 50, 100, 200, 400}) {
    const u64 n = reducible_count(Y);
    o.detail << "Y=" << Y << ":" << n << " ";
    ys.push_back(static_cast<double>(Y));
    ns.push_back(static_cast<double>(n));
  }
  const auto fit = fit_loglog(ys, ns);
  o.detail << "slope=" << fit.slope;
  o.require(fit.slope >= 1.8 && fit.slope <= 2.2, "slope in [1.8, 2.2]");
}

void c9(Outcome& o) {
  const i64 m = 5;
  auto query = [&](double lambda) { return GeoSieveQuery::standard(lambda, m, std::lround(1.5 * lambda / m)); };
  const auto base = geo_pair_count(query(20));
  const double K = base.ratio;
  o.detail << "K(20)=" << K;
  for (double lambda : {50.0, 100.0, 200.0}) {
    const auto r = geo_pair_count(query(lambda));
    o.detail << " ratio(" << lambda << ")=" << r.ratio;
    o.require(r.ratio <= K, "majorant at lambda=" + std::to_string(lambda));
  }
  // Monotone in lambda at a fixed window, and under window inclusion.
  for (double lambda : {20.0, 50.0}) {
    auto g = query(lambda);
    const u64 inner = geo_pair_count(g).pairs;
    g.lambda = lambda + 7;
    const u64 wider_box = geo_pair_count(g).pairs;
    g.lambda = lambda;
    g.P_hi += g.P_lo;
    const u64 wider_window = geo_pair_count(g).pairs;
    g.P_lo = std::max<i64>(2, g.P_lo / 2);
    const u64 widest = geo_pair_count(g).pairs;
    o.require(inner <= wider_box && inner <= wider_window && wider_window <= widest, "monotonicity");
  }
}

void c10(Outcome& o) {
  const CubicDualTransform t15(15), t3(3), t5(5);
  u64 mult_fail = 0, mult_n = 0;
  for (i64 a = 0; a < 15; ++a)
    for (i64 b = 0; b < 15; ++b)
      for (i64 c = 0; c < 15; ++c)
        for (i64 d = 0; d < 15; ++d) {
          const CubicSpace::Coords w{a, b, c, d};
          ++mult_n;
          mult_fail += t15(w) != t3(w) * t5(w);
        }
  o.detail << "multiplicativity " << mult_n - mult_fail << "/" << mult_n;
  o.require(mult_fail == 0, "multiplicativity at 15");

  std::mt19937_64 rng(20240601);
  const std::vector<std::pair<i64, i64>> splits{{3, 5}, {5, 3}, {3, 7}, {7, 3}, {5, 7}, {7, 5}, {2, 3}, {3, 2}, {2, 5}, {5, 2}};
  std::map<std::pair<i64, i64>, QSplitChecker> checkers;
  for (const auto& s : splits) checkers.emplace(s, QSplitChecker(s.first, s.second));
  u64 split_fail = 0;
  for (int it = 0; it < 1000; ++it) {
    const auto [q0, q1] = splits[rng() % splits.size()];
    CubicSpace::Coords x{};
    for (auto& v : x) v = q0 * (static_cast<i64>(rng() % 201) - 100);
    split_fail += !checkers.at({q0, q1})(x).holds;
  }
  o.detail << "; qsplit failures=" << split_fail << "/1000";
  o.require(split_fail == 0, "split identity");

  u64 pair_fail = 0, disc_fail = 0, n = 0;
  for (i64 p : {3, 5, 7, 11, 13}) {
    std::uniform_int_distribution<i64> coord(0, p - 1);
    for (int it = 0; it < 200; ++it) {
      const auto g = random_group_element(p, rng);
      const auto gi = g.iota();
      QuarticSpace::Coords a{}, b{};
      for (auto& v : a) v = coord(rng);
      for (auto& v : b) v = coord(rng);
      CubicSpace::Coords f{}, h{};
      for (auto& v : f) v = coord(rng);
      for (auto& v : h) v = coord(rng);
      ++n;
      pair_fail += QuarticSpace::pairing_mod(act(g, a), act(gi, b), p) != QuarticSpace::pairing_mod(a, b, p);
      if (p != 3) pair_fail += CubicSpace::pairing_mod(act(g, f), act(gi, h), p) != CubicSpace::pairing_mod(f, h, p);
      const i64 chi = mul_mod(pow_mod(g.det2(), 6, p), pow_mod(g.det3(), 8, p), p);
      disc_fail += QuarticSpace::disc_mod(act(g, a), p) != mul_mod(chi, QuarticSpace::disc_mod(a, p), p);
      disc_fail += CubicSpace::disc_mod(act(g, f), p) != mul_mod(pow_mod(g.det2(), 6, p), CubicSpace::disc_mod(f, p), p);
    }
  }
  o.detail << "; G-samples=" << n << " pairing failures=" << pair_fail << " disc failures=" << disc_fail;
  o.require(pair_fail == 0, "pairing compatibility");
  o.require(disc_fail == 0, "disc invariance");
}

}  // namespace

int main() {
  const std::vector<std::pair<int, std::function<void(Outcome&)>>> criteria{
      {1, c1}, {2, c2}, {3, c3}, {4, c4}, {5, c5}, {6, c6}, {7, c7}, {8, c8}, {9, c9}, {10, c10}};
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %2d: %s (%.1fs) %s\n", id, o.pass ? "PASS" : "FAIL", secs, o.detail.str().c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
