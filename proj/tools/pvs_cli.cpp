// pvs: command-line driver. Every run writes <out>/<command>.tsv (version and
// config header, one schema line, rows) and <out>/<command>.json (summary).
// Exit codes: 0 pass, 1 mathematical mismatch, 2 config error, 3 resource limit.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "pvs/experiments.hpp"

using namespace pvs;
using nlohmann::ordered_json;

namespace {

enum Exit { kPass = 0, kMismatch = 1, kConfig = 2, kResource = 3 };

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Report {
 public:
  Report(std::string command, std::string out_dir) : command_(std::move(command)), dir_(std::move(out_dir)) {
    summary_["command"] = command_;
    summary_["version"] = kLibraryVersion;
  }

  template <class T>
  void config(const std::string& key, const T& value) {
    summary_["config"][key] = value;
  }

  void columns(std::vector<std::string> cols) { columns_ = std::move(cols); }
  void row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }
  ordered_json& summary() { return summary_; }

  void write(int status) {
    summary_["status"] = status;
    std::filesystem::create_directories(dir_);
    std::ofstream tsv(dir_ + "/" + command_ + ".tsv");
    if (!tsv) fail(ErrorKind::config, "cannot write to " + dir_);
    tsv << "# pvs " << command_ << " version=" << kLibraryVersion;
    for (const auto& [k, v] : summary_["config"].items()) tsv << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
    tsv << '\n' << "# ";
    for (std::size_t i = 0; i < columns_.size(); ++i) tsv << (i ? "\t" : "") << columns_[i];
    tsv << '\n';
    for (const auto& r : rows_) {
      for (std::size_t i = 0; i < r.size(); ++i) tsv << (i ? "\t" : "") << r[i];
      tsv << '\n';
    }
    std::ofstream js(dir_ + "/" + command_ + ".json");
    js << summary_.dump(2) << '\n';
  }

 private:
  std::string command_, dir_;
  ordered_json summary_;
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

/// "3..23", "3,5,7" or a mix such as "3,5..11"; every entry must be prime.
std::vector<i64> parse_primes(const std::string& spec) {
  std::vector<i64> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    try {
      if (dots == std::string::npos) {
        const i64 p = std::stoll(part);
        if (!is_prime(p)) fail(ErrorKind::config, part + " is not prime");
        out.push_back(p);
      } else {
        for (i64 p : primes_in(std::stoll(part.substr(0, dots)), std::stoll(part.substr(dots + 2)))) out.push_back(p);
      }
    } catch (const std::logic_error&) {
      fail(ErrorKind::config, "cannot parse primes '" + spec + "'");
    }
  }
  if (out.empty()) fail(ErrorKind::config, "no primes in '" + spec + "'");
  return out;
}

std::vector<i64> parse_ints(const std::string& spec) {
  std::vector<i64> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      out.push_back(std::stoll(part));
    } catch (const std::logic_error&) {
      fail(ErrorKind::config, "cannot parse integer list '" + spec + "'");
    }
  }
  return out;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::resource_limit: return kResource;
    case ErrorKind::classifier_incomplete:
    case ErrorKind::quadrature: return kMismatch;
    default: return kConfig;
  }
}

// ---------------------------------------------------------------------------

struct Options {
  std::string out = "pvs-out";
  int workers = 1;
  // ft-verify
  std::string space = "cubic";
  std::string primes = "3..23";
  std::string mode = "per-class";
  std::string orbit_table;
  // orbits
  i64 prime = 3;
  // sieve-t
  std::string alpha_exact = "7/48";
  bool greaves = false;
  // lod
  double X = 1e5, alpha = 0.45, eta = 0.25, scale = 1.0;
  std::string count_mode = "batched";
  // dual-bound
  double db_X = 1e6, db_eta = 0.1;
  i64 N = 10;
  bool check_split = false;
  // geosieve
  double lambda = 20.0;
  i64 m = 5, P = 6, P_hi = 0;
  std::string x0 = "0,0,0,0", scheme = "disc0";
  // reducible
  std::string Y = "25,50,100,200,400";
};

int cmd_ft_verify(const Options& o) {
  const SpaceId space = parse_space(o.space);
  const auto primes = parse_primes(o.primes);
  for (i64 p : primes) {
    if (descriptor(space).is_bad(p) && !(space == SpaceId::cubic && p == 3)) {
      fail(ErrorKind::config, "prime " + std::to_string(p) + " is excluded for the " + o.space + " space");
    }
    if (space == SpaceId::quartic && p > 5) fail(ErrorKind::resource_limit, "quartic orbit sweep beyond p = 5");
  }
  if (o.mode != "per-class" && o.mode != "exhaustive") fail(ErrorKind::config, "mode must be per-class or exhaustive");

  Report rep("ft-verify", o.out);
  rep.config("space", o.space);
  rep.config("primes", o.primes);
  rep.config("mode", o.mode);
  rep.config("workers", o.workers);
  rep.columns({"prime", "label", "bruteforce", "closed_form", "match"});
  std::vector<Mismatch> mismatches;
  u64 targets = 0;
  for (i64 p : primes) {
    VerifyResult r;
    if (space == SpaceId::cubic) {
      r = verify_cubic(p, o.mode == "exhaustive");
    } else {
      OrbitTable t;
      std::ifstream in(o.orbit_table);
      if (!o.orbit_table.empty() && in) t = read_orbit_table(in);
      if (t.p != p) t = label_orbits(decompose_orbits(p));
      r = verify_quartic(t, o.workers);
    }
    targets += r.targets_checked;
    mismatches.insert(mismatches.end(), r.mismatches.begin(), r.mismatches.end());
    std::map<std::string, Rational> bf;
    for (const auto& row : r.table.rows) {
      if (row.source == "bruteforce") bf[row.label] = row.value;
    }
    for (const auto& row : r.table.rows) {
      if (row.source != "closed_form") continue;
      const bool has = bf.count(row.label) > 0;
      rep.row({std::to_string(p), row.label, has ? to_string(bf[row.label]) : "-", to_string(row.value),
               has ? (bf[row.label] == row.value ? "yes" : "NO") : "-"});
    }
  }
  rep.summary()["targets_checked"] = targets;
  rep.summary()["mismatches"] = ordered_json::array();
  for (const auto& m : mismatches) {
    rep.summary()["mismatches"].push_back(
        {{"prime", m.p}, {"label", m.label}, {"bruteforce", to_string(m.bruteforce)}, {"closed_form", to_string(m.closed_form)}});
    std::cerr << "mismatch p=" << m.p << " class=" << m.label << " bruteforce=" << m.bruteforce
              << " closed_form=" << m.closed_form << '\n';
  }
  const int status = mismatches.empty() ? kPass : kMismatch;
  rep.write(status);
  std::cout << "ft-verify " << o.space << ": " << targets << " targets, " << mismatches.size() << " mismatches\n";
  return status;
}

int cmd_orbits(const Options& o) {
  if (!is_prime(o.prime) || o.prime == 2) fail(ErrorKind::config, "prime must be an odd prime");
  if (o.prime > 5) fail(ErrorKind::resource_limit, "orbit decomposition beyond p = 5");
  const auto t = label_orbits(decompose_orbits(o.prime));
  Report rep("orbits", o.out);
  rep.config("prime", o.prime);
  rep.columns({"label", "dimension", "fc", "cardinality", "representative"});
  u64 total = 0;
  for (const auto& e : t.entries) {
    const auto& li = info(e.label);
    total += e.cardinality;
    rep.row({li.name, std::to_string(li.dimension), std::to_string(li.fc), std::to_string(e.cardinality),
             serialize(VElement::from<QuarticSpace>(e.representative, t.p))});
  }
  rep.summary()["orbits"] = t.entries.size();
  rep.summary()["total"] = total;
  for (const auto& row : dimension_table()) rep.summary()["group_cardinality"][std::to_string(row.dimension)] = t.group_cardinality(row.dimension);
  rep.write(kPass);
  std::ofstream table(o.out + "/orbit-table-p" + std::to_string(o.prime) + ".tsv");
  write_orbit_table(table, t);
  std::cout << t.entries.size() << " orbits, total " << total << '\n';
  return kPass;
}

int cmd_exponents(const Options& o) {
  const auto t = exponent_table();
  Report rep("exponents", o.out);
  rep.columns({"j", "x_exponent", "n_exponent", "alpha_cap"});
  for (const auto& r : t.rows) {
    rep.row({std::to_string(r.j), to_string(r.x_exponent), std::to_string(r.n_exponent), to_string(r.alpha_cap)});
    std::cout << "j=" << r.j << "  X^{" << r.x_exponent << "} N^" << r.n_exponent << "  alpha <= " << r.alpha_cap << '\n';
  }
  rep.summary()["alpha_max"] = to_string(t.alpha_max);
  rep.summary()["bottleneck"] = t.bottleneck;
  rep.write(kPass);
  std::cout << "alpha_max = " << t.alpha_max << " (j = " << t.bottleneck << ")\n";
  return kPass;
}

int cmd_sieve_t(const Options& o) {
  Rational alpha;
  try {
    alpha = parse_rational(o.alpha_exact);
  } catch (const std::exception&) {
    fail(ErrorKind::config, "cannot parse alpha '" + o.alpha_exact + "'");
  }
  if (alpha <= 0) fail(ErrorKind::config, "alpha must be positive");
  const int t = weighted_sieve_t(alpha, o.greaves ? SieveConstant::greaves : SieveConstant::log4_over_log3);
  Report rep("sieve-t", o.out);
  rep.config("alpha", to_string(alpha));
  rep.config("constant", o.greaves ? "greaves" : "log4/log3");
  rep.columns({"alpha", "t"});
  rep.row({to_string(alpha), std::to_string(t)});
  rep.summary()["t"] = t;
  rep.write(kPass);
  std::cout << t << '\n';
  return kPass;
}

int cmd_lod(const Options& o) {
  LodConfig cfg;
  cfg.X = o.X;
  cfg.alpha = o.alpha;
  cfg.eta = o.eta;
  cfg.scale = o.scale;
  cfg.workers = o.workers;
  if (!(cfg.X >= 1.0) || cfg.X > cfg.cap) fail(ErrorKind::config, "X must lie in [1, 1e7]");
  if (cfg.alpha < 0.0 || cfg.alpha > 1.0) fail(ErrorKind::config, "alpha must lie in [0, 1]");
  if (!(cfg.eta > 0.0)) fail(ErrorKind::config, "eta must be positive");
  if (!(cfg.scale > 0.0)) fail(ErrorKind::config, "scale must be positive");
  if (o.count_mode != "batched" && o.count_mode != "direct") fail(ErrorKind::config, "count mode must be batched or direct");
  const auto r = lod_error_sum(cfg, o.count_mode == "direct" ? CountMode::direct : CountMode::batched);
  Report rep("lod", o.out);
  rep.config("X", cfg.X);
  rep.config("alpha", cfg.alpha);
  rep.config("eta", cfg.eta);
  rep.config("weight", "psi(u)=exp(1-1/(1-u^2))");
  rep.config("scale", cfg.scale);
  rep.config("count_mode", o.count_mode);
  rep.config("workers", cfg.workers);
  rep.columns({"q", "lattice", "main_term", "error", "Z"});
  for (const auto& row : r.rows) rep.row({std::to_string(row.q), fmt(row.lattice), fmt(row.main_term), fmt(row.error), fmt(row.Z)});
  rep.summary()["cumulative"] = r.cumulative;
  rep.summary()["cumulative_over_X"] = r.cumulative / cfg.X;
  for (const auto& b : r.blocks) rep.summary()["blocks"].push_back({{"N", b.N}, {"sum_abs_error", b.sum_abs_error}});
  rep.write(kPass);
  std::cout << "sum |E| = " << fmt(r.cumulative) << " over " << r.rows.size() << " moduli, / X = " << fmt(r.cumulative / cfg.X) << '\n';
  return kPass;
}

int cmd_dual_bound(const Options& o) {
  DualBoundConfig cfg;
  cfg.space = parse_space(o.space);
  cfg.X = o.db_X;
  cfg.eta = o.db_eta;
  cfg.N = o.N;
  cfg.check_split = o.check_split;
  if (cfg.N < 1) fail(ErrorKind::config, "N must be positive");
  if (!(cfg.X >= 1.0)) fail(ErrorKind::config, "X must be at least 1");
  const auto r = dual_bound_sum(cfg);
  Report rep("dual-bound", o.out);
  rep.config("space", o.space);
  rep.config("X", cfg.X);
  rep.config("eta", cfg.eta);
  rep.config("N", cfg.N);
  rep.config("check_split", cfg.check_split);
  rep.columns({"q", "value", "zero_part"});
  for (const auto& row : r.rows) rep.row({std::to_string(row.q), fmt(to_double(row.value)), fmt(to_double(row.zero_part))});
  rep.summary()["Z"] = r.Z;
  rep.summary()["radius"] = r.radius;
  rep.summary()["total"] = to_double(r.total);
  rep.summary()["zero_part"] = to_double(r.zero_part);
  rep.summary()["nonzero_part"] = to_double(r.nonzero_part);
  int status = kPass;
  if (cfg.check_split) {
    rep.summary()["split_checked"] = r.split_checked;
    rep.summary()["split_failed"] = r.split_failed;
    if (r.split_failed) status = kMismatch;
  }
  if (cfg.space == SpaceId::cubic) {
    const auto maj = cubic_dual_majorant(cfg.X, cfg.eta, cfg.N);
    rep.summary()["majorant"] = {{"zero_part", maj.zero_part}, {"nonzero_part", maj.nonzero_part}};
    if (to_double(r.total) > maj.zero_part + maj.nonzero_part) status = kMismatch;
  }
  rep.write(status);
  std::cout << "Z = " << fmt(r.Z) << ", sum = " << fmt(to_double(r.total)) << '\n';
  return status;
}

int cmd_geosieve(const Options& o) {
  const auto x0 = parse_ints(o.x0);
  if (x0.size() != 4) fail(ErrorKind::config, "x0 needs four coordinates");
  if (o.m < 1 || o.P < 2 || !(o.lambda >= 0.0)) fail(ErrorKind::config, "need m >= 1, P >= 2, lambda >= 0");
  GeoScheme scheme;
  if (o.scheme == "disc0") {
    scheme = scheme_disc_zero();
  } else if (o.scheme == "origin") {
    scheme = scheme_origin();
  } else {
    fail(ErrorKind::config, "scheme must be disc0 or origin");
  }
  auto g = GeoSieveQuery::standard(o.lambda, o.m, o.P, scheme);
  if (o.P_hi > 0) g.P_hi = o.P_hi;
  if (g.P_hi < g.P_lo) fail(ErrorKind::config, "P-hi below P");
  std::copy(x0.begin(), x0.end(), g.x0.begin());
  const auto r = geo_pair_count(g);
  Report rep("geosieve", o.out);
  rep.config("lambda", o.lambda);
  rep.config("m", o.m);
  rep.config("x0", o.x0);
  rep.config("P_lo", g.P_lo);
  rep.config("P_hi", g.P_hi);
  rep.config("scheme", scheme.name);
  rep.columns({"lambda", "pairs", "points", "primes", "bound", "ratio"});
  rep.row({fmt(o.lambda), std::to_string(r.pairs), std::to_string(r.points), std::to_string(r.primes.size()), fmt(r.bound), fmt(r.ratio)});
  rep.summary()["pairs"] = r.pairs;
  rep.summary()["bound"] = r.bound;
  rep.summary()["ratio"] = r.ratio;
  rep.write(kPass);
  std::cout << r.pairs << " pairs, ratio to bound " << fmt(r.ratio) << '\n';
  return kPass;
}

int cmd_reducible(const Options& o) {
  const auto ys = parse_ints(o.Y);
  if (ys.empty()) fail(ErrorKind::config, "empty Y grid");
  for (i64 y : ys) {
    if (y < 1) fail(ErrorKind::config, "Y must be positive");
    if (y > 5000) fail(ErrorKind::resource_limit, "Y above 5000");
  }
  Report rep("reducible", o.out);
  rep.config("Y", o.Y);
  rep.columns({"Y", "count"});
  std::vector<double> xs, cs;
  for (i64 y : ys) {
    const u64 n = reducible_count(y);
    rep.row({std::to_string(y), std::to_string(n)});
    xs.push_back(static_cast<double>(y));
    cs.push_back(static_cast<double>(n));
  }
  if (ys.size() >= 2) {
    const auto fit = fit_loglog(xs, cs);
    rep.summary()["slope"] = fit.slope;
    rep.summary()["residuals"] = fit.residuals;
    std::cout << "growth exponent " << fmt(fit.slope) << '\n';
  }
  rep.write(kPass);
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pvs: Fourier transforms, orbits and error terms for prehomogeneous vector spaces"};
  app.require_subcommand(1);
  Options o;
  app.add_option("--out", o.out, "output directory")->capture_default_str();
  app.add_option("--workers", o.workers, "worker threads")->capture_default_str()->check(CLI::PositiveNumber);

  auto* ft = app.add_subcommand("ft-verify", "brute-force vs closed-form Fourier tables");
  ft->add_option("--space", o.space)->capture_default_str();
  ft->add_option("--primes,--prime", o.primes, "e.g. 3..23 or 3,5")->capture_default_str();
  ft->add_option("--mode", o.mode, "per-class or exhaustive (cubic)")->capture_default_str();
  ft->add_option("--orbit-table", o.orbit_table, "reuse an orbit table written by 'orbits'");

  auto* orb = app.add_subcommand("orbits", "orbit decomposition of the quartic space over F_p");
  orb->add_option("--prime", o.prime)->capture_default_str();

  auto* ex = app.add_subcommand("exponents", "exponent table and alpha_max");

  auto* st = app.add_subcommand("sieve-t", "weighted-sieve threshold t for a level alpha");
  st->add_option("--alpha", o.alpha_exact, "rational, e.g. 7/48")->capture_default_str();
  st->add_flag("--greaves", o.greaves, "use Greaves' constant");

  auto* lod = app.add_subcommand("lod", "sum of |E(X, q)| over squarefree q <= X^alpha (cubic)");
  lod->add_option("--X", o.X)->capture_default_str();
  lod->add_option("--alpha", o.alpha)->capture_default_str();
  lod->add_option("--eta", o.eta)->capture_default_str();
  lod->add_option("--scale", o.scale, "bump scale s")->capture_default_str();
  lod->add_option("--count-mode", o.count_mode, "batched or direct")->capture_default_str();

  auto* db = app.add_subcommand("dual-bound", "dual-side sum of |Psi_q-hat| over q in [N, 2N]");
  db->add_option("--space", o.space)->capture_default_str();
  db->add_option("--X", o.db_X)->capture_default_str();
  db->add_option("--eta", o.db_eta)->capture_default_str();
  db->add_option("--N", o.N)->capture_default_str();
  db->add_flag("--check-split", o.check_split);

  auto* gs = app.add_subcommand("geosieve", "pairs (x, p) with x mod p on a scheme");
  gs->add_option("--lambda", o.lambda)->capture_default_str();
  gs->add_option("--m", o.m)->capture_default_str();
  gs->add_option("--x0", o.x0)->capture_default_str();
  gs->add_option("--P", o.P, "window [P, 2P]")->capture_default_str();
  gs->add_option("--P-hi", o.P_hi, "override the window end");
  gs->add_option("--scheme", o.scheme, "disc0 or origin")->capture_default_str();

  auto* rd = app.add_subcommand("reducible", "count of cubic forms with Disc = 0 in a box");
  rd->add_option("--Y", o.Y, "comma-separated grid")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kConfig;
  }

  try {
    if (*ft) return cmd_ft_verify(o);
    if (*orb) return cmd_orbits(o);
    if (*ex) return cmd_exponents(o);
    if (*st) return cmd_sieve_t(o);
    if (*lod) return cmd_lod(o);
    if (*db) return cmd_dual_bound(o);
    if (*gs) return cmd_geosieve(o);
    if (*rd) return cmd_reducible(o);
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_for(e.kind());
  } catch (const std::bad_alloc&) {
    std::cerr << "out of memory\n";
    return kResource;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  }
  return kConfig;
}
