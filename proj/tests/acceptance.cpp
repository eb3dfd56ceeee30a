// Acceptance suite: one line per criterion, nonzero exit when any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include <json.hpp>

#include "oracles.hpp"
#include "sibm/cli.hpp"
#include "sibm/rng.hpp"
#include "sibm/verify.hpp"

using namespace sibm;
using nlohmann::json;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("[%s] criterion %2d: %s — %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double elapsed_s(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Criterion 1: Brownian paths along flows over random lattices, retimed,
// must keep every bm_suite sub-test within the binomial calibration bound.
void criterion_1() {
  auto t0 = std::chrono::steady_clock::now();
  BmHarnessParams params;
  params.lattice_count = 50;
  params.runs = 200;
  params.min_increments = 1000;
  params.alpha = 0.01;
  params.domain = 10;
  params.max_rects = 12;
  params.seed = 20240101;
  BmHarnessResult result = run_bm_harness(params);
  const double secs = elapsed_s(t0);
  std::string rates;
  for (const auto& [name, count] : result.rejections) {
    rates += name + "=" + fmt(static_cast<double>(count) / 200.0) + " ";
  }
  const bool pass = result.calibrated && secs <= 120;
  report(1, "time-changed projections pass the Brownian suite", pass,
         rates + "bound=" + fmt(result.per_test_bound) + " runtime=" + fmt(secs) + "s");
}

void criterion_2() {
  std::string detail;
  bool pass = true;
  for (ProcessModel model : {ProcessModel::common_factor(), ProcessModel::variance_skew()}) {
    BmHarnessParams params;
    params.lattice_count = 10;
    params.runs = 100;
    params.min_increments = 1000;
    params.model = model;
    params.seed = 20240102;
    BmHarnessResult result = run_bm_harness(params);
    pass = pass && result.suite_fail_rate >= 0.99;
    detail += std::string(model.name()) + "_fail_rate=" + fmt(result.suite_fail_rate) + " ";
  }
  report(2, "dependence and skew controls fail the suite", pass, detail);
}

// Repeat-seed policy: one rerun with a logged fresh seed; two misses fail.
template <typename Runner>
bool with_retry(Runner runner, std::uint64_t seed, std::string& detail) {
  if (runner(seed, detail)) return true;
  const std::uint64_t fresh = rng::Key(seed).fork(0xfe11bacULL).state;
  detail += " retry_seed=" + std::to_string(fresh);
  return runner(fresh, detail);
}

void criterion_3() {
  Measure leb = Measure::lebesgue(2);
  const std::size_t n = 100000;
  bool all = true;
  std::string detail;
  struct Case {
    double a, b;
  };
  for (Case c : {Case{-1, 2}, Case{-1, 1}}) {
    const double horizon = 20 * std::max(c.a * c.a, c.b * c.b);
    Flow flow = corner_flow(Corner{std::sqrt(horizon), std::sqrt(horizon)}, leb, 0.05);
    auto runner = [&](std::uint64_t seed, std::string& d) {
      ExitResult res = mc_exit(flow, c.a, c.b, n, seed);
      const bool censor_ok =
          static_cast<double>(res.censored) < 1e-4 * static_cast<double>(n);
      const bool ok = std::fabs(res.estimate.estimate - res.estimate.theory) <= 0.005 &&
                      censor_ok;
      d += "P(b=" + fmt(c.b) + ")=" + fmt(res.estimate.estimate) + " vs " +
           fmt(res.estimate.theory) + " censored=" + std::to_string(res.censored) + "  ";
      return ok;
    };
    all = with_retry(runner, 20240103, detail) && all;
  }
  report(3, "interval exit probabilities", all, detail);
}

void criterion_4() {
  Measure leb = Measure::lebesgue(2);
  Flow flow = corner_flow(Corner{1, 1}, leb, 0.001);
  const double theory = 2 - 2 * stats::normal_cdf(1.0);
  std::string detail;
  auto runner = [&](std::uint64_t seed, std::string& d) {
    FirstPassageResult res = mc_first_passage(flow, 1.0, 100000, seed);
    d += "estimate=" + fmt(res.estimate.estimate) + " theory=" + fmt(res.estimate.theory);
    return std::fabs(res.estimate.estimate - theory) <= 0.005;
  };
  bool pass = with_retry(runner, 20240104, detail);
  report(4, "first-passage probability (path reduction)", pass, detail);
}

void criterion_5() {
  auto t0 = std::chrono::steady_clock::now();
  BmHarnessParams params;
  params.lattice_count = 50;
  params.runs = 200;
  params.min_increments = 1000;
  params.seed = 20240105;
  params.reflect_level = 0.5;
  BmHarnessResult result = run_bm_harness(params);
  std::string rates;
  for (const auto& [name, count] : result.rejections) {
    rates += name + "=" + fmt(static_cast<double>(count) / 200.0) + " ";
  }
  report(5, "reflected paths stay Brownian", result.calibrated,
         rates + "bound=" + fmt(result.per_test_bound) + " runtime=" + fmt(elapsed_s(t0)) + "s");
}

void criterion_6() {
  Measure leb = Measure::lebesgue(2);
  Flow flow = corner_flow(Corner{1, 1}, leb, 0.001);
  const std::size_t runs = 500;
  std::size_t in_range = 0;
  for (std::size_t r = 0; r < runs; ++r) {
    double qv = qv_realized(
        sample_bm_path(flow, rng::Key(20240106).fork(rng::kRunStream).fork(r).state));
    if (qv >= 0.85 && qv <= 1.15) ++in_range;
  }
  const double frac = static_cast<double>(in_range) / static_cast<double>(runs);
  report(6, "realized quadratic variation concentrates at the end measure", frac >= 0.99,
         "in [0.85,1.15]: " + fmt(frac) + " of " + std::to_string(runs) + " runs, steps=" +
             std::to_string(flow.size() - 1));
}

void criterion_7() {
  Measure leb = Measure::lebesgue(2);
  UnionSet full = union_canonicalize({Corner{1, 1}});
  Flow a = extend_sequence({union_canonicalize({Corner{1, 0.25}}), full}, leb, 0.01);
  Flow b = extend_sequence({union_canonicalize({Corner{0.25, 1}}), full}, leb, 0.01);
  SivParams params;
  params.grid = 256;
  params.t_max = 1;
  params.replicates = 500;
  params.seed = 20240107;
  bool pass = true;
  std::string detail;
  TestReport sib = siv_check(ProcessModel::sibm(), a, b, leb, params);
  pass = pass && sib.pass;
  detail += "sibm(diff=" + fmt(sib.details["mean_diff"]) + ", qv=" +
            fmt(sib.details["mean_qv_a"]) + ") ";
  for (double lambda : {1.0, 2.0}) {
    TestReport po = siv_check(ProcessModel::centered_poisson(lambda), a, b, leb, params);
    pass = pass && po.pass;
    detail += "poisson" + fmt(lambda) + "(diff=" + fmt(po.details["mean_diff"]) + ", qv=" +
              fmt(po.details["mean_qv_a"]) + " vs " + fmt(po.details["theory"]) + ") ";
  }
  report(7, "sequence-independent variation on shared fields", pass, detail);
}

void criterion_8() {
  Measure leb = Measure::lebesgue(2);
  rng::Key key(20240108);
  double worst = 0;
  for (std::size_t i = 0; i < 10000; ++i) {
    rng::Key k = key.fork(i);
    std::vector<Corner> corners;
    const std::size_t count = 1 + static_cast<std::size_t>(rng::uniform(k.fork(0)) * 5.0);
    for (std::size_t c = 0; c < count; ++c) {
      corners.push_back(Corner{10 * rng::uniform(k.fork(1 + 2 * c)) + 1e-3,
                               10 * rng::uniform(k.fork(2 + 2 * c)) + 1e-3});
    }
    UnionSet u = union_canonicalize(corners);
    ScalingGroupElement g{{4 * rng::uniform(k.fork(100)) + 1e-2,
                           4 * rng::uniform(k.fork(101)) + 1e-2}};
    const double lhs = union_measure(scale_action(g, u), leb);
    const double rhs = eta(g) * union_measure(u, leb);
    worst = std::max(worst, std::fabs(lhs - rhs) / std::max(1e-300, std::fabs(rhs)));
  }
  // multiplicativity, exact on dyadic factors
  bool mult_exact = true;
  std::mt19937_64 gen(20240108);
  std::uniform_int_distribution<int> e(-3, 3);
  for (int i = 0; i < 10000; ++i) {
    ScalingGroupElement g{{std::ldexp(1.0, e(gen)), std::ldexp(1.0, e(gen))}};
    ScalingGroupElement h{{std::ldexp(1.0, e(gen)), std::ldexp(1.0, e(gen))}};
    ScalingGroupElement gh{{g.factors[0] * h.factors[0], g.factors[1] * h.factors[1]}};
    if (eta(gh) != eta(g) * eta(h)) mult_exact = false;
  }
  report(8, "scaling action multiplies measures by eta", worst <= 1e-12 && mult_exact,
         "max relative error=" + fmt(worst) + " eta multiplicative (dyadic)=" +
             (mult_exact ? "exact" : "violated"));
}

void criterion_9() {
  Measure leb = Measure::lebesgue(2);
  rng::Key key(20240109);
  std::size_t exact = 0;
  const std::size_t instances = 1000;
  for (std::size_t i = 0; i < instances; ++i) {
    FieldSample field(ProcessModel::sibm(), 128, 1.0, leb, 900000 + i / 125);
    rng::Key k = key.fork(i);
    Rect base{Corner{rng::uniform(k.fork(0)), rng::uniform(k.fork(1))}};
    std::vector<Rect> excl;
    const std::size_t count = i % 6;
    for (std::size_t c = 0; c < count; ++c) {
      excl.push_back(Rect{Corner{rng::uniform(k.fork(2 + 2 * c)), rng::uniform(k.fork(3 + 2 * c))}});
    }
    if (evaluate_increment(field, base, excl) == oracle::cell_sum_region(field, base, excl)) {
      ++exact;
    }
  }
  report(9, "inclusion-exclusion additivity (bit-exact)", exact == instances,
         std::to_string(exact) + "/" + std::to_string(instances) + " instances bit-equal");
}

void criterion_10() {
  Measure leb = Measure::lebesgue(2);
  bool closure_ok = true, conserve_ok = true, strong_past_ok = true;
  std::mt19937_64 gen(20240110);
  std::uniform_real_distribution<double> u(0.3, 9.7);
  for (int i = 0; i < 300; ++i) {
    std::vector<Corner> seeds;
    const int k = 2 + i % 5;  // up to 6 corners
    for (int c = 0; c < k; ++c) seeds.push_back(Corner{u(gen), u(gen)});
    std::vector<Rect> rects;
    for (auto& c : seeds) rects.push_back(Rect{c});
    Subsemilattice lat = intersection_closure(rects);
    auto expect = oracle::min_closure(seeds);
    std::set<Corner> got;
    for (const Rect& r : lat.sets) got.insert(r.corner);
    if (got != std::set<Corner>(expect.begin(), expect.end())) closure_ok = false;
  }
  double worst_gap = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Subsemilattice lat = random_lattice(rng::Key(20240110).fork(seed).state, 12, 10.0);
    Numbering num = consistent_numbering(lat, leb);
    CellDecomposition dec = left_neighborhoods(lat, num, leb);
    double sum = 0;
    UnionSet all;
    for (const Cell& c : dec.cells) sum += c.measure;
    for (const Rect& r : lat.sets) all = union_insert(all, r.corner);
    worst_gap = std::max(worst_gap, std::fabs(sum - union_measure(all, leb)));
    for (std::size_t i = 0; i < num.order.size(); ++i) {
      for (std::size_t j = 0; j < num.order.size(); ++j) {
        const Corner& a = lat.sets[num.order[i]].corner;
        const Corner& b = lat.sets[num.order[j]].corner;
        if (corner_leq(a, b) && a != b && i >= j) strong_past_ok = false;
      }
    }
  }
  conserve_ok = worst_gap <= 1e-9;
  report(10, "Lattice oracles", closure_ok && conserve_ok && strong_past_ok,
         std::string("closure=") + (closure_ok ? "ok" : "bad") +
             " conservation_gap=" + fmt(worst_gap) + " strong_past=" +
             (strong_past_ok ? "ok" : "bad"));
}

void criterion_11() {
  DiagnosticsParams params;
  params.replicates = 1000;
  params.seed = 20240111;
  DiagnosticsReport rep = asymptotic_diagnostics(params);
  const double band =
      3 * std::sqrt(rep.run_max.theory * (1 - rep.run_max.theory) / 1000.0);
  const bool slln_ok = rep.slln.estimate >= 0.99;
  const bool rm_ok = std::fabs(rep.run_max.estimate - rep.run_max.theory) <= band;
  report(11, "growing-domain diagnostics", slln_ok && rm_ok,
         "P(|X|/sigma<=0.05)=" + fmt(rep.slln.estimate) + " runmax=" +
             fmt(rep.run_max.estimate) + " vs " + fmt(rep.run_max.theory) +
             " | report-only: lil_median=" + fmt(rep.lil_ratio.median) + " zeros_mean=" +
             fmt(rep.zero_crossings.mean) + " ref=" + fmt(rep.zero_crossings_reference.mean));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion_12() {
  auto run = [](std::vector<std::string> args) { return cli::run(args); };
  const std::string out1 = "/tmp/sibm_acc_rep1.json";
  const std::string out2 = "/tmp/sibm_acc_rep2.json";
  const std::string out3 = "/tmp/sibm_acc_rep3.json";
  bool pass = true;
  std::string detail;

  int c1 = run({"mc", "exit", "--a", "-1", "--b", "2", "--n", "20000", "--seed", "424242",
                "--mesh", "0.1", "--threads", "4", "--out", out1});
  int c2 = run({"mc", "exit", "--a", "-1", "--b", "2", "--n", "20000", "--seed", "424242",
                "--mesh", "0.1", "--threads", "1", "--out", out2});
  std::string r1 = slurp(out1), r2 = slurp(out2);
  // the echoed thread count is configuration, not result
  json j1 = json::parse(r1), j2 = json::parse(r2);
  j1["params"].erase("threads");
  j2["params"].erase("threads");
  if (c1 != 0 || c2 != 0 || j1 != j2) {
    pass = false;
    detail += "thread-count variation changed the report; ";
  }

  // replay from the embedded config
  json params = j1["params"];
  int c3 = run({"mc", "exit", "--a", json(params["a"]).dump(), "--b",
                json(params["b"]).dump(), "--n", json(params["n"]).dump(), "--mesh",
                json(params["mesh"]).dump(), "--length-factor",
                json(params["length_factor"]).dump(), "--seed",
                json(params["seed"]).dump(), "--threads", "4", "--out", out3});
  if (c3 != 0 || slurp(out3) != r1) {
    pass = false;
    detail += "replay from embedded config differed; ";
  }
  std::remove(out1.c_str());
  std::remove(out2.c_str());
  std::remove(out3.c_str());
  report(12, "Reproducibility", pass, pass ? "replay and thread invariance bit-identical" : detail);
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  if (failures == 0) {
    std::printf("acceptance: all 12 criteria passed\n");
  } else {
    std::printf("acceptance: %d criteria FAILED\n", failures);
  }
  return failures;
}
