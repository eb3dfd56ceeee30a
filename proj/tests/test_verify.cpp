#include <doctest.h>

#include <cmath>
#include "sibm/stats.hpp"
#include <random>
#include <stdexcept>

#include "sibm/verify.hpp"

using namespace sibm;

namespace {

Flow uniform_clock_flow(std::size_t steps, double dtheta) {
  Flow flow;
  flow.mesh = dtheta;
  for (std::size_t i = 0; i <= steps; ++i) {
    flow.alphas.push_back(static_cast<double>(i));
    flow.clock.push_back(dtheta * static_cast<double>(i));
  }
  return flow;
}

}  // namespace

TEST_CASE("bm_suite accepts the reference generator and rejects controls") {
  PathSample good = reference_bm_path(1234, 2000, 1.0);
  TestReport report = bm_suite(good, 0.01);
  CHECK(report.pass);
  REQUIRE(report.subtests.size() == 4);

  // zero path: variance collapses
  PathSample zero = good;
  for (auto& v : zero.cumulative) v = 0;
  for (auto& v : zero.increments) v = 0;
  TestReport zr = bm_suite(zero, 0.01);
  CHECK_FALSE(zr.pass);
  CHECK_FALSE(zr.subtests[1].pass);

  PathSample tiny = reference_bm_path(1, 500, 1.0);
  CHECK_THROWS_AS(bm_suite(tiny, 0.01), std::invalid_argument);

  PathSample flat = good;
  flat.clock[5] = flat.clock[4];
  CHECK_THROWS_AS(bm_suite(flat, 0.01), std::invalid_argument);
}

TEST_CASE("bm_suite sub-tests are calibrated on the reference generator") {
  const std::size_t runs = 250;
  std::size_t rejections[4] = {0, 0, 0, 0};
  for (std::size_t r = 0; r < runs; ++r) {
    PathSample path = reference_bm_path(50000 + r, 1500, 2.0);
    TestReport report = bm_suite(path, 0.01);
    for (std::size_t s = 0; s < 4; ++s) {
      if (!report.subtests[s].pass) ++rejections[s];
    }
  }
  const double bound = 0.01 + 3 * std::sqrt(0.01 * 0.99 / static_cast<double>(runs));
  for (std::size_t s = 0; s < 4; ++s) {
    CHECK(static_cast<double>(rejections[s]) / static_cast<double>(runs) <= bound);
  }
}

TEST_CASE("negative controls fail the suite after retiming") {
  Flow flow = uniform_clock_flow(1500, 0.01);
  std::size_t common_fails = 0, skew_fails = 0;
  const std::size_t runs = 25;
  for (std::size_t r = 0; r < runs; ++r) {
    PathSample cf = sample_path(ProcessModel::common_factor(), flow, 100 + r);
    if (!bm_suite(cf, 0.01).pass) ++common_fails;
    PathSample vs = sample_path(ProcessModel::variance_skew(), flow, 200 + r);
    if (!bm_suite(vs, 0.01).pass) ++skew_fails;
  }
  CHECK(common_fails == runs);
  CHECK(skew_fails == runs);
}

TEST_CASE("realized quadratic variation") {
  PathSample zero;
  zero.clock = {0, 0.5, 1.0};
  zero.cumulative = {0, 0, 0};
  zero.increments = {0, 0};
  CHECK(qv_realized(zero) == 0.0);

  Flow flow = uniform_clock_flow(1000, 0.001);
  PathSample p = sample_bm_path(flow, 5);
  double qv = qv_realized(p);
  CHECK(qv > 0.85);
  CHECK(qv < 1.15);

  // mean QV over replicates within 3 standard errors of theory, Brownian and
  // compensated Poisson
  const std::size_t reps = 500;
  std::vector<double> qv_bm(reps), qv_po(reps);
  ProcessModel poisson = ProcessModel::centered_poisson(2.0);
  for (std::size_t r = 0; r < reps; ++r) {
    qv_bm[r] = qv_realized(sample_bm_path(flow, 700 + r));
    qv_po[r] = qv_realized(sample_path(poisson, flow, 900 + r));
  }
  CHECK(std::fabs(stats::mean(qv_bm) - 1.0) <= 3 * stats::stderr_of_mean(qv_bm));
  CHECK(std::fabs(stats::mean(qv_po) - 2.0) <= 3 * stats::stderr_of_mean(qv_po));

  PathSample single;
  single.clock = {0, 1};
  single.cumulative = {0, 1};
  single.increments = {1};
  CHECK_THROWS_AS(qv_realized(single), std::invalid_argument);
}

TEST_CASE("mc_first_passage matches the reflection-principle law") {
  Measure leb = Measure::lebesgue(2);
  Flow flow = corner_flow(Corner{1, 1}, leb, 0.002);

  FirstPassageResult low = mc_first_passage(flow, 1e-9, 500, 3);
  CHECK(low.estimate.estimate == doctest::Approx(1.0).epsilon(1e-6));

  FirstPassageResult res = mc_first_passage(flow, 1.0, 20000, 11);
  CHECK(res.estimate.theory == doctest::Approx(0.31731050786291415).epsilon(1e-12));
  CHECK(std::fabs(res.estimate.z) <= 3);
  // the bridge correction adds mass the grid maximum misses
  CHECK(res.grid_fraction < res.estimate.estimate);

  // scale invariance: a = 2 over sigma_end = 4 has the same law
  Flow flow4 = corner_flow(Corner{2, 2}, leb, 0.008);
  FirstPassageResult scaled = mc_first_passage(flow4, 2.0, 20000, 12);
  CHECK(scaled.estimate.theory == doctest::Approx(res.estimate.theory).epsilon(1e-12));
  CHECK(std::fabs(scaled.estimate.z) <= 3);

  CHECK_THROWS_AS(mc_first_passage(flow, -1.0, 10, 1), std::invalid_argument);
}

TEST_CASE("mc_exit matches the gambler's-ruin law") {
  Measure leb = Measure::lebesgue(2);
  // horizon 20 * max(a^2, b^2)
  Flow flow = corner_flow(Corner{9, 9}, leb, 0.05);

  ExitResult sym = mc_exit(flow, -1.0, 1.0, 20000, 21);
  CHECK(sym.estimate.theory == doctest::Approx(0.5));
  CHECK(std::fabs(sym.estimate.z) <= 3);
  CHECK(sym.censored == 0);

  ExitResult skew = mc_exit(flow, -1.0, 2.0, 20000, 22);
  CHECK(skew.estimate.theory == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(std::fabs(skew.estimate.z) <= 3);

  Flow flow3 = corner_flow(Corner{14, 14}, leb, 0.05);
  ExitResult hi = mc_exit(flow3, -3.0, 1.0, 20000, 23);
  CHECK(hi.estimate.theory == doctest::Approx(0.75));
  CHECK(std::fabs(hi.estimate.z) <= 3);

  CHECK_THROWS_AS(mc_exit(flow, 1.0, 2.0, 10, 1), std::invalid_argument);
}

TEST_CASE("reflect_path") {
  PathSample p = reference_bm_path(77, 2000, 1.0);

  // far level: untouched
  PathSample same = reflect_path(p, 1e9);
  CHECK(same.cumulative == p.cumulative);

  // level zero from the start: pure negation, exact involution
  PathSample neg = reflect_path(p, 0.0);
  CHECK(neg.cumulative[0] == 0.0);
  for (std::size_t i = 0; i < p.cumulative.size(); ++i) {
    CHECK(neg.cumulative[i] == -p.cumulative[i]);
  }
  PathSample back = reflect_path(neg, 0.0, 0);
  CHECK(back.cumulative == p.cumulative);

  // positive level, fixed pivot: involution up to last-place rounding
  const double level = 0.4;
  std::size_t k = first_passage_index(p, level);
  REQUIRE(k != kNoPassage);
  PathSample w = reflect_path(p, level, k);
  for (std::size_t i = 0; i < k; ++i) CHECK(w.cumulative[i] == p.cumulative[i]);
  PathSample restored = reflect_path(w, level, k);
  for (std::size_t i = 0; i < p.cumulative.size(); ++i) {
    CHECK(std::fabs(restored.cumulative[i] - p.cumulative[i]) <= 4e-16 * (1 + 2 * level));
  }

  // a reflected Brownian path is still Brownian
  TestReport report = bm_suite(reflect_path(p, 0.3), 0.01);
  CHECK(report.pass);
}

TEST_CASE("stationarity check separates sibm from the variance-skew control") {
  Measure sigma = Measure::separable(
      {[](double x) { return x; }, [](double y) { return y * y / 4; }});
  std::vector<Rect> bases = {Rect{Corner{1, 2}}, Rect{Corner{2, 4}}, Rect{Corner{3, 1}}};
  StationarityParams params;
  params.grid = 128;
  params.t_max = 8.0;
  params.replicates = 300;
  params.seed = 5;

  TestReport ok = stationarity_check(ProcessModel::sibm(), bases, 1.0, sigma, params);
  CHECK(ok.pass);

  TestReport bad =
      stationarity_check(ProcessModel::variance_skew(), bases, 1.0, sigma, params);
  CHECK_FALSE(bad.pass);

  TestReport degenerate = stationarity_check(ProcessModel::sibm(), bases, 0.0, sigma, params);
  CHECK(degenerate.pass);

  CHECK_THROWS_AS(
      stationarity_check(ProcessModel::sibm(), bases, 1e9, sigma, params),
      std::invalid_argument);
}

TEST_CASE("asymptotic diagnostics") {
  DiagnosticsParams params;
  params.replicates = 300;
  params.seed = 9;
  DiagnosticsReport report = asymptotic_diagnostics(params);
  CHECK(report.pass);
  CHECK(report.slln.estimate >= 0.99);
  CHECK(report.slln_by_checkpoint.size() == 3);
  // |X|/sigma concentrates as sigma grows
  CHECK(report.slln_by_checkpoint.front().second <= report.slln_by_checkpoint.back().second);
  const double band =
      3 * std::sqrt(report.run_max.theory * (1 - report.run_max.theory) / 300.0);
  CHECK(std::fabs(report.run_max.estimate - report.run_max.theory) <= band);
  CHECK(report.lil_ratio.mean > 0.2);
  CHECK(report.lil_ratio.mean < 2.0);
  CHECK(report.zero_crossings.mean > 0);
  CHECK(report.zero_crossings_reference.mean > 0);
  // our sampler and the independent generator agree on the crossing scale
  CHECK(std::fabs(report.zero_crossings.mean - report.zero_crossings_reference.mean) <
        0.2 * report.zero_crossings_reference.mean);
}

TEST_CASE("frontier: monotone indicators and limiting levels") {
  Measure leb = Measure::lebesgue(2);
  FieldSample field(ProcessModel::sibm(), 32, 1.0, leb, 44);
  Frontier frontier = compute_frontier(field, 0.5);
  for (int iy = 0; iy <= 32; ++iy) {
    for (int ix = 0; ix <= 32; ++ix) {
      if (frontier.passed_at(ix, iy)) {
        if (ix < 32) CHECK(frontier.passed_at(ix + 1, iy));
        if (iy < 32) CHECK(frontier.passed_at(ix, iy + 1));
      }
    }
  }

  FrontierParams params;
  params.grid = 64;
  params.replicates = 300;
  params.seed = 3;
  MCEstimate all = frontier_sup(Rect{Corner{1, 1}}, 0.0, leb, params);
  CHECK(all.estimate == doctest::Approx(1.0));
  MCEstimate none = frontier_sup(Rect{Corner{1, 1}}, 1e9, leb, params);
  CHECK(none.estimate == 0.0);
  MCEstimate mid = frontier_sup(Rect{Corner{1, 1}}, 2.0, leb, params);
  CHECK(mid.theory == doctest::Approx(0.04550026389635842).epsilon(1e-10));
  CHECK(mid.estimate >= 0.0);
  CHECK(mid.estimate <= 1.0);
}

TEST_CASE("siv_check: shared fields along two routes") {
  Measure leb = Measure::lebesgue(2);
  UnionSet full = union_canonicalize({Corner{1, 1}});
  Flow a = extend_sequence({union_canonicalize({Corner{1, 0.25}}), full}, leb, 0.01);
  Flow b = extend_sequence({union_canonicalize({Corner{0.25, 1}}), full}, leb, 0.01);

  SivParams params;
  params.grid = 128;
  params.t_max = 1.0;
  params.replicates = 120;
  params.seed = 31;

  TestReport same = siv_check(ProcessModel::sibm(), a, a, leb, params);
  CHECK(same.pass);
  CHECK(same.subtests[0].statistic == 0.0);

  TestReport sibm_report = siv_check(ProcessModel::sibm(), a, b, leb, params);
  CHECK(sibm_report.pass);
  CHECK(sibm_report.details.at("theory") == doctest::Approx(1.0));

  SivParams pparams = params;
  pparams.replicates = 80;
  TestReport poisson_report =
      siv_check(ProcessModel::centered_poisson(1.0), a, b, leb, pparams);
  CHECK(poisson_report.pass);
  CHECK(poisson_report.details.at("theory") == doctest::Approx(1.0));

  Flow short_flow = extend_sequence({union_canonicalize({Corner{0.5, 0.5}})}, leb, 0.01);
  CHECK_THROWS_AS(siv_check(ProcessModel::sibm(), a, short_flow, leb, params),
                  std::invalid_argument);
}

TEST_CASE("bm harness smoke run") {
  BmHarnessParams params;
  params.lattice_count = 3;
  params.runs = 40;
  params.min_increments = 1000;
  params.seed = 4242;
  BmHarnessResult result = run_bm_harness(params);
  CHECK(result.runs == 40);
  CHECK(result.calibrated);
  CHECK(result.suite_fail_rate < 0.2);

  params.model = ProcessModel::common_factor();
  params.runs = 10;
  BmHarnessResult control = run_bm_harness(params);
  CHECK(control.suite_fail_rate == 1.0);
}
