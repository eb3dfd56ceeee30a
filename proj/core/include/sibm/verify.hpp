#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "sibm/geometry.hpp"
#include "sibm/lattice.hpp"
#include "sibm/processes.hpp"
#include "sibm/stats.hpp"
#include "sibm/timechange.hpp"

namespace sibm {

struct MCEstimate {
  double estimate = 0;
  double std_error = 0;
  double theory = 0;
  double z = 0;
  std::size_t n = 0;
};

struct SubTest {
  std::string name;
  double statistic = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  bool pass = false;
};

// The verdict is a pure function of the recorded statistics and thresholds.
struct TestReport {
  std::string name;
  std::vector<SubTest> subtests;
  bool pass = false;
  std::map<std::string, double> details;
};

// Battery run on a retimed series with recorded clock differences:
//   (i)  zero-mean test on standardized increments,
//   (ii) variance ratio sum(dY^2)/sum(dtheta) against chi-square bounds
//        (Satterthwaite-matched degrees of freedom),
//   (iii) KS normality of standardized increments,
//   (iv) lag-1 autocorrelation bound 3/sqrt(N).
// Passes only when every sub-test passes at the given level. Needs at least
// 1000 increments with strictly positive clock steps.
TestReport bm_suite(const PathSample& series, double alpha_level);

// Realized quadratic variation: sum of squared increments.
double qv_realized(const PathSample& path);

struct SivParams {
  int grid = 256;
  double t_max = 1.0;
  std::size_t replicates = 500;
  std::uint64_t seed = 1;
};

// Sequence-independent-variation check: one shared field per replicate is
// projected along both flows; the mean QV difference must vanish and each
// mean must match its theory value (snapped end measure, times lambda for the
// compensated Poisson model). Flows must share their first and last sets.
TestReport siv_check(const ProcessModel& model, const Flow& flow_a, const Flow& flow_b,
                     const Measure& sigma, const SivParams& params);

struct FirstPassageResult {
  MCEstimate estimate;
  // Fraction of replicates whose grid maximum reached the level, before the
  // within-step crossing correction.
  double grid_fraction = 0;
  std::vector<double> per_replicate;
};

// P(level reached before the flow's clock runs out), estimated along exact
// path-mode replicates. Within-step crossings are handled by the exact
// Brownian-bridge crossing probability, so the estimate has no time-
// discretization bias. Theory is 2 - 2 Phi(a / sqrt(sigma_end)).
FirstPassageResult mc_first_passage(const Flow& flow, double a, std::size_t replicates,
                                    std::uint64_t seed, bool keep_raw = false);

struct ExitResult {
  MCEstimate estimate;
  std::size_t censored = 0;
  std::vector<double> per_replicate;
};

// P(the first exit from (a, b) happens at b), by sequential exact walk:
// each step resolves within-step boundary touches with the one-sided bridge
// probabilities. Replicates still inside when the flow ends are censored and
// reported. Theory is |a| / (b + |a|).
ExitResult mc_exit(const Flow& flow, double a, double b, std::size_t replicates,
                   std::uint64_t seed, bool keep_raw = false);

constexpr std::size_t kNoPassage = static_cast<std::size_t>(-1);

// First grid index whose cumulative value reaches the level, or kNoPassage.
std::size_t first_passage_index(const PathSample& path, double level);

// Values are unchanged before the first passage of the level and reflected to
// 2*level - Y at and after it. The overload with an explicit index fixes the
// pivot, which makes double reflection an involution.
PathSample reflect_path(const PathSample& path, double level);
PathSample reflect_path(const PathSample& path, double level, std::size_t index);

struct StationarityParams {
  int grid = 256;
  double t_max = 8.0;
  std::size_t replicates = 400;
  double level = 0.01;  // family level, Bonferroni-split across pairs
  std::uint64_t seed = 1;
};

// Draws the increment X_{A^eps} - X_A for every base set (the enlargement
// extends axis 0 by a measure-eps band) and runs pairwise two-sample KS
// tests. Base sets should have disjoint bands so the samples are independent.
TestReport stationarity_check(const ProcessModel& model, const std::vector<Rect>& bases,
                              double eps, const Measure& sigma,
                              const StationarityParams& params);

struct DiagnosticsParams {
  std::vector<double> schedule = {100, 1000, 10000};
  double clock_step = 1.0;
  std::size_t replicates = 1000;
  double run_max_level = 3.0;
  double slln_band = 0.05;
  std::uint64_t seed = 1;
};

struct DiagnosticsReport {
  // Fraction of replicates with |Y|/sigma inside the band at the last
  // checkpoint; passes when >= 0.99.
  MCEstimate slln;
  std::vector<std::pair<double, double>> slln_by_checkpoint;
  // Bridge-corrected running-max exceedance of the level by the last
  // checkpoint; passes within 3 binomial standard deviations of theory.
  MCEstimate run_max;
  // Report-only summaries.
  stats::Summary lil_ratio;
  stats::Summary zero_crossings;
  stats::Summary zero_crossings_reference;
  bool pass = false;
};

DiagnosticsReport asymptotic_diagnostics(const DiagnosticsParams& params);

// First-passage indicators over grid corners; monotone in the partial order.
struct Frontier {
  double level = 0;
  int n = 0;
  std::vector<std::uint8_t> passed;  // (n+1)^2 flags, row-major in iy

  bool passed_at(int ix, int iy) const {
    return passed[static_cast<std::size_t>(iy) * (n + 1) + ix] != 0;
  }
};

Frontier compute_frontier(const FieldSample& field, double level);

struct FrontierParams {
  int grid = 256;
  double t_max = 1.0;
  std::size_t replicates = 2000;
  std::uint64_t seed = 1;
};

// Exploratory: P(sup over all grid corners below corner_set of X >= level),
// reported beside the one-parameter first-passage formula. No verdict.
MCEstimate frontier_sup(const Rect& corner_set, double level, const Measure& sigma,
                        const FrontierParams& params);

// Independent one-parameter Brownian generator (separate RNG machinery);
// used for calibration baselines and the zero-crossing comparison.
PathSample reference_bm_path(std::uint64_t seed, std::size_t steps, double horizon);

struct BmHarnessParams {
  std::size_t lattice_count = 50;
  std::size_t runs = 200;
  std::size_t min_increments = 1000;
  double alpha = 0.01;
  double domain = 10.0;
  std::size_t max_rects = 12;
  ProcessModel model = ProcessModel::sibm();
  // Reflection level relative to sqrt(sigma_end); NaN switches reflection off.
  double reflect_level = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 1;
};

struct BmHarnessResult {
  std::size_t runs = 0;
  std::vector<std::pair<std::string, std::size_t>> rejections;
  std::size_t suite_failures = 0;
  double per_test_bound = 0;
  double suite_fail_rate = 0;
  // Every sub-test's rejection rate within the one-sided binomial bound.
  bool calibrated = false;
};

// Samples the model along flows built over random lattices, retimes through
// the inverted clock and runs bm_suite; aggregates per-sub-test rejections.
BmHarnessResult run_bm_harness(const BmHarnessParams& params);

}  // namespace sibm
