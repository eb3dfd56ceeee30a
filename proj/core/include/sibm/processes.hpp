#pragma once

#include <cstdint>
#include <vector>

#include "sibm/geometry.hpp"
#include "sibm/lattice.hpp"
#include "sibm/rng.hpp"

namespace sibm {

enum class ModelKind { SIBM, CenteredPoisson, CommonFactor, VarianceSkew };

// SIBM and CenteredPoisson have independent, measure-stationary increments.
// The other two are negative controls: CommonFactor scales one shared
// Gaussian by the cell measure (perfectly dependent increments), VarianceSkew
// draws cells with variance measure^2 (breaks stationarity under the clock).
struct ProcessModel {
  ModelKind kind = ModelKind::SIBM;
  double lambda = 1.0;

  static ProcessModel sibm() { return {ModelKind::SIBM, 0}; }
  static ProcessModel centered_poisson(double lambda);
  static ProcessModel common_factor() { return {ModelKind::CommonFactor, 0}; }
  static ProcessModel variance_skew() { return {ModelKind::VarianceSkew, 0}; }

  const char* name() const;
};

// A realization along a flow: theta grid, cumulative values Y_alpha starting
// at 0, and their consecutive differences.
struct PathSample {
  std::vector<double> clock;
  std::vector<double> cumulative;
  std::vector<double> increments;

  std::size_t steps() const { return increments.size(); }
};

// Exact-in-distribution sampling along the flow's clock: each increment is
// drawn for its clock step, keyed by (seed, step), so the sample is
// independent of evaluation order.
PathSample sample_path(const ProcessModel& model, const Flow& flow, std::uint64_t seed);
PathSample sample_bm_path(const Flow& flow, std::uint64_t seed);

// Draws one cell value keyed by (seed, cell); shared by field materialization
// and by direct band sums so both see the same realization bit for bit.
// Values are quantized to integer multiples of `quantum` so that sums over
// disjoint cell regions are exactly additive.
class CellSampler {
 public:
  CellSampler(const ProcessModel& model, int n, double t_max, const Measure& sigma,
              std::uint64_t seed);

  std::int64_t value_q(int ix, int iy) const;
  double cell_measure(int ix, int iy) const { return ax_[0][ix] * ax_[1][iy]; }
  int grid() const { return n_; }
  double cell_width() const { return dx_; }
  static constexpr double quantum() { return 0x1.0p-32; }

 private:
  ProcessModel model_;
  int n_;
  double dx_;
  rng::Key key_;
  double common_z_ = 0;
  std::vector<double> ax_[2];  // per-axis cumulative increments
};

// An n x n grid of independent cell increments over [0, t_max]^2. Cell values
// are quantized (see CellSampler); prefix sums are kept in 64-bit integers so
// every evaluation is an exact integer sum.
class FieldSample {
 public:
  FieldSample(const ProcessModel& model, int n, double t_max, const Measure& sigma,
              std::uint64_t seed);

  int grid() const { return n_; }
  double t_max() const { return t_max_; }
  double cell_width() const { return dx_; }
  double quantum() const { return CellSampler::quantum(); }
  const Measure& measure() const { return sigma_; }
  const ProcessModel& model() const { return model_; }
  std::uint64_t seed() const { return seed_; }

  std::int64_t cell_q(int ix, int iy) const { return cells_[static_cast<std::size_t>(iy) * n_ + ix]; }
  // Quantized value of the anchored box [0, (ix*dx, iy*dx)].
  std::int64_t prefix_q(int ix, int iy) const {
    return prefix_[static_cast<std::size_t>(iy) * (n_ + 1) + ix];
  }

  // Floor snap of a coordinate onto the cell grid, clamped to [0, n]; throws
  // beyond t_max.
  int snap_index(double x) const;
  // Snapped antichain of a union, as grid corner indices (ix ascending, iy
  // strictly descending).
  std::vector<std::pair<int, int>> snap_union(const UnionSet& u) const;
  // sigma-measure of the snapped version of u.
  double snapped_measure(const UnionSet& u) const;

 private:
  ProcessModel model_;
  int n_;
  double t_max_;
  double dx_;
  Measure sigma_;
  std::uint64_t seed_;
  std::vector<std::int64_t> cells_;
  std::vector<std::int64_t> prefix_;
};

FieldSample sample_field(const ProcessModel& model, int n, double t_max,
                         const Measure& sigma, std::uint64_t seed);

// Floor snap onto an n-cell grid of width dx, clamped to [0, n]; throws when
// x lies beyond the grid.
int grid_snap(double x, double dx, int n);

// sigma-measure of u after snapping its corners onto the grid.
double snapped_union_measure(const UnionSet& u, int n, double t_max, const Measure& sigma);

// Sum of cell values over the cells inside u after snapping. Exactly additive
// over disjoint regions of the snapped grid algebra.
double evaluate_set(const FieldSample& field, const UnionSet& u);
double evaluate_set(const FieldSample& field, const Rect& r);

// Inclusion-exclusion value of base minus the exclusions; equals the direct
// cell sum over the region exactly. At most 12 exclusions.
double evaluate_increment(const FieldSample& field, const Rect& base,
                          const std::vector<Rect>& exclusions);

// Cumulative field values along the flow's sets; the clock is recomputed on
// the snapped sets so variance comparisons see the measures actually summed.
PathSample project_path(const FieldSample& field, const Flow& flow);

}  // namespace sibm
