#pragma once

#include <utility>
#include <vector>

#include "sibm/lattice.hpp"
#include "sibm/processes.hpp"

namespace sibm {

// Piecewise-linear monotone inverse of a clock: given a target clock value,
// returns the parameter at which the flow reaches it. Only strictly monotone
// clocks are invertible; the knots come from the flow grid.
class TimeChange {
 public:
  TimeChange(std::vector<double> theta, std::vector<double> alpha);

  double theta_min() const { return theta_.front(); }
  double theta_max() const { return theta_.back(); }
  std::size_t knots() const { return theta_.size(); }
  double knot_theta(std::size_t i) const { return theta_[i]; }
  double knot_alpha(std::size_t i) const { return alpha_[i]; }

  // Linear interpolation between knots; throws outside the covered range.
  double operator()(double theta) const;

 private:
  std::vector<double> theta_;
  std::vector<double> alpha_;
};

// Inverts the clock of a flow (or raw (alpha, theta) pairs). theta must be
// strictly increasing: a flat step means the underlying measure was not
// strictly monotone along the sequence.
TimeChange invert_clock(const std::vector<std::pair<double, double>>& clock_pairs);
TimeChange invert_clock(const Flow& flow);

// Resamples the path on a uniform clock grid of the given step. No value
// interpolation: each retimed point reads the path at the last grid point
// whose clock does not exceed the target, and the clock actually attained is
// recorded so increment variances stay exact. Repeated lookups collapse.
PathSample retime(const PathSample& path, const TimeChange& tc, double step);

}  // namespace sibm
