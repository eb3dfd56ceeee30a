#include "sibm/timechange.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sibm {

TimeChange::TimeChange(std::vector<double> theta, std::vector<double> alpha)
    : theta_(std::move(theta)), alpha_(std::move(alpha)) {
  if (theta_.size() != alpha_.size() || theta_.size() < 2) {
    throw std::invalid_argument("TimeChange: need at least two matched knots");
  }
  for (std::size_t i = 1; i < theta_.size(); ++i) {
    if (!(theta_[i] > theta_[i - 1])) {
      throw std::invalid_argument("TimeChange: clock must be strictly increasing");
    }
    if (!(alpha_[i] > alpha_[i - 1])) {
      throw std::invalid_argument("TimeChange: parameter must be strictly increasing");
    }
  }
}

double TimeChange::operator()(double theta) const {
  const double slop = 1e-9 * std::max(1.0, std::fabs(theta_max()));
  if (theta < theta_min() - slop || theta > theta_max() + slop) {
    throw std::out_of_range("TimeChange: query outside the covered clock range");
  }
  theta = std::clamp(theta, theta_min(), theta_max());
  auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
  if (it == theta_.begin()) return alpha_.front();
  if (it == theta_.end()) return alpha_.back();
  std::size_t hi = static_cast<std::size_t>(it - theta_.begin());
  std::size_t lo = hi - 1;
  double w = (theta - theta_[lo]) / (theta_[hi] - theta_[lo]);
  return alpha_[lo] + w * (alpha_[hi] - alpha_[lo]);
}

TimeChange invert_clock(const std::vector<std::pair<double, double>>& clock_pairs) {
  std::vector<double> theta, alpha;
  theta.reserve(clock_pairs.size());
  alpha.reserve(clock_pairs.size());
  for (const auto& [a, t] : clock_pairs) {
    alpha.push_back(a);
    theta.push_back(t);
  }
  return TimeChange(std::move(theta), std::move(alpha));
}

TimeChange invert_clock(const Flow& flow) { return invert_clock(clock(flow)); }

PathSample retime(const PathSample& path, const TimeChange& tc, double step) {
  if (!(step > 0)) throw std::invalid_argument("retime: step must be positive");
  if (path.clock.size() < 2) throw std::invalid_argument("retime: path too short");
  const double theta0 = path.clock.front();
  const double theta1 = path.clock.back();
  const double range = theta1 - theta0;
  if (step > range * (1 + 1e-9)) {
    throw std::invalid_argument("retime: step larger than the clock range");
  }
  const double slop = 1e-9 * std::max(1.0, std::fabs(theta1));
  if (tc.theta_min() > theta0 + slop || tc.theta_max() < theta1 - slop) {
    throw std::invalid_argument("retime: time change does not cover the clock range");
  }
  const auto targets = static_cast<std::size_t>(std::floor(range / step + 1e-9));
  PathSample out;
  out.clock.reserve(targets + 1);
  out.cumulative.reserve(targets + 1);
  std::size_t last_idx = static_cast<std::size_t>(-1);
  for (std::size_t j = 0; j <= targets; ++j) {
    const double want = theta0 + static_cast<double>(j) * step;
    auto it = std::upper_bound(path.clock.begin(), path.clock.end(), want + 1e-12);
    std::size_t idx = it == path.clock.begin()
                          ? 0
                          : static_cast<std::size_t>(it - path.clock.begin()) - 1;
    if (idx == last_idx) continue;
    last_idx = idx;
    out.clock.push_back(path.clock[idx]);
    out.cumulative.push_back(path.cumulative[idx]);
  }
  out.increments.resize(out.cumulative.size() > 0 ? out.cumulative.size() - 1 : 0);
  for (std::size_t i = 0; i + 1 < out.cumulative.size(); ++i) {
    out.increments[i] = out.cumulative[i + 1] - out.cumulative[i];
  }
  return out;
}

}  // namespace sibm
