#include "sibm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sibm {

namespace {

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

void require_nonnegative(const Corner& c, const char* what) {
  for (double v : c) {
    if (!(v >= 0)) throw std::invalid_argument(std::string(what) + ": negative coordinate");
  }
}

}  // namespace

bool corner_leq(const Corner& a, const Corner& b) {
  require_same_dim(a.size(), b.size(), "corner_leq");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
  }
  return true;
}

Corner corner_min(const Corner& a, const Corner& b) {
  require_same_dim(a.size(), b.size(), "corner_min");
  Corner m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::min(a[i], b[i]);
  return m;
}

bool corner_lex_less(const Corner& a, const Corner& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

bool Rect::degenerate() const {
  for (double v : corner) {
    if (v == 0) return true;
  }
  return corner.empty();
}

Rect zero_rect(std::size_t dim) { return Rect{Corner(dim, 0.0)}; }

UnionSet union_of(const Rect& r) { return union_canonicalize({r.corner}); }

Measure::Measure(std::size_t dim, std::vector<std::function<double(double)>> axis)
    : dim_(dim), axis_(std::move(axis)) {
  at_zero_.reserve(axis_.size());
  for (const auto& f : axis_) at_zero_.push_back(f(0.0));
}

Measure Measure::lebesgue(std::size_t dim) {
  if (dim < 1) throw std::invalid_argument("Measure: dimension must be >= 1");
  return Measure(dim, {});
}

Measure Measure::separable(std::vector<std::function<double(double)>> axis_cumulative) {
  if (axis_cumulative.empty()) {
    throw std::invalid_argument("Measure::separable: no axis cumulatives");
  }
  std::size_t d = axis_cumulative.size();
  return Measure(d, std::move(axis_cumulative));
}

double Measure::axis_cumulative(std::size_t axis, double x) const {
  if (axis >= dim_) throw std::invalid_argument("Measure: axis out of range");
  if (is_lebesgue()) return x;
  return axis_[axis](x) - at_zero_[axis];
}

double Measure::rect(const Rect& r) const {
  require_same_dim(r.dim(), dim_, "Measure::rect");
  double m = 1;
  for (std::size_t i = 0; i < dim_; ++i) m *= axis_cumulative(i, r.corner[i]);
  return m;
}

double Measure::axis_inverse(std::size_t axis, double target, double lo, double hi) const {
  if (axis_cumulative(axis, lo) > target || axis_cumulative(axis, hi) < target) {
    throw std::domain_error("Measure::axis_inverse: target outside bracket");
  }
  for (int i = 0; i < 200; ++i) {
    double mid = (lo + hi) / 2;
    if (axis_cumulative(axis, mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (lo + hi) / 2;
}

Rect rect_intersect(const Rect& a, const Rect& b) {
  require_same_dim(a.dim(), b.dim(), "rect_intersect");
  return Rect{corner_min(a.corner, b.corner)};
}

UnionSet union_canonicalize(std::vector<Corner> corners) {
  for (std::size_t i = 1; i < corners.size(); ++i) {
    require_same_dim(corners[i].size(), corners[0].size(), "union_canonicalize");
  }
  for (const Corner& c : corners) require_nonnegative(c, "union_canonicalize");
  std::vector<Corner> keep;
  keep.reserve(corners.size());
  for (std::size_t i = 0; i < corners.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < corners.size() && !dominated; ++j) {
      if (i == j) continue;
      if (corner_leq(corners[i], corners[j])) {
        // Break ties between duplicates by keeping the first occurrence.
        if (corners[i] == corners[j]) {
          dominated = j < i;
        } else {
          dominated = true;
        }
      }
    }
    if (!dominated) keep.push_back(corners[i]);
  }
  std::sort(keep.begin(), keep.end(), corner_lex_less);
  return UnionSet{std::move(keep)};
}

UnionSet union_insert(const UnionSet& u, const Corner& c) {
  std::vector<Corner> corners = u.corners;
  corners.push_back(c);
  return union_canonicalize(std::move(corners));
}

UnionSet union_merge(const UnionSet& a, const UnionSet& b) {
  std::vector<Corner> corners = a.corners;
  corners.insert(corners.end(), b.corners.begin(), b.corners.end());
  return union_canonicalize(std::move(corners));
}

UnionSet union_intersect(const UnionSet& a, const UnionSet& b) {
  if (a.empty() || b.empty()) return UnionSet{};
  std::vector<Corner> corners;
  corners.reserve(a.corners.size() * b.corners.size());
  for (const Corner& x : a.corners) {
    for (const Corner& y : b.corners) {
      corners.push_back(corner_min(x, y));
    }
  }
  return union_canonicalize(std::move(corners));
}

bool union_contains(const UnionSet& u, const Rect& r) {
  if (u.empty()) return false;
  require_same_dim(u.dim(), r.dim(), "union_contains");
  for (const Corner& c : u.corners) {
    if (corner_leq(r.corner, c)) return true;
  }
  return false;
}

bool union_subset(const UnionSet& a, const UnionSet& b) {
  if (a.empty()) return true;
  if (b.empty()) return false;
  require_same_dim(a.dim(), b.dim(), "union_subset");
  for (const Corner& c : a.corners) {
    if (!union_contains(b, Rect{c})) return false;
  }
  return true;
}

namespace {

// Sweep over the canonical antichain: sorted by x ascending means y strictly
// descending, so the union decomposes into vertical bands.
double union_measure_2d(const UnionSet& u, const Measure& sigma) {
  double total = 0;
  double prev_w0 = 0;
  for (const Corner& c : u.corners) {
    double w0 = sigma.axis_cumulative(0, c[0]);
    total += (w0 - prev_w0) * sigma.axis_cumulative(1, c[1]);
    prev_w0 = w0;
  }
  return total;
}

double union_measure_incl_excl(const UnionSet& u, const Measure& sigma) {
  const std::size_t k = u.corners.size();
  if (k > 20) {
    throw std::invalid_argument("union_measure: more than 20 corners in dimension >= 3");
  }
  double total = 0;
  for (std::uint32_t mask = 1; mask < (1u << k); ++mask) {
    Corner m;
    bool first = true;
    for (std::size_t i = 0; i < k; ++i) {
      if (!(mask & (1u << i))) continue;
      m = first ? u.corners[i] : corner_min(m, u.corners[i]);
      first = false;
    }
    double v = sigma.rect(Rect{m});
    total += (__builtin_popcount(mask) % 2 == 1) ? v : -v;
  }
  return total;
}

}  // namespace

double union_measure(const UnionSet& u, const Measure& sigma) {
  if (u.empty()) return 0;
  require_same_dim(u.dim(), sigma.dim(), "union_measure");
  if (sigma.dim() == 2) return union_measure_2d(u, sigma);
  if (sigma.dim() == 1) {
    double best = 0;
    for (const Corner& c : u.corners) best = std::max(best, sigma.axis_cumulative(0, c[0]));
    return best;
  }
  return union_measure_incl_excl(u, sigma);
}

double increment_measure(const Rect& a, const UnionSet& u, const Measure& sigma) {
  double with = union_measure(union_insert(u, a.corner), sigma);
  double without = union_measure(u, sigma);
  return std::max(0.0, with - without);
}

Rect scale_action(const ScalingGroupElement& g, const Rect& r) {
  require_same_dim(g.factors.size(), r.dim(), "scale_action");
  for (double f : g.factors) {
    if (!(f > 0)) throw std::invalid_argument("scale_action: nonpositive component");
  }
  Rect out = r;
  for (std::size_t i = 0; i < out.corner.size(); ++i) out.corner[i] *= g.factors[i];
  return out;
}

UnionSet scale_action(const ScalingGroupElement& g, const UnionSet& u) {
  if (u.empty()) {
    for (double f : g.factors) {
      if (!(f > 0)) throw std::invalid_argument("scale_action: nonpositive component");
    }
    return u;
  }
  std::vector<Corner> corners;
  corners.reserve(u.corners.size());
  for (const Corner& c : u.corners) corners.push_back(scale_action(g, Rect{c}).corner);
  return union_canonicalize(std::move(corners));
}

double eta(const ScalingGroupElement& g) {
  double p = 1;
  for (double f : g.factors) {
    if (!(f > 0)) throw std::invalid_argument("eta: nonpositive component");
    p *= f;
  }
  return p;
}

}  // namespace sibm
