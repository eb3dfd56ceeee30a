#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace sibm {

// Coordinates of the upper corner x of an anchored box [0, x] in R^d_+.
using Corner = std::vector<double>;

bool corner_leq(const Corner& a, const Corner& b);
Corner corner_min(const Corner& a, const Corner& b);
bool corner_lex_less(const Corner& a, const Corner& b);

// Anchored rectangle [0, corner]. The all-zero corner is the minimal set:
// the single point at the origin, measure zero, contained in every nonempty
// union. It is distinct from the empty set.
struct Rect {
  Corner corner;

  std::size_t dim() const { return corner.size(); }
  bool degenerate() const;  // some coordinate is zero

  friend bool operator==(const Rect&, const Rect&) = default;
};

Rect zero_rect(std::size_t dim);

// Finite union of anchored rectangles in canonical form: corners form an
// antichain under componentwise <= and are sorted lexicographically. An empty
// corner list is the empty set.
struct UnionSet {
  std::vector<Corner> corners;

  bool empty() const { return corners.empty(); }
  std::size_t dim() const { return corners.empty() ? 0 : corners.front().size(); }

  friend bool operator==(const UnionSet&, const UnionSet&) = default;
};

UnionSet union_of(const Rect& r);

// The difference base \ subtracted.
struct IncrementSet {
  Rect base;
  UnionSet subtracted;
};

// Strictly monotone measure evaluated through per-axis cumulatives, so that
// sigma([0,x]) = prod_m W_m(x_m). Lebesgue is W_m(x) = x. Separable
// cumulatives must be strictly increasing; they are shifted so W_m(0) = 0.
class Measure {
 public:
  static Measure lebesgue(std::size_t dim);
  static Measure separable(std::vector<std::function<double(double)>> axis_cumulative);

  std::size_t dim() const { return dim_; }
  bool is_lebesgue() const { return axis_.empty(); }
  double axis_cumulative(std::size_t axis, double x) const;
  double rect(const Rect& r) const;
  // Solves axis_cumulative(axis, x) = target for x in [lo, hi] by bisection.
  double axis_inverse(std::size_t axis, double target, double lo, double hi) const;

 private:
  Measure(std::size_t dim, std::vector<std::function<double(double)>> axis);

  std::size_t dim_ = 0;
  std::vector<std::function<double(double)>> axis_;
  std::vector<double> at_zero_;
};

// Componentwise-positive scaling g acting by [0,x] -> [0, g.x].
struct ScalingGroupElement {
  std::vector<double> factors;
};

Rect rect_intersect(const Rect& a, const Rect& b);

// Canonical antichain form: dominated corners removed, result sorted.
UnionSet union_canonicalize(std::vector<Corner> corners);
UnionSet union_insert(const UnionSet& u, const Corner& c);
UnionSet union_merge(const UnionSet& a, const UnionSet& b);
// Intersection of two unions of anchored boxes (again such a union).
UnionSet union_intersect(const UnionSet& a, const UnionSet& b);

bool union_contains(const UnionSet& u, const Rect& r);
bool union_subset(const UnionSet& a, const UnionSet& b);

// sigma-volume of the union. d = 2 runs a corner sweep in O(k log k);
// other dimensions use inclusion-exclusion, capped at 20 corners.
double union_measure(const UnionSet& u, const Measure& sigma);

// sigma(a \ u) = sigma(a u u) - sigma(u), never negative.
double increment_measure(const Rect& a, const UnionSet& u, const Measure& sigma);

UnionSet scale_action(const ScalingGroupElement& g, const UnionSet& u);
Rect scale_action(const ScalingGroupElement& g, const Rect& r);
// Measure multiplier of the scaling: eta(g) = prod_i g_i.
double eta(const ScalingGroupElement& g);

}  // namespace sibm
