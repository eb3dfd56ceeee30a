#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "sibm/geometry.hpp"

namespace sibm {

// Finite family of anchored rectangles closed under pairwise intersection.
// Construct through intersection_closure.
struct Subsemilattice {
  std::vector<Rect> sets;

  std::size_t size() const { return sets.size(); }
};

// Smallest intersection-closed superset of the input. For anchored boxes this
// is closure under componentwise min, computed to a fixpoint; the componentwise
// minimum of all corners ends up included.
Subsemilattice intersection_closure(const std::vector<Rect>& sets);

// Permutation of lattice indices; order[0] is the minimal element, and every
// proper subset of a member appears before it.
struct Numbering {
  std::vector<std::size_t> order;
};

// Sorts by (measure, lexicographic corner). Strict inclusion forces strictly
// smaller measure, so the resulting order respects the strong past.
Numbering consistent_numbering(const Subsemilattice& lat, const Measure& sigma);

// One cell of the decomposition: the i-th member minus everything numbered
// before it, with its measure.
struct Cell {
  std::size_t index;
  IncrementSet region;
  double measure;
};

struct CellDecomposition {
  std::vector<Cell> cells;
  double total;  // measure of the union of all members
};

// Left-neighborhood cells of a numbered lattice. Measures telescope:
// sum of cell measures equals the measure of the full union.
CellDecomposition left_neighborhoods(const Subsemilattice& lat, const Numbering& num,
                                     const Measure& sigma);

// A discretized strictly increasing continuous sequence alpha -> A_alpha,
// with its measure clock theta(alpha) = sigma(A_alpha). Consecutive sets are
// strictly nested and consecutive clock values differ by at most mesh.
struct Flow {
  std::vector<double> alphas;
  std::vector<UnionSet> sets;
  std::vector<double> clock;
  double mesh = 0;
  // Grid indices of the anchor sets the construction was asked to pass
  // through (prefix unions for build_flow, the given sets for
  // extend_sequence).
  std::vector<std::size_t> anchor_indices;

  std::size_t size() const { return alphas.size(); }
};

// Throws if the flow violates strict nesting, clock monotonicity or the mesh
// bound.
void validate_flow(const Flow& flow);

// Flow from the minimal set through the prefix unions f(i) of the numbered
// lattice. Between anchors, the corner of the incoming set grows linearly
// from a base corner inside the previous union; grid points are placed at
// uniform clock substeps of size at most mesh.
Flow build_flow(const Subsemilattice& lat, const Numbering& num, const Measure& sigma,
                double mesh);

// Flow through the given strictly increasing union sets, anchored at integer
// parameter values 1..n, built by the same corner-growing interpolation.
Flow extend_sequence(const std::vector<UnionSet>& anchors, const Measure& sigma,
                     double mesh);

// The (alpha, theta) pairs of the flow.
std::vector<std::pair<double, double>> clock(const Flow& flow);

// Flow from the minimal set to the single box [0, corner].
Flow corner_flow(const Corner& corner, const Measure& sigma, double mesh);

// Random intersection-closed lattice with at most max_sets members, corners
// drawn inside (0.1 * domain, domain]^dim. Deterministic in the seed.
Subsemilattice random_lattice(std::uint64_t seed, std::size_t max_sets, double domain,
                              std::size_t dim = 2);

}  // namespace sibm
