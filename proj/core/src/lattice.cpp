#include "sibm/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "sibm/rng.hpp"

namespace sibm {

Subsemilattice intersection_closure(const std::vector<Rect>& sets) {
  if (sets.empty()) throw std::invalid_argument("intersection_closure: empty input");
  const std::size_t d = sets.front().dim();
  std::set<Corner> closed;
  for (const Rect& r : sets) {
    if (r.dim() != d) throw std::invalid_argument("intersection_closure: dimension mismatch");
    closed.insert(r.corner);
  }
  // Pairwise-min fixpoint; iterated pairwise minima generate all subset minima.
  bool grew = true;
  while (grew) {
    grew = false;
    std::vector<Corner> current(closed.begin(), closed.end());
    for (std::size_t i = 0; i < current.size(); ++i) {
      for (std::size_t j = i + 1; j < current.size(); ++j) {
        Corner m = corner_min(current[i], current[j]);
        if (closed.insert(m).second) grew = true;
      }
    }
  }
  Subsemilattice lat;
  lat.sets.reserve(closed.size());
  for (const Corner& c : closed) lat.sets.push_back(Rect{c});
  return lat;
}

namespace {

void check_closed(const Subsemilattice& lat) {
  std::set<Corner> members;
  for (const Rect& r : lat.sets) members.insert(r.corner);
  for (std::size_t i = 0; i < lat.sets.size(); ++i) {
    for (std::size_t j = i + 1; j < lat.sets.size(); ++j) {
      if (!members.count(corner_min(lat.sets[i].corner, lat.sets[j].corner))) {
        throw std::invalid_argument("lattice is not closed under intersection");
      }
    }
  }
}

}  // namespace

Numbering consistent_numbering(const Subsemilattice& lat, const Measure& sigma) {
  if (lat.sets.empty()) throw std::invalid_argument("consistent_numbering: empty lattice");
  for (std::size_t i = 0; i < lat.sets.size(); ++i) {
    for (std::size_t j = i + 1; j < lat.sets.size(); ++j) {
      if (lat.sets[i] == lat.sets[j]) {
        throw std::invalid_argument("consistent_numbering: duplicate sets");
      }
    }
  }
  check_closed(lat);
  Numbering num;
  num.order.resize(lat.sets.size());
  for (std::size_t i = 0; i < num.order.size(); ++i) num.order[i] = i;
  std::vector<double> measures(lat.sets.size());
  for (std::size_t i = 0; i < lat.sets.size(); ++i) measures[i] = sigma.rect(lat.sets[i]);
  std::sort(num.order.begin(), num.order.end(), [&](std::size_t a, std::size_t b) {
    if (measures[a] != measures[b]) return measures[a] < measures[b];
    return corner_lex_less(lat.sets[a].corner, lat.sets[b].corner);
  });
  return num;
}

CellDecomposition left_neighborhoods(const Subsemilattice& lat, const Numbering& num,
                                     const Measure& sigma) {
  if (num.order.size() != lat.sets.size()) {
    throw std::invalid_argument("left_neighborhoods: numbering size mismatch");
  }
  CellDecomposition dec;
  dec.cells.reserve(lat.sets.size());
  UnionSet covered;
  double covered_measure = 0;
  for (std::size_t i = 0; i < num.order.size(); ++i) {
    const Rect& base = lat.sets[num.order[i]];
    UnionSet next = union_insert(covered, base.corner);
    double next_measure = union_measure(next, sigma);
    dec.cells.push_back(Cell{i, IncrementSet{base, covered},
                             std::max(0.0, next_measure - covered_measure)});
    covered = std::move(next);
    covered_measure = next_measure;
  }
  dec.total = covered_measure;
  return dec;
}

void validate_flow(const Flow& flow) {
  if (flow.alphas.size() != flow.sets.size() || flow.alphas.size() != flow.clock.size()) {
    throw std::invalid_argument("flow: ragged grid");
  }
  for (std::size_t i = 1; i < flow.size(); ++i) {
    if (!(flow.alphas[i] > flow.alphas[i - 1])) {
      throw std::invalid_argument("flow: parameter grid not strictly increasing");
    }
    if (!(flow.clock[i] > flow.clock[i - 1])) {
      throw std::invalid_argument("flow: clock not strictly increasing");
    }
    if (flow.clock[i] - flow.clock[i - 1] > flow.mesh * (1 + 1e-9)) {
      throw std::invalid_argument("flow: clock step exceeds mesh");
    }
    if (!union_subset(flow.sets[i - 1], flow.sets[i]) ||
        union_subset(flow.sets[i], flow.sets[i - 1])) {
      throw std::invalid_argument("flow: sets not strictly nested");
    }
  }
}

namespace {

// Base corner for growing [0, c] over the union `prev`: the componentwise min
// of c with the corner of prev whose intersection with [0, c] has the largest
// measure. Growth from there keeps the clock strictly increasing.
Corner growth_base(const UnionSet& prev, const Corner& c, const Measure& sigma) {
  Corner best(c.size(), 0.0);
  double best_measure = -1;
  for (const Corner& y : prev.corners) {
    Corner m = corner_min(y, c);
    double v = sigma.rect(Rect{m});
    if (v > best_measure ||
        (v == best_measure && corner_lex_less(m, best))) {
      best = m;
      best_measure = v;
    }
  }
  return best;
}

struct FlowBuilder {
  const Measure& sigma;
  Flow flow;

  explicit FlowBuilder(const Measure& sigma_, double mesh, std::size_t dim)
      : sigma(sigma_) {
    flow.mesh = mesh;
    flow.alphas.push_back(0.0);
    flow.sets.push_back(union_of(zero_rect(dim)));
    flow.clock.push_back(0.0);
  }

  double theta() const { return flow.clock.back(); }

  // Grows the current union by [0, c] over the parameter window
  // (alpha_from, alpha_to], placing uniform clock substeps of size <= mesh.
  // Returns false when [0, c] adds no measure.
  bool grow_corner(const Corner& c, double alpha_from, double alpha_to) {
    const UnionSet& prev = flow.sets.back();
    if (union_contains(prev, Rect{c})) return false;
    UnionSet target = union_insert(prev, c);
    const double theta_from = theta();
    const double theta_to = union_measure(target, sigma);
    const double gain = theta_to - theta_from;
    if (!(gain > 0)) {
      throw std::invalid_argument(
          "flow interpolation stalled: degenerate growth corner");
    }
    const Corner base = growth_base(prev, c, sigma);
    const auto substeps =
        static_cast<std::size_t>(std::ceil(gain / flow.mesh - 1e-9));
    const std::size_t n = std::max<std::size_t>(1, substeps);
    const UnionSet prev_copy = prev;
    double u_lo = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      double alpha = alpha_from + (alpha_to - alpha_from) * static_cast<double>(j) /
                                      static_cast<double>(n);
      if (j == n) {
        flow.alphas.push_back(alpha_to);
        flow.sets.push_back(target);
        flow.clock.push_back(theta_to);
        break;
      }
      const double want = theta_from + gain * static_cast<double>(j) / static_cast<double>(n);
      // The clock is continuous and strictly increasing in u, so bisection on
      // u in [u_lo, 1] finds the substep corner.
      double lo = u_lo, hi = 1;
      Corner x(c.size());
      for (int it = 0; it < 100; ++it) {
        double mid = (lo + hi) / 2;
        for (std::size_t m = 0; m < c.size(); ++m) {
          x[m] = base[m] + mid * (c[m] - base[m]);
        }
        double v = union_measure(union_insert(prev_copy, x), sigma);
        if (v < want) {
          lo = mid;
        } else {
          hi = mid;
        }
        if (hi - lo < 1e-15) break;
      }
      double u = (lo + hi) / 2;
      for (std::size_t m = 0; m < c.size(); ++m) x[m] = base[m] + u * (c[m] - base[m]);
      UnionSet step_set = union_insert(prev_copy, x);
      double step_theta = union_measure(step_set, sigma);
      if (!(step_theta > theta())) {
        throw std::invalid_argument("flow interpolation stalled: zero clock step");
      }
      flow.alphas.push_back(alpha);
      flow.sets.push_back(std::move(step_set));
      flow.clock.push_back(step_theta);
      u_lo = u;
    }
    return true;
  }
};

}  // namespace

Flow build_flow(const Subsemilattice& lat, const Numbering& num, const Measure& sigma,
                double mesh) {
  if (!(mesh > 0)) throw std::invalid_argument("build_flow: mesh must be positive");
  if (num.order.size() != lat.sets.size()) {
    throw std::invalid_argument("build_flow: numbering size mismatch");
  }
  const std::size_t dim = lat.sets.front().dim();
  FlowBuilder builder(sigma, mesh, dim);
  for (std::size_t i = 0; i < num.order.size(); ++i) {
    const Corner& c = lat.sets[num.order[i]].corner;
    builder.grow_corner(c, static_cast<double>(i), static_cast<double>(i + 1));
    builder.flow.anchor_indices.push_back(builder.flow.size() - 1);
  }
  validate_flow(builder.flow);
  return builder.flow;
}

Flow extend_sequence(const std::vector<UnionSet>& anchors, const Measure& sigma,
                     double mesh) {
  if (!(mesh > 0)) throw std::invalid_argument("extend_sequence: mesh must be positive");
  if (anchors.empty()) throw std::invalid_argument("extend_sequence: no anchors");
  for (std::size_t i = 1; i < anchors.size(); ++i) {
    if (!union_subset(anchors[i - 1], anchors[i]) ||
        union_subset(anchors[i], anchors[i - 1])) {
      throw std::invalid_argument("extend_sequence: anchors not strictly increasing");
    }
  }
  const std::size_t dim = anchors.front().dim();
  FlowBuilder builder(sigma, mesh, dim);
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    // Corners of the target not yet covered, added one sub-segment each.
    std::vector<Corner> missing;
    for (const Corner& c : anchors[i].corners) {
      if (!union_contains(builder.flow.sets.back(), Rect{c})) missing.push_back(c);
    }
    if (missing.empty() && i == 0) {
      throw std::invalid_argument("extend_sequence: first anchor is the minimal set");
    }
    const double from = static_cast<double>(i);
    const double to = static_cast<double>(i + 1);
    const auto m = static_cast<double>(missing.size());
    for (std::size_t j = 0; j < missing.size(); ++j) {
      builder.grow_corner(missing[j], from + static_cast<double>(j) / m * (to - from),
                          from + static_cast<double>(j + 1) / m * (to - from));
    }
    if (!(builder.flow.sets.back() == anchors[i])) {
      throw std::invalid_argument("extend_sequence: anchor not reproduced");
    }
    builder.flow.anchor_indices.push_back(builder.flow.size() - 1);
  }
  validate_flow(builder.flow);
  return builder.flow;
}

std::vector<std::pair<double, double>> clock(const Flow& flow) {
  std::vector<std::pair<double, double>> out;
  out.reserve(flow.size());
  for (std::size_t i = 0; i < flow.size(); ++i) {
    out.emplace_back(flow.alphas[i], flow.clock[i]);
  }
  return out;
}

Flow corner_flow(const Corner& corner, const Measure& sigma, double mesh) {
  Subsemilattice lat = intersection_closure({Rect{corner}});
  Numbering num = consistent_numbering(lat, sigma);
  return build_flow(lat, num, sigma, mesh);
}

Subsemilattice random_lattice(std::uint64_t seed, std::size_t max_sets, double domain,
                              std::size_t dim) {
  if (max_sets == 0) throw std::invalid_argument("random_lattice: max_sets must be >= 1");
  const rng::Key root = rng::Key(seed).fork(rng::kLatticeStream);
  for (std::uint64_t attempt = 0;; ++attempt) {
    rng::Key key = root.fork(attempt);
    const std::size_t want = 2 + static_cast<std::size_t>(rng::uniform(key.fork(0)) * 4.0);
    std::vector<Rect> seeds;
    for (std::size_t i = 0; i < want; ++i) {
      Corner c(dim);
      for (std::size_t m = 0; m < dim; ++m) {
        double u = rng::uniform(key.fork(1 + i * dim + m));
        c[m] = domain * (0.1 + 0.9 * u);
      }
      seeds.push_back(Rect{std::move(c)});
    }
    Subsemilattice lat = intersection_closure(seeds);
    if (lat.size() <= max_sets) return lat;
  }
}

}  // namespace sibm
