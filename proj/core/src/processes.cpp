#include "sibm/processes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sibm/parallel.hpp"

namespace sibm {

ProcessModel ProcessModel::centered_poisson(double lambda) {
  if (!(lambda > 0)) throw std::invalid_argument("centered_poisson: lambda must be positive");
  return {ModelKind::CenteredPoisson, lambda};
}

const char* ProcessModel::name() const {
  switch (kind) {
    case ModelKind::SIBM: return "sibm";
    case ModelKind::CenteredPoisson: return "poisson";
    case ModelKind::CommonFactor: return "common";
    case ModelKind::VarianceSkew: return "varskew";
  }
  return "?";
}

namespace {

double step_value(const ProcessModel& model, rng::Key step_key, double common_z,
                  double dtheta) {
  switch (model.kind) {
    case ModelKind::SIBM:
      return rng::normal(step_key) * std::sqrt(dtheta);
    case ModelKind::CenteredPoisson: {
      double mean = model.lambda * dtheta;
      return static_cast<double>(rng::poisson(step_key, mean)) - mean;
    }
    case ModelKind::CommonFactor:
      return common_z * dtheta;
    case ModelKind::VarianceSkew:
      return rng::normal(step_key) * dtheta;
  }
  return 0;
}

}  // namespace

PathSample sample_path(const ProcessModel& model, const Flow& flow, std::uint64_t seed) {
  PathSample path;
  path.clock = flow.clock;
  if (flow.size() == 0) return path;
  const rng::Key base = rng::Key(seed).fork(rng::kPathStream);
  const double common_z = model.kind == ModelKind::CommonFactor
                              ? rng::normal(rng::Key(seed).fork(rng::kCommonFactorStream))
                              : 0.0;
  path.increments.resize(flow.size() - 1);
  for (std::size_t i = 0; i + 1 < flow.size(); ++i) {
    double dtheta = flow.clock[i + 1] - flow.clock[i];
    path.increments[i] = step_value(model, base.fork(i), common_z, dtheta);
  }
  path.cumulative.resize(flow.size());
  path.cumulative[0] = 0;
  for (std::size_t i = 0; i < path.increments.size(); ++i) {
    path.cumulative[i + 1] = path.cumulative[i] + path.increments[i];
  }
  return path;
}

PathSample sample_bm_path(const Flow& flow, std::uint64_t seed) {
  return sample_path(ProcessModel::sibm(), flow, seed);
}

CellSampler::CellSampler(const ProcessModel& model, int n, double t_max,
                         const Measure& sigma, std::uint64_t seed)
    : model_(model), n_(n), dx_(t_max / n), key_(rng::Key(seed).fork(rng::kFieldStream)) {
  if (n < 1) throw std::invalid_argument("CellSampler: grid size must be >= 1");
  if (!(t_max > 0)) throw std::invalid_argument("CellSampler: t_max must be positive");
  if (sigma.dim() != 2) throw std::invalid_argument("CellSampler: measure must be 2-dimensional");
  if (model.kind == ModelKind::CommonFactor) {
    common_z_ = rng::normal(rng::Key(seed).fork(rng::kCommonFactorStream));
  }
  for (int axis = 0; axis < 2; ++axis) {
    ax_[axis].resize(static_cast<std::size_t>(n));
    double prev = 0;
    for (int i = 0; i < n; ++i) {
      double w = sigma.axis_cumulative(axis, dx_ * (i + 1));
      ax_[axis][static_cast<std::size_t>(i)] = w - prev;
      prev = w;
    }
  }
}

std::int64_t CellSampler::value_q(int ix, int iy) const {
  const double m = cell_measure(ix, iy);
  const rng::Key k = key_.fork(static_cast<std::uint64_t>(ix)).fork(static_cast<std::uint64_t>(iy));
  double v = 0;
  switch (model_.kind) {
    case ModelKind::SIBM:
      v = rng::normal(k) * std::sqrt(m);
      break;
    case ModelKind::CenteredPoisson: {
      double mean = model_.lambda * m;
      v = static_cast<double>(rng::poisson(k, mean)) - mean;
      break;
    }
    case ModelKind::CommonFactor:
      v = common_z_ * m;
      break;
    case ModelKind::VarianceSkew:
      v = rng::normal(k) * m;
      break;
  }
  return std::llround(v / quantum());
}

FieldSample::FieldSample(const ProcessModel& model, int n, double t_max,
                         const Measure& sigma, std::uint64_t seed)
    : model_(model),
      n_(n),
      t_max_(t_max),
      dx_(t_max / n),
      sigma_(sigma),
      seed_(seed) {
  CellSampler sampler(model, n, t_max, sigma, seed);
  cells_.resize(static_cast<std::size_t>(n) * n);
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t iy) {
    for (int ix = 0; ix < n; ++ix) {
      cells_[iy * n + ix] = sampler.value_q(ix, static_cast<int>(iy));
    }
  });
  prefix_.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0);
  for (int iy = 1; iy <= n; ++iy) {
    std::int64_t row = 0;
    for (int ix = 1; ix <= n; ++ix) {
      row += cell_q(ix - 1, iy - 1);
      prefix_[static_cast<std::size_t>(iy) * (n + 1) + ix] =
          prefix_[static_cast<std::size_t>(iy - 1) * (n + 1) + ix] + row;
    }
  }
}

FieldSample sample_field(const ProcessModel& model, int n, double t_max,
                         const Measure& sigma, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("sample_field: grid size must be >= 2");
  return FieldSample(model, n, t_max, sigma, seed);
}

int grid_snap(double x, double dx, int n) {
  double r = x / dx;
  if (r > static_cast<double>(n) + 1e-6) {
    throw std::invalid_argument("field evaluation: set exceeds the sampled domain");
  }
  if (r < 0) throw std::invalid_argument("field evaluation: negative coordinate");
  int i = static_cast<int>(std::floor(r + 1e-9));
  return std::min(i, n);
}

double snapped_union_measure(const UnionSet& u, int n, double t_max, const Measure& sigma) {
  const double dx = t_max / n;
  std::vector<Corner> corners;
  corners.reserve(u.corners.size());
  for (const Corner& c : u.corners) {
    if (c.size() != 2) {
      throw std::invalid_argument("snapped_union_measure: corners must be 2-dimensional");
    }
    corners.push_back(Corner{grid_snap(c[0], dx, n) * dx, grid_snap(c[1], dx, n) * dx});
  }
  return union_measure(union_canonicalize(std::move(corners)), sigma);
}

int FieldSample::snap_index(double x) const { return grid_snap(x, dx_, n_); }

std::vector<std::pair<int, int>> FieldSample::snap_union(const UnionSet& u) const {
  std::vector<std::pair<int, int>> snapped;
  snapped.reserve(u.corners.size());
  for (const Corner& c : u.corners) {
    if (c.size() != 2) {
      throw std::invalid_argument("field evaluation: corners must be 2-dimensional");
    }
    snapped.emplace_back(snap_index(c[0]), snap_index(c[1]));
  }
  std::sort(snapped.begin(), snapped.end());
  // Re-canonicalize after snapping: keep the staircase antichain.
  std::vector<std::pair<int, int>> stairs;
  int best_iy = -1;
  for (auto it = snapped.rbegin(); it != snapped.rend(); ++it) {
    if (it->second > best_iy) {
      stairs.push_back(*it);
      best_iy = it->second;
    }
  }
  std::reverse(stairs.begin(), stairs.end());
  return stairs;
}

double FieldSample::snapped_measure(const UnionSet& u) const {
  return snapped_union_measure(u, n_, t_max_, sigma_);
}

namespace {

std::int64_t staircase_sum_q(const FieldSample& field,
                             const std::vector<std::pair<int, int>>& stairs) {
  std::int64_t total = 0;
  int prev_ix = 0;
  for (auto [ix, iy] : stairs) {
    total += field.prefix_q(ix, iy) - field.prefix_q(prev_ix, iy);
    prev_ix = ix;
  }
  return total;
}

}  // namespace

double evaluate_set(const FieldSample& field, const UnionSet& u) {
  if (u.empty()) return 0;
  return field.quantum() *
         static_cast<double>(staircase_sum_q(field, field.snap_union(u)));
}

double evaluate_set(const FieldSample& field, const Rect& r) {
  return evaluate_set(field, union_of(r));
}

double evaluate_increment(const FieldSample& field, const Rect& base,
                          const std::vector<Rect>& exclusions) {
  if (exclusions.size() > 12) {
    throw std::invalid_argument("evaluate_increment: more than 12 exclusions");
  }
  if (base.dim() != 2) {
    throw std::invalid_argument("evaluate_increment: base must be 2-dimensional");
  }
  const int bx = field.snap_index(base.corner[0]);
  const int by = field.snap_index(base.corner[1]);
  std::vector<std::pair<int, int>> ex;
  ex.reserve(exclusions.size());
  for (const Rect& r : exclusions) {
    if (r.dim() != 2) {
      throw std::invalid_argument("evaluate_increment: exclusions must be 2-dimensional");
    }
    ex.emplace_back(field.snap_index(r.corner[0]), field.snap_index(r.corner[1]));
  }
  std::int64_t total = 0;
  const std::uint32_t subsets = 1u << ex.size();
  for (std::uint32_t mask = 0; mask < subsets; ++mask) {
    int ix = bx, iy = by;
    for (std::size_t i = 0; i < ex.size(); ++i) {
      if (mask & (1u << i)) {
        ix = std::min(ix, ex[i].first);
        iy = std::min(iy, ex[i].second);
      }
    }
    std::int64_t v = field.prefix_q(ix, iy);
    total += (__builtin_popcount(mask) % 2 == 0) ? v : -v;
  }
  return field.quantum() * static_cast<double>(total);
}

PathSample project_path(const FieldSample& field, const Flow& flow) {
  PathSample path;
  path.clock.resize(flow.size());
  path.cumulative.resize(flow.size());
  std::vector<std::int64_t> cum_q(flow.size());
  for (std::size_t i = 0; i < flow.size(); ++i) {
    auto stairs = field.snap_union(flow.sets[i]);
    cum_q[i] = staircase_sum_q(field, stairs);
    path.clock[i] = field.snapped_measure(flow.sets[i]);
    path.cumulative[i] = field.quantum() * static_cast<double>(cum_q[i]);
  }
  if (!flow.sets.empty()) {
    path.increments.resize(flow.size() - 1);
    for (std::size_t i = 0; i + 1 < flow.size(); ++i) {
      path.increments[i] =
          field.quantum() * static_cast<double>(cum_q[i + 1] - cum_q[i]);
    }
  }
  return path;
}

}  // namespace sibm
