// SPDX-License-Identifier: Apache-2.0
#include "wet/clustering.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace wet {

std::vector<int> Clustering::members(int cluster) const {
  std::vector<int> out;
  for (std::size_t i = 0; i < assignments.size(); ++i)
    if (assignments[i] == cluster) out.push_back(er_ids[i]);
  return out;
}

MatrixR embed_points(const std::vector<PhasePoint>& points, PhaseMetric metric) {
  if (points.empty()) throw UsageError("no points to cluster");
  const Eigen::Index d = points.front().coords.size();
  const Eigen::Index width = metric == PhaseMetric::unit_circle ? 2 * d : d;
  MatrixR x(static_cast<Eigen::Index>(points.size()), width);
  for (std::size_t i = 0; i < points.size(); ++i) {
    const VectorR& c = points[i].coords;
    if (c.size() != d) throw UsageError("phase points differ in dimension");
    const auto row = static_cast<Eigen::Index>(i);
    if (metric == PhaseMetric::euclidean) {
      x.row(row) = c.transpose();
    } else {
      for (Eigen::Index j = 0; j < d; ++j) {
        x(row, 2 * j) = std::cos(c[j]);
        x(row, 2 * j + 1) = std::sin(c[j]);
      }
    }
  }
  return x;
}

namespace {

struct LloydState {
  MatrixR centroids;
  std::vector<int> assign;
};

int nearest(const MatrixR& centroids, const Eigen::Ref<const VectorR>& x, real* dist) {
  int best = 0;
  real bd = std::numeric_limits<real>::infinity();
  for (Eigen::Index q = 0; q < centroids.rows(); ++q) {
    const real d = (centroids.row(q).transpose() - x).squaredNorm();
    if (d < bd) {
      bd = d;
      best = static_cast<int>(q);
    }
  }
  if (dist) *dist = bd;
  return best;
}

// Moves the farthest point of a multi-member cluster into each empty cluster.
void reseed_empty(const MatrixR& x, LloydState& s) {
  const Eigen::Index q_count = s.centroids.rows();
  std::vector<int> sizes(q_count, 0);
  for (int a : s.assign) ++sizes[a];
  for (Eigen::Index q = 0; q < q_count; ++q) {
    if (sizes[q] > 0) continue;
    Eigen::Index far = -1;
    real fd = -1;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const int a = s.assign[i];
      if (sizes[a] < 2) continue;
      const real d = (x.row(i) - s.centroids.row(a)).squaredNorm();
      if (d > fd) {
        fd = d;
        far = i;
      }
    }
    if (far < 0) break;  // cannot happen while Q <= N
    --sizes[s.assign[far]];
    s.assign[far] = static_cast<int>(q);
    s.centroids.row(q) = x.row(far);
    sizes[q] = 1;
  }
}

void update_centroids(const MatrixR& x, LloydState& s) {
  const Eigen::Index q_count = s.centroids.rows();
  MatrixR sum = MatrixR::Zero(q_count, x.cols());
  std::vector<int> sizes(q_count, 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    sum.row(s.assign[i]) += x.row(i);
    ++sizes[s.assign[i]];
  }
  for (Eigen::Index q = 0; q < q_count; ++q)
    if (sizes[q] > 0) s.centroids.row(q) = sum.row(q) / sizes[q];
}

real objective(const MatrixR& x, const LloydState& s, std::vector<real>* scatter) {
  std::vector<real> sc(s.centroids.rows(), 0);
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    sc[s.assign[i]] += (x.row(i) - s.centroids.row(s.assign[i])).squaredNorm();
  const real total = std::accumulate(sc.begin(), sc.end(), real(0));
  if (scatter) *scatter = std::move(sc);
  return total;
}

}  // namespace

Clustering lloyd_run(const std::vector<PhasePoint>& points, const MatrixR& initial,
                     const ClusterOptions& options) {
  const MatrixR x = embed_points(points, options.metric);
  const auto n = x.rows();
  if (initial.cols() != x.cols()) throw UsageError("initial centroids have the wrong dimension");
  if (initial.rows() < 1 || initial.rows() > n)
    throw ConfigError("number of clusters must lie in [1, N]");

  LloydState s{initial, std::vector<int>(n, -1)};
  Clustering out;
  out.metric = options.metric;
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      const int a = nearest(s.centroids, x.row(i).transpose(), nullptr);
      if (a != s.assign[i]) {
        s.assign[i] = a;
        changed = true;
      }
    }
    const std::vector<int> before = s.assign;
    reseed_empty(x, s);
    changed = changed || before != s.assign;
    if (!changed && it > 0) {
      out.converged = true;
      break;
    }
    update_centroids(x, s);
    out.trace.push_back(objective(x, s, nullptr));
  }
  out.iterations = it;
  out.objective = objective(x, s, &out.scatter);
  out.assignments = s.assign;
  out.sizes.assign(s.centroids.rows(), 0);
  for (int a : s.assign) ++out.sizes[a];
  for (const auto& p : points) out.er_ids.push_back(p.er_id);

  const Eigen::Index d = points.front().coords.size();
  for (Eigen::Index q = 0; q < s.centroids.rows(); ++q) {
    VectorR c = s.centroids.row(q).transpose();
    VectorR ph(d);
    if (options.metric == PhaseMetric::euclidean) {
      ph = c;
    } else {
      for (Eigen::Index j = 0; j < d; ++j) ph[j] = wrap_phase(std::atan2(c[2 * j + 1], c[2 * j]));
    }
    out.centroids.push_back(std::move(c));
    out.centroid_phases.push_back(std::move(ph));
  }
  return out;
}

Clustering lloyd_cluster(const std::vector<PhasePoint>& points, const ClusterOptions& options, Rng& rng) {
  const int n = static_cast<int>(points.size());
  const int q = options.num_clusters;
  if (q < 1 || q > n)
    throw ConfigError("number of clusters must lie in [1, N]; got Q=" + std::to_string(q) +
                      " N=" + std::to_string(n));
  if (options.restarts < 1) throw ConfigError("restarts must be >= 1");
  const MatrixR x = embed_points(points, options.metric);

  Clustering best;
  bool have = false;
  std::vector<int> idx(n);
  for (int r = 0; r < options.restarts; ++r) {
    // partial Fisher-Yates: the first q entries are a uniform sample without replacement
    std::iota(idx.begin(), idx.end(), 0);
    for (int j = 0; j < q; ++j) {
      std::uniform_int_distribution<int> pick(j, n - 1);
      std::swap(idx[j], idx[pick(rng)]);
    }
    MatrixR init(q, x.cols());
    for (int j = 0; j < q; ++j) init.row(j) = x.row(idx[j]);
    Clustering c = lloyd_run(points, init, options);
    if (!have || c.objective < best.objective) {
      best = std::move(c);
      have = true;
    }
  }
  return best;
}

int select_cluster(const Clustering& clustering, ScatterMode mode) {
  int best = 0;
  real bv = std::numeric_limits<real>::infinity();
  for (int q = 0; q < clustering.num_clusters(); ++q) {
    real v = clustering.scatter[q];
    if (mode == ScatterMode::per_member && clustering.sizes[q] > 0) v /= clustering.sizes[q];
    if (v < bv) {
      bv = v;
      best = q;
    }
  }
  return best;
}

}  // namespace wet
