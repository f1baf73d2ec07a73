// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "wet/types.hpp"

namespace wet {

/// Estimated relative-phase vector of one ER.
struct PhasePoint {
  int er_id = 0;
  VectorR coords;  // K-1 phases in [0, 2pi)
};

enum class PhaseMetric {
  euclidean,    // raw phase values as coordinates
  unit_circle,  // each phase mapped to (cos, sin)
};

enum class ScatterMode {
  total,       // sum of squared distances
  per_member,  // divided by cluster size
};

struct ClusterOptions {
  int num_clusters = 1;
  int restarts = 10;
  int max_iterations = 100;
  PhaseMetric metric = PhaseMetric::euclidean;
};

/// Partition of ERs into Q groups.
///
/// Cluster indices are 0-based. `centroids` live in the clustering space (the
/// embedded space for unit_circle); `centroid_phases` are the centroids read back
/// as phases. `trace` holds the objective after every Lloyd iteration of the
/// returned restart.
struct Clustering {
  std::vector<int> assignments;  // by position in the input
  std::vector<int> er_ids;
  std::vector<VectorR> centroids;
  std::vector<VectorR> centroid_phases;
  std::vector<real> scatter;
  std::vector<int> sizes;
  real objective = 0;
  int iterations = 0;
  bool converged = false;
  PhaseMetric metric = PhaseMetric::euclidean;
  std::vector<real> trace;

  int num_clusters() const { return static_cast<int>(centroids.size()); }
  std::vector<int> members(int cluster) const;
};

/// Coordinates actually clustered: the phases, or (cos, sin) pairs.
MatrixR embed_points(const std::vector<PhasePoint>& points, PhaseMetric metric);

/// One Lloyd run from the given initial centroids (rows of `initial`).
///
/// Empty clusters are re-seeded with the point farthest from its own centroid.
Clustering lloyd_run(const std::vector<PhasePoint>& points, const MatrixR& initial,
                     const ClusterOptions& options);

/// Best of `options.restarts` Lloyd runs, each seeded with Q distinct random points.
/// Throws ConfigError unless 1 <= Q <= N.
Clustering lloyd_cluster(const std::vector<PhasePoint>& points, const ClusterOptions& options, Rng& rng);

/// Cluster with the smallest scatter; ties go to the lowest index.
int select_cluster(const Clustering& clustering, ScatterMode mode = ScatterMode::total);

}  // namespace wet
