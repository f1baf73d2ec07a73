// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "wet/clustering.hpp"

using namespace wet;

namespace {

std::vector<PhasePoint> scalar_points(std::initializer_list<real> xs) {
  std::vector<PhasePoint> pts;
  int id = 0;
  for (real x : xs) pts.push_back({id++, (VectorR(1) << x).finished()});
  return pts;
}

std::vector<PhasePoint> random_points(Rng& rng, int n, int d) {
  std::uniform_real_distribution<real> u(0, kTwoPi);
  std::vector<PhasePoint> pts;
  for (int i = 0; i < n; ++i) {
    VectorR c(d);
    for (auto& x : c) x = u(rng);
    pts.push_back({i, c});
  }
  return pts;
}

// Exhaustive optimum over all 2-partitions (both parts nonempty).
real brute_force_two_means(const MatrixR& x) {
  const int n = static_cast<int>(x.rows());
  real best = std::numeric_limits<real>::infinity();
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    real total = 0;
    for (int part = 0; part < 2; ++part) {
      VectorR mean = VectorR::Zero(x.cols());
      int cnt = 0;
      for (int i = 0; i < n; ++i)
        if (((mask >> i) & 1u) == static_cast<unsigned>(part)) {
          mean += x.row(i).transpose();
          ++cnt;
        }
      mean /= cnt;
      for (int i = 0; i < n; ++i)
        if (((mask >> i) & 1u) == static_cast<unsigned>(part)) total += (x.row(i).transpose() - mean).squaredNorm();
    }
    best = std::min(best, total);
  }
  return best;
}

}  // namespace

TEST_CASE("one cluster per point has zero objective") {
  Rng rng(2);
  const auto pts = random_points(rng, 9, 3);
  ClusterOptions opt;
  opt.num_clusters = 9;
  const auto c = lloyd_cluster(pts, opt, rng);
  CHECK(c.objective < 1e-20);
  for (int s : c.sizes) CHECK(s == 1);
}

TEST_CASE("single cluster centroid is the mean") {
  Rng rng(3);
  const auto pts = random_points(rng, 12, 2);
  ClusterOptions opt;
  opt.num_clusters = 1;
  const auto c = lloyd_cluster(pts, opt, rng);
  VectorR mean = VectorR::Zero(2);
  for (const auto& p : pts) mean += p.coords;
  mean /= 12;
  CHECK((c.centroids[0] - mean).norm() < 1e-12);
  real obj = 0;
  for (const auto& p : pts) obj += (p.coords - mean).squaredNorm();
  CHECK(c.objective == doctest::Approx(obj));
  CHECK(c.members(0).size() == 12);
}

TEST_CASE("four scalar points into two clusters") {
  const auto pts = scalar_points({0.1, 0.2, 2.0, 2.1});
  ClusterOptions opt;
  opt.num_clusters = 2;
  Rng rng(4);
  const auto c = lloyd_cluster(pts, opt, rng);
  CHECK(c.objective == doctest::Approx(0.01));
  CHECK(c.objective == doctest::Approx(brute_force_two_means(embed_points(pts, PhaseMetric::euclidean))));
  CHECK(c.assignments[0] == c.assignments[1]);
  CHECK(c.assignments[2] == c.assignments[3]);
  CHECK(c.assignments[0] != c.assignments[2]);
}

TEST_CASE("restarts reach the brute-force optimum on small sets") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = random_points(rng, 8, 2);
    ClusterOptions opt;
    opt.num_clusters = 2;
    opt.restarts = 20;
    const auto c = lloyd_cluster(pts, opt, rng);
    const real oracle = brute_force_two_means(embed_points(pts, PhaseMetric::euclidean));
    CHECK(c.objective >= oracle * (1 - 1e-12));
    CHECK(c.objective == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("objective trace is non-increasing and the result is a fixed point") {
  Rng rng(6);
  for (auto metric : {PhaseMetric::euclidean, PhaseMetric::unit_circle}) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto pts = random_points(rng, 40, 3);
      ClusterOptions opt;
      opt.num_clusters = 1 + trial % 6;
      opt.metric = metric;
      opt.restarts = 3;
      const auto c = lloyd_cluster(pts, opt, rng);
      for (std::size_t i = 1; i < c.trace.size(); ++i) CHECK(c.trace[i] <= c.trace[i - 1] + 1e-12);
      CHECK(c.converged);
      // every point sits with its nearest centroid, and centroids are member means
      const MatrixR x = embed_points(pts, metric);
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const real own = (x.row(i).transpose() - c.centroids[c.assignments[i]]).squaredNorm();
        for (const auto& cen : c.centroids) CHECK(own <= (x.row(i).transpose() - cen).squaredNorm() + 1e-12);
      }
      for (int q = 0; q < c.num_clusters(); ++q) {
        CHECK(c.sizes[q] > 0);
        VectorR mean = VectorR::Zero(x.cols());
        for (Eigen::Index i = 0; i < x.rows(); ++i)
          if (c.assignments[i] == q) mean += x.row(i).transpose();
        CHECK((mean / c.sizes[q] - c.centroids[q]).norm() < 1e-12);
      }
      real total = 0;
      for (real s : c.scatter) total += s;
      CHECK(total == doctest::Approx(c.objective));
    }
  }
}

TEST_CASE("invalid cluster counts") {
  Rng rng(7);
  const auto pts = random_points(rng, 3, 2);
  ClusterOptions opt;
  opt.num_clusters = 4;
  CHECK_THROWS_AS(lloyd_cluster(pts, opt, rng), ConfigError);
  opt.num_clusters = 0;
  CHECK_THROWS_AS(lloyd_cluster(pts, opt, rng), ConfigError);
}

TEST_CASE("empty clusters are reseeded") {
  const auto pts = scalar_points({0.0, 0.1, 0.2, 5.0});
  ClusterOptions opt;
  opt.num_clusters = 2;
  // both initial centroids far to the left: the second one starts empty
  const MatrixR init = (MatrixR(2, 1) << -10, -20).finished();
  const auto c = lloyd_run(pts, init, opt);
  CHECK(c.sizes[0] > 0);
  CHECK(c.sizes[1] > 0);
}

TEST_CASE("unit-circle metric treats phases near 0 and 2pi as neighbours") {
  const auto pts = scalar_points({0.05, kTwoPi - 0.05, kPi - 0.05, kPi + 0.05});
  ClusterOptions opt;
  opt.num_clusters = 2;
  opt.metric = PhaseMetric::unit_circle;
  Rng rng(9);
  const auto c = lloyd_cluster(pts, opt, rng);
  CHECK(c.assignments[0] == c.assignments[1]);
  CHECK(c.assignments[2] == c.assignments[3]);
  const int q0 = c.assignments[0];
  CHECK(circular_distance(c.centroid_phases[q0][0], 0) < 1e-12);

  const MatrixR e = embed_points(pts, PhaseMetric::unit_circle);
  CHECK(e.cols() == 2);
  CHECK(e(0, 0) == doctest::Approx(std::cos(0.05)));
}

TEST_CASE("cluster selection") {
  Clustering c;
  c.centroids = {VectorR::Zero(1), VectorR::Zero(1)};
  c.scatter = {0.005, 0.045};
  c.sizes = {2, 2};
  CHECK(select_cluster(c) == 0);
  c.scatter = {0.02, 0.02};
  CHECK(select_cluster(c) == 0);
  c.scatter = {0.03, 0.02};
  CHECK(select_cluster(c) == 1);
  // per-member scatter prefers the larger, looser group
  c.scatter = {0.03, 0.02};
  c.sizes = {6, 2};
  CHECK(select_cluster(c, ScatterMode::total) == 1);
  CHECK(select_cluster(c, ScatterMode::per_member) == 0);
}

TEST_CASE("scalar example end to end selection") {
  const auto pts = scalar_points({0.1, 0.2, 2.0, 2.3});
  ClusterOptions opt;
  opt.num_clusters = 2;
  Rng rng(10);
  const auto c = lloyd_cluster(pts, opt, rng);
  const int q = select_cluster(c);
  const auto m = c.members(q);
  REQUIRE(m.size() == 2);
  CHECK(m[0] == 0);
  CHECK(m[1] == 1);
}
