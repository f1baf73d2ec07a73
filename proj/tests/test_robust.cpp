// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "wet/robust.hpp"

using namespace wet;

namespace {

VectorC random_vector(Rng& rng, int k, real scale = 1) {
  std::normal_distribution<real> n(0, 1);
  VectorC v(k);
  for (auto& x : v) x = complex(n(rng), n(rng));
  return v * (scale / v.norm());
}

MatrixC random_psd(Rng& rng, int k, real trace, int rank) {
  MatrixC c = MatrixC::Zero(k, k);
  for (int r = 0; r < rank; ++r) {
    const VectorC v = random_vector(rng, k);
    c += v * v.adjoint();
  }
  return c * (trace / c.trace().real());
}

real quad(const MatrixC& c, const VectorC& x) { return x.dot(c * x).real(); }

// Accelerated projected gradient on min (h+eta)^H C (h+eta), |eta| <= eps.
real pgd_worst_case(const MatrixC& c, const VectorC& h, real eps, const VectorC& start, int steps = 6000) {
  const real lmax = Eigen::SelfAdjointEigenSolver<MatrixC>(c).eigenvalues().maxCoeff();
  if (lmax <= 0) return 0;
  auto project = [eps](VectorC v) {
    const real n = v.norm();
    return n > eps ? VectorC(v * (eps / n)) : v;
  };
  VectorC x = project(start), y = x;
  real tk = 1;
  for (int i = 0; i < steps; ++i) {
    const VectorC next = project(y - (c * (h + y)) / lmax);
    const real tn = 0.5 * (1 + std::sqrt(1 + 4 * tk * tk));
    y = next + ((tk - 1) / tn) * (next - x);
    x = next;
    tk = tn;
  }
  return quad(c, h + x);
}

real min_worst_case(const MatrixC& c, const RobustSpec& spec) {
  real m = 1e300;
  for (const auto& ch : spec.channels) m = std::min(m, worst_case_energy(c, ch.estimate, ch.epsilon));
  return m;
}

RobustSpec random_spec(Rng& rng, int k, int n, real eps, real power = 1) {
  std::uniform_real_distribution<real> mag(0.3, 1);
  RobustSpec s;
  s.power = power;
  for (int i = 0; i < n; ++i) s.channels.push_back({random_vector(rng, k, mag(rng)), eps});
  return s;
}

bool is_psd(const MatrixC& m, real tol = 1e-12) {
  return Eigen::SelfAdjointEigenSolver<MatrixC>(m).eigenvalues().minCoeff() >= -tol;
}

}  // namespace

TEST_CASE("lmi block examples") {
  const MatrixC id = MatrixC::Identity(2, 2);
  const VectorC e1 = (VectorC(2) << 1, 0).finished();
  // h^H C h - t = 0.5 but the Schur complement I - e1 e1^T / 0.5 is indefinite
  const MatrixC m = lmi_block(id, 0.5, 0, e1, 0);
  CHECK(m(0, 2) == complex(1));
  CHECK(m(2, 2).real() == doctest::Approx(0.5));
  // independent closed form on the coupled 2x2 block [[1,1],[1,0.5]]
  const real a = 1, b = 1, d = 0.5;
  const real closed_min = (a + d - std::sqrt((a - d) * (a - d) + 4 * b * b)) / 2;
  CHECK(closed_min == doctest::Approx(-0.28078).epsilon(1e-4));
  const real eig_min = Eigen::SelfAdjointEigenSolver<MatrixC>(m).eigenvalues().minCoeff();
  CHECK(eig_min == doctest::Approx(closed_min).epsilon(1e-12));
  CHECK_FALSE(is_psd(m));

  // mu = 1, eps = 0.5, t = 0.25: Schur complement 0.5 - 1/2 = 0, the boundary of the worst case
  const MatrixC edge = lmi_block(id, 0.25, 1, e1, 0.5);
  CHECK(is_psd(edge, 1e-12));
  CHECK_FALSE(is_psd(lmi_block(id, 0.26, 1, e1, 0.5), 1e-12));

  const MatrixC neg = lmi_block(id, 1, 0, VectorC::Zero(2), 0);
  CHECK(neg(2, 2).real() == doctest::Approx(-1));
  CHECK(neg.topLeftCorner(2, 2) == id);
}

TEST_CASE("lmi feasibility matches the worst-case energy") {
  Rng rng(41);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + trial % 3;
    const MatrixC c = random_psd(rng, k, 1, 1 + trial % k);
    const VectorC h = random_vector(rng, k, 0.8);
    const real eps = 0.05 + 0.01 * trial;
    const real wc = worst_case_energy(c, h, eps);
    // some mu >= 0 certifies t slightly below wc; nothing certifies t above it
    auto certified = [&](real t) {
      if (is_psd(lmi_block(c, t, 0, h, eps), 1e-12)) return true;
      for (int i = 0; i <= 4000; ++i) {
        const real mu = std::pow(10.0, -4 + 8.0 * i / 4000);
        if (is_psd(lmi_block(c, t, mu, h, eps), 1e-12)) return true;
      }
      return false;
    };
    if (wc > 1e-3) CHECK(certified(wc - 2e-3));
    CHECK_FALSE(certified(wc + 2e-3));
  }
}

TEST_CASE("worst-case energy closed forms") {
  const MatrixC id = MatrixC::Identity(2, 2);
  const VectorC h = (VectorC(2) << 1, 0).finished();
  CHECK(worst_case_energy(id, h, 0) == doctest::Approx(1));
  CHECK(worst_case_energy(id, h, 0.5) == doctest::Approx(0.25));
  CHECK(worst_case_energy(id, h, 1.0) == 0);
  CHECK(worst_case_energy(id, h, 2.0) == 0);
  // a direction orthogonal to the range of C costs nothing
  MatrixC e1 = MatrixC::Zero(2, 2);
  e1(0, 0) = 1;
  CHECK(worst_case_energy(e1, (VectorC(2) << 0.3, 0.9).finished(), 0.3) == 0);

  MatrixC bad = id;
  bad(1, 1) = -0.2;
  CHECK_THROWS_AS(worst_case_energy(bad, h, 0.1), UsageError);
  CHECK_THROWS_AS(worst_case_energy(id, h, -0.1), UsageError);
}

TEST_CASE("worst-case energy agrees with projected gradient") {
  Rng rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    const int k = 2 + trial % 4;
    const MatrixC c = random_psd(rng, k, 1, 1 + trial % k);
    const VectorC h = random_vector(rng, k, 1);
    const real eps = 0.02 + 0.9 * (trial % 10) / 10.0;
    const real wc = worst_case_energy(c, h, eps);
    real oracle = 1e300;
    for (int s = 0; s < 4; ++s) oracle = std::min(oracle, pgd_worst_case(c, h, eps, random_vector(rng, k, eps)));
    CHECK(wc <= oracle + 1e-9);
    CHECK(wc == doctest::Approx(oracle).epsilon(1e-6).scale(1));
    // random feasible perturbations never go below it
    std::uniform_real_distribution<real> u(0, 1);
    for (int s = 0; s < 200; ++s) CHECK(quad(c, h + random_vector(rng, k, eps * u(rng))) >= wc - 1e-12);
  }
}

TEST_CASE("single ER with exact channel gives maximum ratio transmission") {
  Rng rng(43);
  for (int k : {2, 3, 4, 6}) {
    RobustSpec s;
    s.power = 2;
    const VectorC h = random_vector(rng, k, 0.7);
    s.channels.push_back({h, 0});
    const auto sol = solve_maxmin(s);
    REQUIRE(sol.status == SolverStatus::optimal);
    CHECK(sol.t == doctest::Approx(2 * h.squaredNorm()).epsilon(1e-8));
    const MatrixC mrt = 2 * h * h.adjoint() / h.squaredNorm();
    CHECK((sol.cov.entries - mrt).norm() < 1e-6);
    const auto beam = extract_beam(sol);
    CHECK_FALSE(beam.rank_warning);
    CHECK(beam.beam.entries.squaredNorm() == doctest::Approx(2).epsilon(1e-8));
    CHECK(std::abs(beam.beam.entries.dot(h)) == doctest::Approx(std::sqrt(2) * h.norm()).epsilon(1e-6));
  }
}

TEST_CASE("orthonormal pair splits the power") {
  RobustSpec s;
  s.channels.push_back({(VectorC(2) << 1, 0).finished(), 0});
  s.channels.push_back({(VectorC(2) << 0, 1).finished(), 0});
  const auto sol = solve_maxmin(s);
  REQUIRE(sol.status == SolverStatus::optimal);
  CHECK(sol.t == doctest::Approx(0.5).epsilon(1e-8));

  // grid over unit-power rank-1 beams (cos a, sin a e^{j psi})
  real grid_best = 0;
  for (int i = 0; i <= 100; ++i)
    for (int j = 0; j < 100; ++j) {
      const real a = kPi / 2 * i / 100, psi = kTwoPi * j / 100;
      const VectorC b = (VectorC(2) << std::cos(a), std::sin(a) * std::polar(1.0, psi)).finished();
      grid_best = std::max(grid_best, std::min(std::norm(b[0]), std::norm(b[1])));
    }
  CHECK(grid_best == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(sol.t >= grid_best - 1e-9);
}

TEST_CASE("solution is feasible, tight, and beats random covariances") {
  Rng rng(44);
  for (int trial = 0; trial < 12; ++trial) {
    const int k = 2 + trial % 3;
    const int n = 2 + trial % 5;
    const real eps = (trial % 3) * 0.05;
    const RobustSpec spec = random_spec(rng, k, n, eps, 1.5);
    const auto sol = solve_maxmin(spec);
    REQUIRE(sol.status == SolverStatus::optimal);
    const MatrixC& c = sol.cov.entries;
    CHECK(is_psd(c, 1e-10));
    CHECK(c.trace().real() <= 1.5 * (1 + 1e-9));
    CHECK((c - c.adjoint()).norm() < 1e-12);
    CHECK(min_worst_case(c, spec) == doctest::Approx(sol.t).epsilon(1e-5).scale(1.5));
    CHECK(sol.t >= 0);
    for (int s = 0; s < 300; ++s) {
      const MatrixC r = random_psd(rng, k, 1.5, 1 + s % k);
      CHECK(min_worst_case(r, spec) <= sol.t + 1e-6);
    }
  }
}

TEST_CASE("value decreases with the uncertainty radius and scales with power") {
  Rng rng(45);
  for (int trial = 0; trial < 5; ++trial) {
    const RobustSpec base = random_spec(rng, 3, 4, 0);
    real prev = 1e300;
    for (real eps : {0.0, 0.05, 0.1, 0.2}) {
      RobustSpec s = base;
      for (auto& c : s.channels) c.epsilon = eps;
      const auto sol = solve_maxmin(s);
      REQUIRE(sol.status == SolverStatus::optimal);
      CHECK(sol.t <= prev + 1e-8);
      prev = sol.t;

      RobustSpec doubled = s;
      doubled.power = 2;
      const auto sol2 = solve_maxmin(doubled);
      CHECK(sol2.t == doctest::Approx(2 * sol.t).epsilon(1e-6).scale(1));
    }
  }
}

TEST_CASE("uncertainty ball covering the origin forces zero") {
  RobustSpec s;
  s.channels.push_back({(VectorC(2) << 0.3, 0.1).finished(), 0.5});
  s.channels.push_back({(VectorC(2) << 0.1, 0.9).finished(), 0.05});
  const auto sol = solve_maxmin(s);
  CHECK(sol.t == doctest::Approx(0).scale(1).epsilon(1e-6));
}

TEST_CASE("zero channel without uncertainty is dropped") {
  RobustSpec s;
  s.channels.push_back({VectorC::Zero(2), 0});
  s.channels.push_back({(VectorC(2) << 0.6, 0.0).finished(), 0});
  const auto sol = solve_maxmin(s);
  REQUIRE(sol.status == SolverStatus::optimal);
  CHECK(sol.dropped == std::vector<int>{0});
  CHECK_FALSE(sol.warnings.empty());
  CHECK(sol.t == doctest::Approx(0.36).epsilon(1e-8));

  RobustSpec none;
  none.channels.push_back({VectorC::Zero(3), 0});
  const auto empty = solve_maxmin(none);
  CHECK(empty.status == SolverStatus::infeasible_numerics);
  CHECK(empty.t == 0);
  CHECK_THROWS_AS(extract_beam(empty), UsageError);
}

TEST_CASE("spec validation") {
  RobustSpec s;
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.channels.push_back({VectorC::Ones(2), -0.1});
  CHECK_THROWS_AS(s.validate(), UsageError);
  s.channels[0].epsilon = 0;
  s.power = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
}

TEST_CASE("beam extraction") {
  CovarianceSolution sol;
  sol.cov.entries = MatrixC::Zero(2, 2);
  sol.cov.entries(0, 0) = 0.6;
  sol.cov.entries(1, 1) = 0.4;
  sol.cov.power_budget = 1;
  const auto b = extract_beam(sol);
  CHECK(b.rank_ratio == doctest::Approx(0.6));
  CHECK(b.rank_warning);
  CHECK(b.beam.entries.squaredNorm() == doctest::Approx(1));
  CHECK(std::abs(b.beam.entries[0]) == doctest::Approx(1));
  CHECK(b.beam.entries[0].imag() == doctest::Approx(0).scale(1));

  sol.status = SolverStatus::max_iterations;
  CHECK_THROWS_AS(extract_beam(sol), UsageError);
}
