// SPDX-License-Identifier: Apache-2.0
#include "wet/robust.hpp"

#include <cmath>

namespace wet {

const char* to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::max_iterations: return "max-iterations";
    case SolverStatus::infeasible_numerics: return "infeasible-numerics";
  }
  return "unknown";
}

void RobustSpec::validate() const {
  if (channels.empty()) throw UsageError("robust spec needs at least one ER");
  if (!(power > 0)) throw ConfigError("power budget must be positive");
  const Eigen::Index k = channels.front().estimate.size();
  for (const auto& c : channels) {
    if (c.estimate.size() != k || k < 1) throw UsageError("robust spec channels differ in dimension");
    if (!(c.epsilon >= 0)) throw UsageError("uncertainty radius must be non-negative");
  }
}

MatrixC lmi_block(const MatrixC& cov, real t, real mu, const VectorC& h_hat, real epsilon) {
  const Eigen::Index k = cov.rows();
  if (cov.cols() != k || h_hat.size() != k) throw UsageError("lmi_block dimension mismatch");
  const VectorC ch = cov * h_hat;
  MatrixC m(k + 1, k + 1);
  m.topLeftCorner(k, k) = cov + mu * MatrixC::Identity(k, k);
  m.topRightCorner(k, 1) = ch;
  m.bottomLeftCorner(1, k) = ch.adjoint();
  m(k, k) = h_hat.dot(ch).real() - t - mu * epsilon * epsilon;
  return m;
}

real worst_case_energy(const MatrixC& cov, const VectorC& h_hat, real epsilon) {
  const Eigen::Index k = cov.rows();
  if (cov.cols() != k || h_hat.size() != k) throw UsageError("worst_case_energy dimension mismatch");
  if (epsilon < 0) throw UsageError("uncertainty radius must be non-negative");
  Eigen::SelfAdjointEigenSolver<MatrixC> es(cov);
  const VectorR lam_raw = es.eigenvalues();
  const real tr = std::max(cov.trace().real(), real(0));
  if (lam_raw.minCoeff() < -1e-9 * std::max(tr, real(1)))
    throw UsageError("worst_case_energy needs a positive semidefinite covariance");

  if (epsilon == 0) return std::max(h_hat.dot(cov * h_hat).real(), real(0));
  if (h_hat.norm() <= epsilon) return 0;

  const VectorR lam = lam_raw.cwiseMax(0);
  const VectorR c2 = (es.eigenvectors().adjoint() * h_hat).cwiseAbs2();
  const real lam_max = lam.maxCoeff();
  if (lam_max <= 0) return 0;

  // |eta(mu)|^2 = sum lam^2 c^2 / (lam + mu)^2, decreasing from |P_range h|^2 at mu = 0.
  auto eta_sq = [&](real mu) {
    real s = 0;
    for (Eigen::Index i = 0; i < k; ++i)
      if (lam[i] > 0) s += lam[i] * lam[i] * c2[i] / ((lam[i] + mu) * (lam[i] + mu));
    return s;
  };
  const real eps2 = epsilon * epsilon;
  const real range_sq = [&] {
    real s = 0;
    for (Eigen::Index i = 0; i < k; ++i)
      if (lam[i] > 1e-14 * lam_max) s += c2[i];
    return s;
  }();
  if (range_sq <= eps2) return 0;

  real lo = 0;
  real hi = lam_max * std::sqrt(c2.sum()) / epsilon;
  while (eta_sq(hi) > eps2) hi *= 2;
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    const real mid = 0.5 * (lo + hi);
    (eta_sq(mid) > eps2 ? lo : hi) = mid;
  }
  const real mu = 0.5 * (lo + hi);
  real value = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const real r = mu / (lam[i] + mu);
    value += lam[i] * r * r * c2[i];
  }
  return std::max(value, real(0));
}

ExtractedBeam extract_beam(const CovarianceSolution& solution) {
  if (solution.status != SolverStatus::optimal)
    throw UsageError(std::string("cannot extract a beam from a solution with status ") +
                     to_string(solution.status));
  const MatrixC& c = solution.cov.entries;
  Eigen::SelfAdjointEigenSolver<MatrixC> es(c);
  const Eigen::Index top = c.rows() - 1;
  const real lam1 = std::max(es.eigenvalues()[top], real(0));
  const real tr = c.trace().real();

  ExtractedBeam out;
  VectorC u = es.eigenvectors().col(top);
  // Fix the global phase so the first non-negligible entry is real positive.
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (std::abs(u[k]) > 1e-12) {
      u *= std::conj(u[k]) / std::abs(u[k]);
      break;
    }
  }
  out.beam.entries = u * std::sqrt(std::max(tr, real(0)));
  out.rank_ratio = tr > 0 ? lam1 / tr : 0;
  out.rank_warning = out.rank_ratio < kRankOneThreshold;
  return out;
}

}  // namespace wet
