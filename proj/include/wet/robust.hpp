// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "wet/channel.hpp"
#include "wet/codebook.hpp"

namespace wet {

/// Estimated channel and the radius of the ball its error lies in.
struct UncertainChannel {
  VectorC estimate;
  real epsilon = 0;
};

/// Data of the robust max-min problem over the selected cluster.
struct RobustSpec {
  std::vector<UncertainChannel> channels;
  real power = 1;

  void validate() const;
};

enum class SolverStatus { optimal, max_iterations, infeasible_numerics };

const char* to_string(SolverStatus s);

struct SolverOptions {
  /// Target duality gap relative to P * max |h|^2.
  real gap_tolerance = 1e-10;
  real barrier_growth = 20;
  int max_newton_steps = 1000;
};

struct CovarianceSolution {
  TransmitCovariance cov;
  /// Worst-case max-min energy level, >= 0.
  real t = 0;
  /// S-procedure multipliers, one per input channel; 0 where epsilon = 0 or the channel was dropped.
  std::vector<real> duals;
  SolverStatus status = SolverStatus::optimal;
  int newton_steps = 0;
  real gap = 0;
  std::vector<int> dropped;
  std::vector<std::string> warnings;
};

/// T(C, t, mu) = [mu I + C, C h; h^H C, h^H C h - t - mu eps^2].
MatrixC lmi_block(const MatrixC& cov, real t, real mu, const VectorC& h_hat, real epsilon);

/// min over |eta| <= eps of (h + eta)^H C (h + eta), clamped at 0.
///
/// Interior minimizers reach the null space of C (value 0); otherwise the minimum
/// sits on the sphere with (C + mu I) eta = -C h and mu > 0 found by bisection on
/// the decreasing map mu -> |eta(mu)|. Throws UsageError when C is not PSD.
real worst_case_energy(const MatrixC& cov, const VectorC& h_hat, real epsilon);

/// Maximizes t subject to T_i(C, t, mu_i) >= 0 for every ER with eps > 0,
/// h^H C h >= t for every ER with eps = 0, C >= 0 and tr C <= P.
///
/// Primal barrier path-following on the Hermitian LMIs. ERs with h = 0 and
/// eps = 0 are dropped with a warning. Never throws on numerical trouble;
/// the status records it.
CovarianceSolution solve_maxmin(const RobustSpec& spec, const SolverOptions& options = {});

struct ExtractedBeam {
  BeamVector beam;
  /// lambda_1 / trace.
  real rank_ratio = 0;
  bool rank_warning = false;
};

inline constexpr real kRankOneThreshold = 0.99;

/// Dominant eigenvector of C scaled to |b|^2 = tr C. Throws UsageError unless status is optimal.
ExtractedBeam extract_beam(const CovarianceSolution& solution);

}  // namespace wet
