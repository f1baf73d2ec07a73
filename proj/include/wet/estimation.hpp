// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <vector>

#include "wet/channel.hpp"
#include "wet/feedback.hpp"

namespace wet {

/// Channel of one ER as recovered from its RSSI feedback.
///
/// Phases are relative to antenna 1, so the effective estimate carries phase 0 on
/// the first entry. `epsilon` is the radius of the uncertainty ball handed to the
/// robust beamformer.
struct ChannelEstimate {
  int er_id = 0;
  VectorR rel_phases;   // K-1, in [0, 2pi)
  VectorR magnitudes;   // K
  VectorR alpha_hats;   // K-1
  real epsilon = 0;
  std::vector<bool> clamped;     // per magnitude
  std::vector<bool> degenerate;  // per relative phase

  int num_antennas() const { return static_cast<int>(magnitudes.size()); }
  bool flagged() const;
  /// Full phase vector (0, rel_phases...).
  VectorR phases() const;
  /// Estimated effective vector, same convention as effective_vector(MisoChannel).
  VectorC vector() const;
};

/// atan2(-sum R sin(theta), sum R cos(theta)) wrapped to [0, 2pi).
///
/// Returns nullopt when both sums vanish, i.e. the readings carry no phase information.
std::optional<real> estimate_phase(const VectorR& readings, const VectorR& angles);

/// Mean of the L pairwise readings.
real estimate_alpha(const VectorR& readings);

struct MagnitudeEstimate {
  real value = 0;
  bool clamped = false;
};

/// |h1| from the single-antenna readings: sqrt((2/P) * mean), negative means clamp to 0.
MagnitudeEstimate estimate_reference_magnitude(const VectorR& single_antenna_readings, real power);

struct MagnitudeVector {
  VectorR values;
  std::vector<bool> clamped;
};

/// |h_v| = sqrt(4/P alpha_v - |h1|^2); entry 0 is the reference magnitude.
MagnitudeVector estimate_magnitudes(const VectorR& alpha_hats, const MagnitudeEstimate& reference,
                                    real power);

/// c * sigma * sqrt(K / L).
real epsilon_radius(real scale, real sigma, int num_antennas, int num_angles);

/// Runs the phase, alpha and magnitude estimators for every codebook.
ChannelEstimate assemble_estimate(const TrainingReport& report, real power, const NoiseModel& noise,
                                  real epsilon_scale);

/// Mean over v of 100 * circular |phi_hat - phi| / 2pi.
real phase_error_percent(const ChannelEstimate& est, const MisoChannel& truth);

/// Mean over k of 100 * ||h_hat_k| - |h_k|| / |h_k|.
real magnitude_error_percent(const ChannelEstimate& est, const MisoChannel& truth);

/// |h_hat - h| with the true channel rotated so that antenna 1 has phase 0.
real estimation_error_norm(const ChannelEstimate& est, const MisoChannel& truth);

}  // namespace wet
