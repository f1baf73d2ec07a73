// SPDX-License-Identifier: Apache-2.0
#include "wet/estimation.hpp"

#include <algorithm>
#include <cmath>

namespace wet {

bool ChannelEstimate::flagged() const {
  return std::any_of(clamped.begin(), clamped.end(), [](bool b) { return b; }) ||
         std::any_of(degenerate.begin(), degenerate.end(), [](bool b) { return b; });
}

VectorR ChannelEstimate::phases() const {
  VectorR p(rel_phases.size() + 1);
  p << 0, rel_phases;
  return p;
}

VectorC ChannelEstimate::vector() const { return effective_vector(magnitudes, phases()); }

std::optional<real> estimate_phase(const VectorR& readings, const VectorR& angles) {
  if (readings.size() != angles.size()) throw UsageError("readings and angles differ in length");
  if (readings.size() < 3) throw ConfigError("phase estimation needs L >= 3");
  const real num = -(readings.array() * angles.array().sin()).sum();
  const real den = (readings.array() * angles.array().cos()).sum();
  // Sums of the constant part cancel only to rounding, so compare against the reading scale.
  const real scale = readings.cwiseAbs().sum();
  if (std::hypot(num, den) <= 1e-12 * scale || (num == 0 && den == 0)) return std::nullopt;
  return wrap_phase(std::atan2(num, den));
}

real estimate_alpha(const VectorR& readings) {
  if (readings.size() == 0) throw UsageError("no readings");
  return readings.mean();
}

MagnitudeEstimate estimate_reference_magnitude(const VectorR& single_antenna_readings, real power) {
  if (single_antenna_readings.size() == 0) throw UsageError("no single-antenna readings");
  const real sq = 2 / power * single_antenna_readings.mean();
  if (sq < 0) return {0, true};
  return {std::sqrt(sq), false};
}

MagnitudeVector estimate_magnitudes(const VectorR& alpha_hats, const MagnitudeEstimate& reference,
                                    real power) {
  MagnitudeVector out{VectorR(alpha_hats.size() + 1), std::vector<bool>(alpha_hats.size() + 1)};
  out.values[0] = reference.value;
  out.clamped[0] = reference.clamped;
  const real ref_sq = reference.value * reference.value;
  for (Eigen::Index v = 0; v < alpha_hats.size(); ++v) {
    const real radicand = 4 / power * alpha_hats[v] - ref_sq;
    out.values[v + 1] = radicand > 0 ? std::sqrt(radicand) : 0;
    out.clamped[v + 1] = radicand < 0;
  }
  return out;
}

real epsilon_radius(real scale, real sigma, int num_antennas, int num_angles) {
  return scale * sigma * std::sqrt(static_cast<real>(num_antennas) / num_angles);
}

ChannelEstimate assemble_estimate(const TrainingReport& report, real power, const NoiseModel& noise,
                                  real epsilon_scale) {
  const int k = report.num_antennas();
  const int l = report.num_angles();
  const VectorR angles = training_angles(l);
  if (k == 2 && report.reference_repeats.size() == 0)
    throw UsageError("two-antenna report lacks the repeated reference readings");

  ChannelEstimate est;
  est.er_id = report.er_id;
  est.rel_phases.resize(k - 1);
  est.alpha_hats.resize(k - 1);
  est.degenerate.assign(k - 1, false);
  for (int v = 0; v < k - 1; ++v) {
    const VectorR pairwise = report.readings.row(v).head(l).transpose();
    const auto phi = estimate_phase(pairwise, angles);
    est.rel_phases[v] = phi.value_or(0);
    est.degenerate[v] = !phi.has_value();
    est.alpha_hats[v] = estimate_alpha(pairwise);
  }
  const auto ref = estimate_reference_magnitude(report.reference_readings(), power);
  auto mags = estimate_magnitudes(est.alpha_hats, ref, power);
  est.magnitudes = std::move(mags.values);
  est.clamped = std::move(mags.clamped);
  est.epsilon = epsilon_radius(epsilon_scale, noise.sigma, k, l);
  return est;
}

real phase_error_percent(const ChannelEstimate& est, const MisoChannel& truth) {
  const VectorR phi = relative_phases(truth);
  real acc = 0;
  for (Eigen::Index v = 0; v < phi.size(); ++v) acc += circular_distance(est.rel_phases[v], phi[v]);
  return 100 * acc / (kTwoPi * static_cast<real>(phi.size()));
}

real magnitude_error_percent(const ChannelEstimate& est, const MisoChannel& truth) {
  real acc = 0;
  for (Eigen::Index k = 0; k < truth.magnitudes.size(); ++k)
    acc += std::abs(est.magnitudes[k] - truth.magnitudes[k]) / truth.magnitudes[k];
  return 100 * acc / static_cast<real>(truth.magnitudes.size());
}

real estimation_error_norm(const ChannelEstimate& est, const MisoChannel& truth) {
  VectorR aligned(truth.num_antennas());
  aligned << 0, relative_phases(truth);
  return (est.vector() - effective_vector(truth.magnitudes, aligned)).norm();
}

}  // namespace wet
