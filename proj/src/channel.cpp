// SPDX-License-Identifier: Apache-2.0
#include "wet/channel.hpp"

#include <cmath>
#include <string>

namespace wet {

void MisoChannel::validate() const {
  if (magnitudes.size() < 2) throw UsageError("channel needs at least two antennas");
  if (phases.size() != magnitudes.size())
    throw UsageError("channel magnitude and phase vectors differ in length");
  for (Eigen::Index k = 0; k < magnitudes.size(); ++k) {
    if (!(magnitudes[k] >= 0)) throw UsageError("channel magnitude must be non-negative");
    if (!(phases[k] >= 0 && phases[k] < kTwoPi)) throw UsageError("channel phase outside [0, 2pi)");
  }
}

MisoChannel make_channel(VectorR magnitudes, VectorR phases) {
  for (auto& p : phases) p = wrap_phase(p);
  MisoChannel ch{std::move(magnitudes), std::move(phases)};
  ch.validate();
  return ch;
}

void EnsembleConfig::validate() const {
  if (num_antennas < 2) throw ConfigError("num_antennas must be >= 2");
  if (num_ers < 1) throw ConfigError("num_ers must be >= 1");
  if (!(amplitude_low > 0) || !(amplitude_high >= amplitude_low))
    throw ConfigError("amplitude bounds must satisfy 0 < low <= high");
  if (!path_loss.empty()) {
    if (path_loss.size() != static_cast<std::size_t>(num_ers))
      throw ConfigError("path_loss needs one multiplier per ER");
    for (real m : path_loss)
      if (!(m > 0)) throw ConfigError("path_loss multipliers must be positive");
  }
}

void TransmitCovariance::validate() const {
  if (entries.rows() != entries.cols()) throw UsageError("covariance must be square");
  if (!(power_budget > 0)) throw UsageError("power budget must be positive");
  if ((entries - entries.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
    throw UsageError("covariance is not Hermitian");
  const real tr = entries.trace().real();
  Eigen::SelfAdjointEigenSolver<MatrixC> es(entries, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-9 * std::max(tr, real(1)))
    throw UsageError("covariance is not positive semidefinite");
  if (tr > power_budget + 1e-9) throw UsageError("covariance trace exceeds the power budget");
}

std::vector<MisoChannel> sample_ensemble(const EnsembleConfig& config) {
  Rng rng(config.rng_seed);
  return sample_ensemble(config, rng);
}

std::vector<MisoChannel> sample_ensemble(const EnsembleConfig& config, Rng& rng) {
  config.validate();
  std::uniform_real_distribution<real> amp(config.amplitude_low, config.amplitude_high);
  std::uniform_real_distribution<real> phase(0, kTwoPi);
  const bool degenerate = config.amplitude_low == config.amplitude_high;

  std::vector<MisoChannel> out;
  out.reserve(config.num_ers);
  for (int i = 0; i < config.num_ers; ++i) {
    const real scale = config.path_loss.empty() ? 1 : config.path_loss[i];
    MisoChannel ch{VectorR(config.num_antennas), VectorR(config.num_antennas)};
    for (int k = 0; k < config.num_antennas; ++k) {
      ch.magnitudes[k] = scale * (degenerate ? config.amplitude_low : amp(rng));
      ch.phases[k] = wrap_phase(phase(rng));
    }
    out.push_back(std::move(ch));
  }
  return out;
}

VectorC effective_vector(const VectorR& magnitudes, const VectorR& phases) {
  if (magnitudes.size() != phases.size()) throw UsageError("magnitude/phase length mismatch");
  VectorC g(magnitudes.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) g[k] = std::polar(magnitudes[k], -phases[k]);
  return g;
}

VectorC effective_vector(const MisoChannel& channel) {
  return effective_vector(channel.magnitudes, channel.phases);
}

real received_energy(const VectorC& g, const MatrixC& cov, real xi) {
  if (cov.rows() != g.size() || cov.cols() != g.size())
    throw UsageError("covariance and channel dimensions differ");
  const real e = xi * (g.adjoint() * cov * g)(0, 0).real();
  return e < 0 ? 0 : e;
}

real received_energy(const MisoChannel& channel, const TransmitCovariance& cov, real xi) {
  return received_energy(effective_vector(channel), cov.entries, xi);
}

VectorR relative_phases(const MisoChannel& channel) {
  const Eigen::Index k = channel.num_antennas();
  if (k < 2) throw UsageError("relative phases need K >= 2");
  VectorR out(k - 1);
  for (Eigen::Index v = 1; v < k; ++v) out[v - 1] = wrap_phase(channel.phases[v] - channel.phases[0]);
  return out;
}

MatrixC outer(const VectorC& beam) { return beam * beam.adjoint(); }

VectorC mrt_beam(const VectorC& g, real power) {
  const real n = g.norm();
  if (n == 0) return VectorC::Zero(g.size());
  return g * (std::sqrt(power) / n);
}

VectorC egt_beam(const VectorC& g, real power) {
  const real a = std::sqrt(power / static_cast<real>(g.size()));
  VectorC b(g.size());
  for (Eigen::Index k = 0; k < g.size(); ++k) b[k] = std::polar(a, std::arg(g[k]));
  return b;
}

}  // namespace wet
