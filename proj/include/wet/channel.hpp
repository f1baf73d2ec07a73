// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "wet/types.hpp"

namespace wet {

/// Ground-truth MISO channel of one energy receiver: K amplitude/phase pairs.
///
/// Path loss is folded into the magnitudes. Phases are kept in [0, 2pi).
struct MisoChannel {
  VectorR magnitudes;
  VectorR phases;

  Eigen::Index num_antennas() const { return magnitudes.size(); }

  /// Throws UsageError unless K >= 2, sizes agree, magnitudes >= 0 and phases in [0, 2pi).
  void validate() const;
};

MisoChannel make_channel(VectorR magnitudes, VectorR phases);

struct EnsembleConfig {
  int num_antennas = 4;
  int num_ers = 1;
  real amplitude_low = 0.1;
  real amplitude_high = 1.0;
  std::uint64_t rng_seed = 1;
  /// Optional per-ER amplitude multipliers (empty means all 1).
  std::vector<real> path_loss;

  void validate() const;
};

/// Transmit covariance C = E[x x^H] together with its power budget.
struct TransmitCovariance {
  MatrixC entries;
  real power_budget = 1;

  Eigen::Index dim() const { return entries.rows(); }

  /// Hermitian to 1e-12, PSD to -1e-9 * trace and trace <= P + 1e-9.
  void validate() const;
};

/// Samples N channels with uniform magnitudes and phases, seeded from config.rng_seed.
std::vector<MisoChannel> sample_ensemble(const EnsembleConfig& config);

/// Same as above but draws from a caller-owned stream; config.rng_seed is ignored.
std::vector<MisoChannel> sample_ensemble(const EnsembleConfig& config, Rng& rng);

/// Effective vector g with energy = g^H C g.
///
/// g_k = |h_k| exp(-j delta_k), so a beam entry with phase theta on antenna v
/// contributes cos(theta + delta_v - delta_1) against antenna 1.
VectorC effective_vector(const MisoChannel& channel);

/// Vector built from magnitudes and phases with the same sign convention as effective_vector.
VectorC effective_vector(const VectorR& magnitudes, const VectorR& phases);

/// Harvested energy xi * g^H C g, clamped at zero.
real received_energy(const MisoChannel& channel, const TransmitCovariance& cov, real xi = 1);
real received_energy(const VectorC& g, const MatrixC& cov, real xi = 1);

/// delta_v - delta_1 wrapped to [0, 2pi), v = 2..K.
VectorR relative_phases(const MisoChannel& channel);

/// Rank-1 covariance b b^H.
MatrixC outer(const VectorC& beam);

/// Matched beam sqrt(P) g / |g|. Zero vector when g = 0.
VectorC mrt_beam(const VectorC& g, real power);

/// Equal-gain beam: every antenna at sqrt(P/K), phase aligned with g.
VectorC egt_beam(const VectorC& g, real power);

}  // namespace wet
