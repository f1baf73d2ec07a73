// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wet/channel.hpp"
#include "wet/clustering.hpp"

namespace wet {

enum class Policy {
  cluster_maxmin,
  no_cluster_maxmin,
  round_robin,
  random_beam,
  best_channel,
  egt_selected,
  mrt_perfect_csi,
};

const char* to_string(Policy p);
Policy parse_policy(const std::string& name);
const char* to_string(PhaseMetric m);
const char* to_string(ScatterMode m);

/// Epsilon scale c from calibrate-epsilon at K=4, L=8, P=1, SNR 20 dB, 95% coverage.
inline constexpr real kDefaultEpsilonScale = 20.91;

struct SimConfig {
  int num_antennas = 4;  // K
  int num_ers = 40;      // N
  int num_angles = 8;    // L
  int num_clusters = 3;  // Q
  real power = 1;        // P
  real snr_db = 20;
  /// Noise standard deviation; negative means derive it from snr_db.
  real sigma = -1;
  real amplitude_low = 0.1;
  real amplitude_high = 1.0;
  std::vector<real> path_loss;
  /// When > 1 and path_loss is empty, amplitude multipliers log-spaced from 1 down to 1/span.
  real path_loss_span = 1;
  real epsilon_scale = kDefaultEpsilonScale;
  PhaseMetric metric = PhaseMetric::euclidean;
  ScatterMode scatter = ScatterMode::total;
  int restarts = 10;
  int max_iterations = 100;
  Policy policy = Policy::cluster_maxmin;
  std::vector<Policy> compare;
  int blocks = 1000;
  std::uint64_t rng_seed = 1;
  real xi = 1;
  /// Block length in minislots; 0 leaves training time uncharged.
  int block_minislots = 0;

  /// Throws ConfigError on any out-of-range field.
  void validate() const;
  real noise_sigma() const;
  std::vector<real> amplitude_multipliers() const;
  EnsembleConfig ensemble() const;
  ClusterOptions cluster_options() const;
};

/// Reads `key = value` lines; `#` starts a comment. Unknown keys are errors.
SimConfig parse_config(const std::string& text, SimConfig base = {});
SimConfig load_config(const std::string& path, SimConfig base = {});

/// Applies a single key/value pair (same keys as the file format).
void set_config_value(SimConfig& config, const std::string& key, const std::string& value);

/// Every field rendered as key -> value, in file-format spelling.
std::map<std::string, std::string> config_entries(const SimConfig& config);

}  // namespace wet
