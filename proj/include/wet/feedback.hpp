// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "wet/channel.hpp"
#include "wet/codebook.hpp"

namespace wet {

/// Additive Gaussian noise on every RSSI reading, standard deviation `sigma` in energy units.
struct NoiseModel {
  real sigma = 0;
};

/// RSSI feedback of one ER for a full training schedule.
///
/// `readings(v-2, l-1)` is the reading for beam l of codebook B_v; column L
/// holds the single-antenna readings. Two-antenna schedules put the extra
/// single-antenna readings in `reference_repeats`. Entries can be negative
/// when sigma > 0.
struct TrainingReport {
  int er_id = 0;
  MatrixR readings;
  VectorR reference_repeats;

  int num_angles() const { return static_cast<int>(readings.cols()) - 1; }
  int num_antennas() const { return static_cast<int>(readings.rows()) + 1; }

  /// All single-antenna readings: column L followed by the repeats.
  VectorR reference_readings() const;
};

/// Noisy RSSI for every (ER, beam): g^H b b^H g + z, z ~ N(0, sigma^2) fresh per entry.
std::vector<TrainingReport> measure_block(const std::vector<MisoChannel>& channels,
                                          const TrainingSchedule& schedule, const NoiseModel& noise,
                                          Rng& rng);

/// Mean pairwise reading over the magnitude distribution: (P/4) * 2 * E[|h|^2].
real mean_pairwise_rssi(real power, real amplitude_low, real amplitude_high);

/// sigma such that 10 log10(mean_pairwise_rssi / sigma) = snr_db.
real sigma_from_snr(real snr_db, real power, real amplitude_low, real amplitude_high);

}  // namespace wet
