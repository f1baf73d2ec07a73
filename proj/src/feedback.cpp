// SPDX-License-Identifier: Apache-2.0
#include "wet/feedback.hpp"

#include <cmath>

namespace wet {

VectorR TrainingReport::reference_readings() const {
  VectorR out(readings.rows() + reference_repeats.size());
  out << readings.col(readings.cols() - 1), reference_repeats;
  return out;
}

std::vector<TrainingReport> measure_block(const std::vector<MisoChannel>& channels,
                                          const TrainingSchedule& schedule, const NoiseModel& noise,
                                          Rng& rng) {
  if (noise.sigma < 0) throw ConfigError("noise sigma must be non-negative");
  std::normal_distribution<real> gauss(0, 1);
  const int k = schedule.num_antennas;
  const int l = schedule.num_angles;

  std::vector<TrainingReport> out;
  out.reserve(channels.size());
  for (std::size_t i = 0; i < channels.size(); ++i) {
    const MisoChannel& ch = channels[i];
    if (ch.num_antennas() != k) throw UsageError("channel and schedule antenna counts differ");
    const VectorC g = effective_vector(ch);

    TrainingReport r{static_cast<int>(i), MatrixR(k - 1, l + 1), VectorR(schedule.reference_repeats)};
    for (const BeamVector& b : schedule.beams) {
      const real clean = std::norm(b.entries.dot(g));  // |b^H g|^2
      const real value = clean + noise.sigma * gauss(rng);
      if (b.repeat > 0)
        r.reference_repeats[b.repeat - 1] = value;
      else
        r.readings(b.codebook - 2, b.element - 1) = value;
    }
    out.push_back(std::move(r));
  }
  return out;
}

real mean_pairwise_rssi(real power, real amplitude_low, real amplitude_high) {
  const real lo = amplitude_low, hi = amplitude_high;
  const real second_moment =
      hi == lo ? lo * lo : (hi * hi * hi - lo * lo * lo) / (3 * (hi - lo));
  return power / 4 * 2 * second_moment;
}

real sigma_from_snr(real snr_db, real power, real amplitude_low, real amplitude_high) {
  return mean_pairwise_rssi(power, amplitude_low, amplitude_high) / std::pow(10.0, snr_db / 10);
}

}  // namespace wet
