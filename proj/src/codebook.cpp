// SPDX-License-Identifier: Apache-2.0
#include "wet/codebook.hpp"

#include <cmath>
#include <string>

namespace wet {

VectorR training_angles(int num_angles) {
  if (num_angles < 3) throw ConfigError("L must be at least 3, got " + std::to_string(num_angles));
  VectorR theta(num_angles);
  for (int l = 0; l < num_angles; ++l) theta[l] = kTwoPi * l / num_angles;
  return theta;
}

std::vector<BeamVector> build_codebook(int v, int num_antennas, int num_angles, real power) {
  if (num_antennas < 2) throw ConfigError("K must be at least 2");
  if (v < 2 || v > num_antennas) throw UsageError("codebook index out of range: " + std::to_string(v));
  if (!(power > 0)) throw ConfigError("power budget must be positive");
  const VectorR theta = training_angles(num_angles);

  const real pair_amp = std::sqrt(power) / 2;
  const real single_amp = std::sqrt(power / 2);

  std::vector<BeamVector> book;
  book.reserve(num_angles + 1);
  for (int l = 0; l < num_angles; ++l) {
    BeamVector b{VectorC::Zero(num_antennas), v, l + 1, 0};
    b.entries[0] = pair_amp;
    b.entries[v - 1] = std::polar(pair_amp, theta[l]);
    book.push_back(std::move(b));
  }
  BeamVector ref{VectorC::Zero(num_antennas), v, num_angles + 1, 0};
  ref.entries[0] = single_amp;
  book.push_back(std::move(ref));
  return book;
}

TrainingSchedule build_schedule(int num_antennas, int num_angles, real power) {
  TrainingSchedule s;
  s.num_antennas = num_antennas;
  s.num_angles = num_angles;
  s.slots = num_antennas - 1;
  s.minislots_per_slot = num_angles + 1;
  s.power = power;
  for (int v = 2; v <= num_antennas; ++v) {
    auto book = build_codebook(v, num_antennas, num_angles, power);
    s.beams.insert(s.beams.end(), book.begin(), book.end());
  }
  if (num_antennas == 2) {
    s.reference_repeats = num_angles - 1;
    const BeamVector ref = s.beams.back();
    for (int r = 1; r <= s.reference_repeats; ++r) {
      BeamVector b = ref;
      b.repeat = r;
      s.beams.push_back(std::move(b));
    }
  }
  return s;
}

}  // namespace wet
