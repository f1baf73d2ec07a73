// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "wet/types.hpp"

namespace wet {

/// A training beam labelled by its codebook index v (2..K) and element index l (1..L+1).
///
/// `repeat` is 0 for the base schedule and counts the extra copies of the
/// single-antenna beam that a two-antenna schedule appends.
struct BeamVector {
  VectorC entries;
  int codebook = 0;
  int element = 0;
  int repeat = 0;

  bool single_antenna(int num_angles) const { return element == num_angles + 1; }
};

struct TrainingSchedule {
  std::vector<BeamVector> beams;
  int num_antennas = 0;
  int num_angles = 0;  // L
  int slots = 0;
  int minislots_per_slot = 0;
  int reference_repeats = 0;
  real power = 0;
};

/// theta_l = 2 (l-1) pi / L, l = 1..L. Throws ConfigError for L < 3.
VectorR training_angles(int num_angles);

/// Codebook B_v: L pairwise beams on antennas {1, v} with antenna-v phase theta_l,
/// followed by a beam on antenna 1 only.
///
/// Pairwise beams carry sqrt(P)/2 per active antenna, the single-antenna beam
/// sqrt(P/2); every beam radiates P/2. With this scaling a pairwise reading is
/// (P/4)(|h1|^2+|hv|^2) + (P/2)|h1||hv| cos(theta_l + phi_v) and the
/// single-antenna reading is (P/2)|h1|^2.
std::vector<BeamVector> build_codebook(int v, int num_antennas, int num_angles, real power);

/// Slot-major schedule of all codebooks B_2..B_K.
///
/// For K = 2 only one single-antenna reading would exist, so the single-antenna
/// beam is repeated until L reference readings are available.
TrainingSchedule build_schedule(int num_antennas, int num_angles, real power);

}  // namespace wet
