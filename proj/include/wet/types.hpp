// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace wet {

using real = double;
using complex = std::complex<real>;

template <class Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorR = Vector<real>;
using VectorC = Vector<complex>;
using MatrixR = Matrix<real>;
using MatrixC = Matrix<complex>;

using Rng = std::mt19937_64;

inline constexpr real kPi = std::numbers::pi_v<real>;
inline constexpr real kTwoPi = 2 * std::numbers::pi_v<real>;

/// Invalid parameters supplied by a configuration (bounds, counts, ranges).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Inconsistent call: mismatched dimensions, out-of-range indices.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Wraps an angle to [0, 2pi).
inline real wrap_phase(real x) {
  real r = std::fmod(x, kTwoPi);
  if (r < 0) r += kTwoPi;
  // fmod of a tiny negative value can round up to exactly 2pi
  if (r >= kTwoPi) r = 0;
  return r;
}

/// Shortest distance between two angles on the circle, in [0, pi].
inline real circular_distance(real a, real b) {
  real d = wrap_phase(a - b);
  return d > kPi ? kTwoPi - d : d;
}

}  // namespace wet
