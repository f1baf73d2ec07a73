// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>

#include "wet/channel.hpp"
#include "wet/codebook.hpp"

using namespace wet;

TEST_CASE("training angles") {
  const VectorR t4 = training_angles(4);
  CHECK(t4[0] == 0);
  CHECK(t4[1] == doctest::Approx(kPi / 2));
  CHECK(t4[2] == doctest::Approx(kPi));
  CHECK(t4[3] == doctest::Approx(3 * kPi / 2));
  const VectorR t3 = training_angles(3);
  CHECK(t3[1] == doctest::Approx(2 * kPi / 3));
  CHECK(t3[2] == doctest::Approx(4 * kPi / 3));
  for (int l = 3; l <= 40; ++l) {
    const VectorR t = training_angles(l);
    CHECK(std::abs(t.array().sin().sum()) <= 1e-12);
    CHECK(std::abs(t.array().cos().sum()) <= 1e-12);
  }
  CHECK_THROWS_AS(training_angles(2), ConfigError);
}

TEST_CASE("codebook structure") {
  const real p = 3;
  const auto book = build_codebook(2, 3, 3, p);
  REQUIRE(book.size() == 4);
  // element 2: antennas 1 and 2, antenna-2 phase 2pi/3
  CHECK(std::abs(book[1].entries[0]) > 0);
  CHECK(std::abs(book[1].entries[1]) > 0);
  CHECK(book[1].entries[2] == complex(0));
  CHECK(std::arg(book[1].entries[1]) == doctest::Approx(2 * kPi / 3));
  CHECK(std::abs(book[1].entries[0]) == doctest::Approx(std::abs(book[1].entries[1])));

  for (int k = 2; k <= 6; ++k)
    for (int v = 2; v <= k; ++v) {
      const auto b = build_codebook(v, k, 5, p);
      for (const auto& beam : b) {
        CHECK(beam.entries.squaredNorm() == doctest::Approx(p / 2).epsilon(1e-12));
        CHECK(beam.codebook == v);
        for (int a = 0; a < k; ++a)
          if (a != 0 && a != v - 1) CHECK(beam.entries[a] == complex(0));
      }
      int nz = 0;
      for (const auto& x : b.back().entries) nz += std::abs(x) > 0;
      CHECK(nz == 1);
      CHECK(std::abs(b.back().entries[0]) > 0);
      CHECK(b.back().single_antenna(5));
    }
  CHECK_THROWS_AS(build_codebook(1, 3, 3, p), UsageError);
  CHECK_THROWS_AS(build_codebook(4, 3, 3, p), UsageError);
}

TEST_CASE("schedule layout") {
  const auto s33 = build_schedule(3, 3, 1);
  CHECK(s33.beams.size() == 8);
  const auto s48 = build_schedule(4, 8, 1);
  CHECK(s48.beams.size() == 27);
  CHECK(s48.minislots_per_slot == 9);
  for (int slot = 0; slot < 3; ++slot)
    for (int l = 0; l < 9; ++l) {
      const auto& b = s48.beams[slot * 9 + l];
      CHECK(b.codebook == slot + 2);
      CHECK(b.element == l + 1);
    }
  const auto s24 = build_schedule(2, 4, 1);
  CHECK(s24.beams.size() == 5 + 3);
  CHECK(s24.reference_repeats == 3);
  for (std::size_t i = 5; i < s24.beams.size(); ++i) {
    CHECK(s24.beams[i].single_antenna(4));
    CHECK(s24.beams[i].repeat == static_cast<int>(i) - 4);
  }
}

TEST_CASE("pairwise beam energy equals alpha + beta cos(theta + phi)") {
  Rng rng(4);
  std::uniform_real_distribution<real> a(0.1, 1), ph(0, kTwoPi);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 2 + trial % 5;
    const int l = 3 + trial % 7;
    const real p = 0.5 + trial * 0.1;
    VectorR m(k), d(k);
    for (int i = 0; i < k; ++i) {
      m[i] = a(rng);
      d[i] = ph(rng);
    }
    const MisoChannel ch = make_channel(m, d);
    const VectorC g = effective_vector(ch);
    const VectorR theta = training_angles(l);
    for (int v = 2; v <= k; ++v) {
      const auto book = build_codebook(v, k, l, p);
      const real alpha = p / 4 * (m[0] * m[0] + m[v - 1] * m[v - 1]);
      const real beta = p / 2 * m[0] * m[v - 1];
      const real phi = d[v - 1] - d[0];
      for (int i = 0; i < l; ++i) {
        const real e = received_energy(g, outer(book[i].entries));
        CHECK(e == doctest::Approx(alpha + beta * std::cos(theta[i] + phi)).epsilon(1e-12));
      }
      CHECK(received_energy(g, outer(book[l].entries)) == doctest::Approx(p / 2 * m[0] * m[0]));
    }
  }
}
