// Copyright 2026 The Perchsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "perch/winding.hpp"

using namespace perch;

TEST_CASE("first full turn pays out the innermost circumference") {
  SpoolSpec spec;  // core 10 mm, 1 mm line
  double want = 2.0 * kPi * (0.010 + 0.0005);
  CHECK(released_length(spec, 1.0) == doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(0.06597).epsilon(1e-3));  // ~66 mm
  CHECK(released_length(spec, 0.0) == 0.0);
  CHECK(released_length(spec, 0.5) == doctest::Approx(want / 2.0));
}

TEST_CASE("layer change uses the larger radius") {
  SpoolSpec spec;
  int per_layer = spec.turns_per_layer();
  CHECK(per_layer == 20);
  double layer0 = released_length(spec, per_layer);
  CHECK(layer0 ==
        doctest::Approx(per_layer * 2.0 * kPi * 0.0105).epsilon(1e-12));
  double next_turn = released_length(spec, per_layer + 1) - layer0;
  CHECK(next_turn == doctest::Approx(2.0 * kPi * 0.0115).epsilon(1e-12));
}

TEST_CASE("released length is strictly increasing and convex in turns") {
  SpoolSpec spec;
  double prev = released_length(spec, 0.0);
  double prev_gain = 0.0;
  for (int t = 1; t <= spec.max_turns; ++t) {
    double cur = released_length(spec, t);
    double gain = cur - prev;
    CHECK(gain > 0.0);
    CHECK(gain >= prev_gain - 1e-12);  // outer layers never pay out less
    prev = cur;
    prev_gain = gain;
  }
}

TEST_CASE("turns_for_length inverts released_length") {
  SpoolSpec spec;
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> turns_d(0.0, spec.max_turns);
  for (int trial = 0; trial < 1000; ++trial) {
    double turns = turns_d(rng);
    double len = released_length(spec, turns);
    CHECK(turns_for_length(spec, len) == doctest::Approx(turns).epsilon(1e-9));
  }
}

TEST_CASE("capacity and domain errors") {
  SpoolSpec spec;
  CHECK_THROWS_AS(released_length(spec, -1.0), std::domain_error);
  CHECK_THROWS_AS(released_length(spec, spec.max_turns + 1.0),
                  std::out_of_range);
  CHECK_THROWS_AS(turns_for_length(spec, -0.1), std::domain_error);
  double capacity = released_length(spec, spec.max_turns);
  CHECK(capacity > 4.0);  // holds the full reference tether
  CHECK_THROWS_AS(turns_for_length(spec, capacity + 1.0), std::out_of_range);
}

TEST_CASE("level-wind guide sweeps a triangle wave across the spool") {
  SpoolSpec spec;
  double amp = spec.spool_width / 2.0;
  int per_layer = spec.turns_per_layer();
  CHECK(guide_position(spec, 0.0) == doctest::Approx(-amp));
  CHECK(guide_position(spec, per_layer) == doctest::Approx(amp));
  CHECK(guide_position(spec, 2.0 * per_layer) == doctest::Approx(-amp));
  CHECK(guide_position(spec, per_layer / 2.0) == doctest::Approx(0.0));
  // Bounded and periodic everywhere.
  for (double t = 0.0; t < 3.0 * per_layer; t += 0.37) {
    double g = guide_position(spec, t);
    CHECK(std::abs(g) <= amp + 1e-12);
    CHECK(guide_position(spec, t + 2.0 * per_layer) ==
          doctest::Approx(g).epsilon(1e-12));
  }
}
