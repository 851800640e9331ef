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

#include "perch/winding.hpp"

#include <cmath>
#include <stdexcept>

namespace perch {

SpoolSpec spool_spec_from(const ScenarioConfig& config) {
  return {config.spool.core_radius, config.spool.spool_width,
          config.tether.diameter, config.spool.max_turns,
          config.spool.winch_rate_max};
}

double released_length(const SpoolSpec& spec, double turns) {
  if (turns < 0.0) throw std::domain_error("turns must be >= 0");
  if (turns > spec.max_turns + 1e-12) {
    throw std::out_of_range("turns exceed spool capacity");
  }
  int per_layer = spec.turns_per_layer();
  int full_layers = static_cast<int>(turns / per_layer);
  double length = 0.0;
  for (int layer = 0; layer < full_layers; ++layer) {
    double r = spec.core_radius + (layer + 0.5) * spec.tether_diameter;
    length += 2.0 * kPi * r * per_layer;
  }
  double partial = turns - static_cast<double>(full_layers) * per_layer;
  double r = spec.core_radius + (full_layers + 0.5) * spec.tether_diameter;
  return length + 2.0 * kPi * r * partial;
}

double turns_for_length(const SpoolSpec& spec, double length) {
  if (length < 0.0) throw std::domain_error("length must be >= 0");
  double capacity = released_length(spec, spec.max_turns);
  if (length > capacity + 1e-12) {
    throw std::out_of_range("length exceeds spool capacity");
  }
  // released_length is piecewise linear and strictly increasing; bisection
  // is exact enough and independent of the layer bookkeeping.
  double lo = 0.0, hi = spec.max_turns;
  for (int i = 0; i < 200 && hi - lo > 1e-14; ++i) {
    double mid = 0.5 * (lo + hi);
    if (released_length(spec, mid) < length) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double guide_position(const SpoolSpec& spec, double turns) {
  if (turns < 0.0) throw std::domain_error("turns must be >= 0");
  double period = 2.0 * spec.turns_per_layer();
  double phase = std::fmod(turns, period) / period;  // [0, 1)
  double amp = spec.spool_width / 2.0;
  // Triangle wave from -amp at phase 0 to +amp at phase 1/2 and back.
  return phase < 0.5 ? -amp + 4.0 * amp * phase : 3.0 * amp - 4.0 * amp * phase;
}

}  // namespace perch
