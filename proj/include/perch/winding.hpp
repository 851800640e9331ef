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

#ifndef PERCH_WINDING_HPP_
#define PERCH_WINDING_HPP_

#include "perch/scenario.hpp"

namespace perch {

// Spool and level-wind kinematics of the pod's retraction system. Layers
// pack ideally side by side (that is what the level wind is for); layer i
// winds at radius core_radius + (i + 1/2) * tether_diameter.
struct SpoolSpec {
  double core_radius = 0.010;    // m
  double spool_width = 0.020;    // m
  double tether_diameter = 0.001;  // m
  int max_turns = 120;
  double winch_rate_max = 0.15;  // m/s

  int turns_per_layer() const {
    int n = static_cast<int>(spool_width / tether_diameter);
    return n < 1 ? 1 : n;
  }
};

SpoolSpec spool_spec_from(const ScenarioConfig& config);

// Tether length paid out after `turns` spool turns. Strictly increasing and
// convex (outer layers have larger circumference). Throws std::domain_error
// for turns < 0 and std::out_of_range beyond max_turns.
double released_length(const SpoolSpec& spec, double turns);

// Inverse of released_length to within 1e-9 m. Throws std::out_of_range for
// lengths beyond spool capacity.
double turns_for_length(const SpoolSpec& spec, double length);

// Lateral offset of the level-wind guide: a triangle wave with period
// 2 * turns_per_layer and amplitude spool_width / 2, starting at the
// -spool_width/2 edge. One guide reciprocation per two layers is fixed by
// the double-helix screw gearing.
double guide_position(const SpoolSpec& spec, double turns);

}  // namespace perch

#endif  // PERCH_WINDING_HPP_
