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

#ifndef PERCH_DYNAMICS_HPP_
#define PERCH_DYNAMICS_HPP_

#include <stdexcept>

#include "perch/capstan.hpp"
#include "perch/geometry.hpp"
#include "perch/scenario.hpp"
#include "perch/vec2.hpp"

namespace perch {

class InstabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Internal tether routing bookkeeping. While the tether is wrapped, the
// material is split at a fixed anchor bearing on the branch into a drone
// side and a pod side; static friction keeps the split fixed (no sliding)
// until the capstan tension bound is exceeded or one side goes slack, in
// which case material transfers across the wrap.
struct TetherRouting {
  bool contact = false;
  int wrap_sign = 0;        // +1: tether runs ccw around the branch drone->pod
  double anchor_bearing = 0.0;   // rad, continuous, split point of the wrap
  double drone_bearing = 0.0;    // rad, continuous (unwrapped) body bearings
  double pod_bearing = 0.0;
  double drone_material = 0.0;   // m of tether on the drone side of the anchor
  double pod_material = 0.0;     // m on the pod side (free + wrapped arc)
};

struct SystemState {
  double time = 0.0;
  Vec2 drone_pos, drone_vel;
  Vec2 pod_pos, pod_vel;
  WrapState wrap;
  double spooled_length = 0.0;  // m on the spool
  bool tether_taut = false;     // every routed segment taut
  bool drone_motors_on = true;
  bool pod_motors_on = true;

  // Kinematic pins: a pinned body ignores forces and keeps zero velocity
  // (test fixtures and guided maneuvers).
  bool drone_pinned = false;
  bool pod_pinned = false;

  TetherRouting routing;
  double drone_tension = 0.0;  // N on the drone-side free segment
  double pod_tension = 0.0;    // N on the pod-side free segment

  double initial_energy = -1.0;  // blow-up guard reference, set on first step
};

struct ControlInput {
  Vec2 drone_thrust;       // N, clamped to drone_max_thrust
  Vec2 pod_thrust;         // N, clamped to pod_max_thrust
  double winch_rate = 0.0; // m/s, positive releases tether
};

struct PDGains {
  double kp = 6.0;
  double kd = 4.5;
};

// Builds the initial airborne state: drone at sim.drone_start, pod hanging
// sim.initial_free_length below it, the rest of the tether spooled.
SystemState initial_state(const ScenarioConfig& config);

// One fixed-timestep semi-implicit Euler step. Throws InstabilityError when
// kinetic energy exceeds 10x the initial total mechanical energy.
SystemState step(const SystemState& state, const ControlInput& input,
                 const ScenarioConfig& config);

// Capstan feasibility of the current perched candidate state (drone motors
// off): pod weight fraction against the minimum counterweight for the
// current integer loop count and branch incline.
bool hold_check(const SystemState& state, const StabilityModel& model,
                const ScenarioConfig& config);

// PD position control with gravity and last-known tether-tension
// feedforward, saturated to the actuator limit.
Vec2 pd_thrust(const Vec2& pos, const Vec2& vel, const Vec2& target,
               const PDGains& gains, double mass, double gravity,
               const Vec2& tension_force, double max_thrust);

// Convenience wrapper producing a drone ControlInput toward a waypoint.
ControlInput waypoint_controller(const SystemState& state, const Vec2& target,
                                 const ControllerGains& gains,
                                 const ScenarioConfig& config);

// Mechanical energy (kinetic + gravitational, zero datum at y = 0).
double mechanical_energy(const SystemState& state,
                         const ScenarioConfig& config);

// Free tether length currently available to each side (material minus
// wrapped arc); with no contact, the single shared free length is returned
// in both fields.
struct FreeLengths {
  double drone_side = 0.0;
  double pod_side = 0.0;
};
FreeLengths free_lengths(const SystemState& state,
                         const ScenarioConfig& config);

}  // namespace perch

#endif  // PERCH_DYNAMICS_HPP_
