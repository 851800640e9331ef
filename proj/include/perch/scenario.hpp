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

#ifndef PERCH_SCENARIO_HPP_
#define PERCH_SCENARIO_HPP_

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace perch {

// All quantities are strict SI (m, kg, s, N, J, rad, W, V). Colloquial units
// (g, mm, mAh, deg) are converted at I/O boundaries only.

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDefaultGravity = 9.81;

inline constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
inline constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BranchSpec {
  double diameter = 0.0732;       // m, test branch of the reference platform
  double incline_angle = 0.0;     // rad from horizontal, [0, pi/2)
  double center_height = 2.0;     // m above the world origin
  double friction_coeff = 0.18;   // tether-on-bark Coulomb coefficient
};

struct TetherSpec {
  double total_length = 4.0;      // m
  double diameter = 0.001;        // m, 1 mm polyester line
  double linear_density = 0.001;  // kg/m
};

struct VehicleSpec {
  double drone_mass = 1.008;        // kg
  double pod_mass = 0.508;          // kg
  double ring_mass = 0.102;         // kg, slewing ring on the drone
  double drone_max_thrust = 30.0;   // N
  double pod_max_thrust = 8.0;      // N, estimate; not stated for the platform
  // Prop-guard circumscribed radius and pod bounding box are engineering
  // estimates (the platform values are not published).
  double drone_body_radius = 0.30;  // m
  double pod_length = 0.20;         // m
  double pod_width = 0.12;          // m
};

struct StabilityParams {
  // Branch-angle attenuation of effective friction; see capstan module.
  double angle_sensitivity = 0.15;
  double critical_single_loop_angle = deg_to_rad(30.0);  // rad
};

struct PowerParams {
  double reference_mass = 1.008;   // kg, bare drone
  double reference_power = 180.0;  // W at hover for reference_mass
  double mass_exponent = 1.5;      // actuator-disk momentum theory default
  double avionics_power = 0.0;     // W drawn while perched
  double battery_voltage = 14.8;   // V, 4S pack nominal
  double motor_efficiency = 0.7;   // electrical-to-mechanical
};

struct ManeuverCostTable {
  // Measured charges for the reference platform, mAh.
  double first_loop_mah = 60.0;
  double second_loop_mah = 49.0;
  double pod_propeller_mah = 11.0;
  double winding_mah = 0.73;
};

struct SpoolParams {
  double core_radius = 0.010;     // m, artifact constant (not published)
  double spool_width = 0.020;     // m
  int max_turns = 120;
  double winch_rate_max = 0.5;    // m/s, servo-class estimate
};

struct ControllerGains {
  double drone_kp = 6.0;
  double drone_kd = 4.5;
  double pod_kp = 8.0;
  double pod_kd = 5.0;
};

enum class EnergyAccounting { kTable, kIntegrated };

struct SimParams {
  double damping = 0.05;           // N s/m linear drag per body
  EnergyAccounting energy_accounting = EnergyAccounting::kTable;
  int target_loops = 2;            // wrapping loops the perch strategies aim for
  double clearance = 0.05;         // m safety margin for standoff distances
  std::array<double, 2> drone_start = {-1.2, 2.0};  // m, world frame
  double initial_free_length = 0.5;                 // m of tether off the spool
  double trace_decimation = 0.01;                   // s between trace rows
};

enum class Strategy {
  kDuoPerch,
  kSoloPerch,
  kDuoDisentangleWinding,
  kDuoDisentanglePropeller,
  kSoloDisentangle,
};

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

struct ScenarioConfig {
  BranchSpec branch;
  TetherSpec tether;
  VehicleSpec vehicles;
  StabilityParams stability;
  PowerParams power;
  ManeuverCostTable costs;
  SpoolParams spool;
  ControllerGains controller_gains;
  SimParams sim;
  double gravity = kDefaultGravity;
  double timestep = 0.001;        // s
  double max_sim_time = 120.0;    // s
  Strategy strategy = Strategy::kDuoPerch;
  long seed = 0;

  double total_mass() const {
    return vehicles.drone_mass + vehicles.pod_mass + vehicles.ring_mass;
  }
  // Everything hanging on the drone side of the wrap.
  double drone_side_mass() const {
    return vehicles.drone_mass + vehicles.ring_mass;
  }
  // Pod weight over total take-off weight; the counterweight ratio the
  // capstan feasibility check uses.
  double pod_weight_fraction() const {
    return vehicles.pod_mass / total_mass();
  }
};

struct Violation {
  std::string field;
  std::string message;
};

// Returns every violated invariant, not just the first. Empty means valid.
std::vector<Violation> validate(const ScenarioConfig& config);

// Loads a scenario JSON file; omitted fields keep the reference-platform
// defaults above. Unknown keys are validation errors (typo guard). Throws
// ParseError on malformed JSON, ValidationError on invariant violations.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig scenario_from_json_text(const std::string& text);

std::string scenario_to_json_text(const ScenarioConfig& config);
void save_scenario(const ScenarioConfig& config, const std::string& path);

// JSON document describing the accepted keys, types and defaults.
std::string scenario_schema_json();

}  // namespace perch

#endif  // PERCH_SCENARIO_HPP_
