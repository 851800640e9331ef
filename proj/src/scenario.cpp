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

#include "perch/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace perch {

using nlohmann::json;

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::kDuoPerch: return "duo_perch";
    case Strategy::kSoloPerch: return "solo_perch";
    case Strategy::kDuoDisentangleWinding: return "duo_disentangle_winding";
    case Strategy::kDuoDisentanglePropeller:
      return "duo_disentangle_propeller";
    case Strategy::kSoloDisentangle: return "solo_disentangle";
  }
  return "duo_perch";
}

Strategy strategy_from_string(const std::string& name) {
  if (name == "duo_perch") return Strategy::kDuoPerch;
  if (name == "solo_perch") return Strategy::kSoloPerch;
  if (name == "duo_disentangle_winding")
    return Strategy::kDuoDisentangleWinding;
  if (name == "duo_disentangle_propeller")
    return Strategy::kDuoDisentanglePropeller;
  if (name == "solo_disentangle") return Strategy::kSoloDisentangle;
  throw ValidationError("strategy: unknown strategy '" + name + "'");
}

namespace {

std::string accounting_to_string(EnergyAccounting a) {
  return a == EnergyAccounting::kTable ? "table" : "integrated";
}

EnergyAccounting accounting_from_string(const std::string& name) {
  if (name == "table") return EnergyAccounting::kTable;
  if (name == "integrated") return EnergyAccounting::kIntegrated;
  throw ValidationError("sim.energy_accounting: unknown mode '" + name + "'");
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["branch"] = {{"diameter", c.branch.diameter},
                 {"incline_angle", c.branch.incline_angle},
                 {"center_height", c.branch.center_height},
                 {"friction_coeff", c.branch.friction_coeff}};
  j["tether"] = {{"total_length", c.tether.total_length},
                 {"diameter", c.tether.diameter},
                 {"linear_density", c.tether.linear_density}};
  j["vehicles"] = {{"drone_mass", c.vehicles.drone_mass},
                   {"pod_mass", c.vehicles.pod_mass},
                   {"ring_mass", c.vehicles.ring_mass},
                   {"drone_max_thrust", c.vehicles.drone_max_thrust},
                   {"pod_max_thrust", c.vehicles.pod_max_thrust},
                   {"drone_body_radius", c.vehicles.drone_body_radius},
                   {"pod_length", c.vehicles.pod_length},
                   {"pod_width", c.vehicles.pod_width}};
  j["stability"] = {
      {"angle_sensitivity", c.stability.angle_sensitivity},
      {"critical_single_loop_angle", c.stability.critical_single_loop_angle}};
  j["power"] = {{"reference_mass", c.power.reference_mass},
                {"reference_power", c.power.reference_power},
                {"mass_exponent", c.power.mass_exponent},
                {"avionics_power", c.power.avionics_power},
                {"battery_voltage", c.power.battery_voltage},
                {"motor_efficiency", c.power.motor_efficiency}};
  j["costs"] = {{"first_loop_mah", c.costs.first_loop_mah},
                {"second_loop_mah", c.costs.second_loop_mah},
                {"pod_propeller_mah", c.costs.pod_propeller_mah},
                {"winding_mah", c.costs.winding_mah}};
  j["spool"] = {{"core_radius", c.spool.core_radius},
                {"spool_width", c.spool.spool_width},
                {"max_turns", c.spool.max_turns},
                {"winch_rate_max", c.spool.winch_rate_max}};
  j["controller_gains"] = {{"drone_kp", c.controller_gains.drone_kp},
                           {"drone_kd", c.controller_gains.drone_kd},
                           {"pod_kp", c.controller_gains.pod_kp},
                           {"pod_kd", c.controller_gains.pod_kd}};
  j["sim"] = {{"damping", c.sim.damping},
              {"energy_accounting", accounting_to_string(c.sim.energy_accounting)},
              {"target_loops", c.sim.target_loops},
              {"clearance", c.sim.clearance},
              {"drone_start", {c.sim.drone_start[0], c.sim.drone_start[1]}},
              {"initial_free_length", c.sim.initial_free_length},
              {"trace_decimation", c.sim.trace_decimation}};
  j["gravity"] = c.gravity;
  j["timestep"] = c.timestep;
  j["max_sim_time"] = c.max_sim_time;
  j["strategy"] = to_string(c.strategy);
  j["seed"] = c.seed;
  return j;
}

// Applies overrides from `src` onto the default-valued `dst`, rejecting keys
// the schema does not define.
void merge_checked(json& dst, const json& src, const std::string& path) {
  for (auto it = src.begin(); it != src.end(); ++it) {
    const std::string key_path = path.empty() ? it.key() : path + "." + it.key();
    if (!dst.contains(it.key())) {
      throw ValidationError(key_path + ": unknown key");
    }
    json& slot = dst[it.key()];
    if (slot.is_object()) {
      if (!it->is_object()) {
        throw ValidationError(key_path + ": expected an object");
      }
      merge_checked(slot, *it, key_path);
    } else {
      if (it->is_object()) {
        throw ValidationError(key_path + ": unexpected object");
      }
      slot = *it;
    }
  }
}

double num(const json& j, const char* key, const std::string& section) {
  const json& v = j.at(key);
  if (!v.is_number()) {
    throw ValidationError(section + "." + key + ": expected a number");
  }
  return v.get<double>();
}

ScenarioConfig config_from_json(const json& merged) {
  ScenarioConfig c;
  const json& b = merged.at("branch");
  c.branch.diameter = num(b, "diameter", "branch");
  c.branch.incline_angle = num(b, "incline_angle", "branch");
  c.branch.center_height = num(b, "center_height", "branch");
  c.branch.friction_coeff = num(b, "friction_coeff", "branch");
  const json& t = merged.at("tether");
  c.tether.total_length = num(t, "total_length", "tether");
  c.tether.diameter = num(t, "diameter", "tether");
  c.tether.linear_density = num(t, "linear_density", "tether");
  const json& v = merged.at("vehicles");
  c.vehicles.drone_mass = num(v, "drone_mass", "vehicles");
  c.vehicles.pod_mass = num(v, "pod_mass", "vehicles");
  c.vehicles.ring_mass = num(v, "ring_mass", "vehicles");
  c.vehicles.drone_max_thrust = num(v, "drone_max_thrust", "vehicles");
  c.vehicles.pod_max_thrust = num(v, "pod_max_thrust", "vehicles");
  c.vehicles.drone_body_radius = num(v, "drone_body_radius", "vehicles");
  c.vehicles.pod_length = num(v, "pod_length", "vehicles");
  c.vehicles.pod_width = num(v, "pod_width", "vehicles");
  const json& st = merged.at("stability");
  c.stability.angle_sensitivity = num(st, "angle_sensitivity", "stability");
  c.stability.critical_single_loop_angle =
      num(st, "critical_single_loop_angle", "stability");
  const json& p = merged.at("power");
  c.power.reference_mass = num(p, "reference_mass", "power");
  c.power.reference_power = num(p, "reference_power", "power");
  c.power.mass_exponent = num(p, "mass_exponent", "power");
  c.power.avionics_power = num(p, "avionics_power", "power");
  c.power.battery_voltage = num(p, "battery_voltage", "power");
  c.power.motor_efficiency = num(p, "motor_efficiency", "power");
  const json& co = merged.at("costs");
  c.costs.first_loop_mah = num(co, "first_loop_mah", "costs");
  c.costs.second_loop_mah = num(co, "second_loop_mah", "costs");
  c.costs.pod_propeller_mah = num(co, "pod_propeller_mah", "costs");
  c.costs.winding_mah = num(co, "winding_mah", "costs");
  const json& sp = merged.at("spool");
  c.spool.core_radius = num(sp, "core_radius", "spool");
  c.spool.spool_width = num(sp, "spool_width", "spool");
  c.spool.max_turns = static_cast<int>(num(sp, "max_turns", "spool"));
  c.spool.winch_rate_max = num(sp, "winch_rate_max", "spool");
  const json& g = merged.at("controller_gains");
  c.controller_gains.drone_kp = num(g, "drone_kp", "controller_gains");
  c.controller_gains.drone_kd = num(g, "drone_kd", "controller_gains");
  c.controller_gains.pod_kp = num(g, "pod_kp", "controller_gains");
  c.controller_gains.pod_kd = num(g, "pod_kd", "controller_gains");
  const json& s = merged.at("sim");
  c.sim.damping = num(s, "damping", "sim");
  c.sim.energy_accounting =
      accounting_from_string(s.at("energy_accounting").get<std::string>());
  c.sim.target_loops = static_cast<int>(num(s, "target_loops", "sim"));
  c.sim.clearance = num(s, "clearance", "sim");
  const json& ds = s.at("drone_start");
  if (!ds.is_array() || ds.size() != 2) {
    throw ValidationError("sim.drone_start: expected [x, y]");
  }
  c.sim.drone_start = {ds[0].get<double>(), ds[1].get<double>()};
  c.sim.initial_free_length = num(s, "initial_free_length", "sim");
  c.sim.trace_decimation = num(s, "trace_decimation", "sim");
  c.gravity = num(merged, "gravity", "");
  c.timestep = num(merged, "timestep", "");
  c.max_sim_time = num(merged, "max_sim_time", "");
  c.strategy = strategy_from_string(merged.at("strategy").get<std::string>());
  c.seed = merged.at("seed").get<long>();
  return c;
}

}  // namespace

std::vector<Violation> validate(const ScenarioConfig& c) {
  std::vector<Violation> out;
  auto require = [&out](bool ok, const char* field, const std::string& msg) {
    if (!ok) out.push_back({field, msg});
  };
  require(c.branch.diameter > 0.0, "branch.diameter", "must be > 0");
  require(c.branch.incline_angle >= 0.0 && c.branch.incline_angle < kPi / 2.0,
          "branch.incline_angle", "must lie in [0, pi/2)");
  require(c.branch.friction_coeff >= 0.0, "branch.friction_coeff",
          "must be >= 0");
  require(c.tether.total_length > 0.0, "tether.total_length", "must be > 0");
  require(c.tether.diameter > 0.0, "tether.diameter", "must be > 0");
  require(c.vehicles.drone_mass > 0.0, "vehicles.drone_mass", "must be > 0");
  require(c.vehicles.pod_mass > 0.0, "vehicles.pod_mass", "must be > 0");
  require(c.vehicles.ring_mass > 0.0, "vehicles.ring_mass", "must be > 0");
  require(c.vehicles.drone_max_thrust > c.total_mass() * c.gravity,
          "vehicles.drone_max_thrust",
          "system cannot hover: max thrust below total weight");
  require(c.vehicles.drone_body_radius > 0.0, "vehicles.drone_body_radius",
          "must be > 0");
  require(c.stability.critical_single_loop_angle > 0.0 &&
              c.stability.critical_single_loop_angle <= kPi / 2.0,
          "stability.critical_single_loop_angle", "must lie in (0, pi/2]");
  require(c.power.reference_power > 0.0, "power.reference_power",
          "must be > 0");
  require(c.power.mass_exponent > 0.0, "power.mass_exponent", "must be > 0");
  require(c.power.motor_efficiency > 0.0 && c.power.motor_efficiency <= 1.0,
          "power.motor_efficiency", "must lie in (0, 1]");
  require(c.power.battery_voltage > 0.0, "power.battery_voltage",
          "must be > 0");
  require(c.costs.first_loop_mah >= 0.0 && c.costs.second_loop_mah >= 0.0 &&
              c.costs.pod_propeller_mah >= 0.0 && c.costs.winding_mah >= 0.0,
          "costs", "charges must be >= 0");
  require(c.spool.core_radius > 0.0, "spool.core_radius", "must be > 0");
  require(c.spool.spool_width >= c.tether.diameter, "spool.spool_width",
          "must fit at least one turn per layer");
  require(c.spool.max_turns > 0, "spool.max_turns", "must be > 0");
  require(c.gravity > 0.0, "gravity", "must be > 0");
  require(c.timestep > 0.0, "timestep", "must be > 0");
  require(c.max_sim_time > c.timestep, "max_sim_time",
          "must exceed the timestep");
  require(c.sim.target_loops >= 0, "sim.target_loops", "must be >= 0");
  require(c.sim.initial_free_length > 0.0 &&
              c.sim.initial_free_length < c.tether.total_length,
          "sim.initial_free_length", "must lie in (0, total_length)");
  require(c.sim.trace_decimation >= c.timestep, "sim.trace_decimation",
          "must be >= timestep");
  return out;
}

ScenarioConfig scenario_from_json_text(const std::string& text) {
  json overrides;
  try {
    overrides = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario JSON parse error: ") + e.what());
  }
  if (!overrides.is_object()) {
    throw ParseError("scenario JSON root must be an object");
  }
  json merged = config_to_json(ScenarioConfig{});
  merge_checked(merged, overrides, "");
  ScenarioConfig config = config_from_json(merged);
  std::vector<Violation> violations = validate(config);
  if (!violations.empty()) {
    std::ostringstream msg;
    msg << "invalid scenario:";
    for (const Violation& v : violations) {
      msg << "\n  " << v.field << ": " << v.message;
    }
    throw ValidationError(msg.str());
  }
  return config;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open scenario file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_json_text(buf.str());
}

std::string scenario_to_json_text(const ScenarioConfig& config) {
  return config_to_json(config).dump(2) + "\n";
}

void save_scenario(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write scenario file: " + path);
  out << scenario_to_json_text(config);
}

namespace {

json schema_node(const json& value) {
  json node;
  if (value.is_object()) {
    node["type"] = "object";
    json props = json::object();
    for (auto it = value.begin(); it != value.end(); ++it) {
      props[it.key()] = schema_node(*it);
    }
    node["properties"] = props;
    node["additionalProperties"] = false;
  } else if (value.is_string()) {
    node["type"] = "string";
    node["default"] = value;
  } else if (value.is_array()) {
    node["type"] = "array";
    node["default"] = value;
  } else if (value.is_number_integer()) {
    node["type"] = "integer";
    node["default"] = value;
  } else {
    node["type"] = "number";
    node["default"] = value;
  }
  return node;
}

}  // namespace

std::string scenario_schema_json() {
  json schema = schema_node(config_to_json(ScenarioConfig{}));
  schema["$comment"] =
      "Scenario file schema. Units are SI (m, kg, s, N, rad, W, V) except "
      "charge table entries in mAh. All keys optional; omitted fields keep "
      "the reference-platform defaults. drone_body_radius, pod dimensions, "
      "pod_max_thrust, spool geometry and winch rate are engineering "
      "estimates, not published values.";
  schema["properties"]["strategy"]["enum"] = {
      "duo_perch", "solo_perch", "duo_disentangle_winding",
      "duo_disentangle_propeller", "solo_disentangle"};
  schema["properties"]["sim"]["properties"]["energy_accounting"]["enum"] = {
      "table", "integrated"};
  return schema.dump(2) + "\n";
}

}  // namespace perch
