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

#include <cstdio>
#include <string>

#include "json.hpp"
#include "perch/scenario.hpp"

using namespace perch;

TEST_CASE("defaults describe the reference platform") {
  ScenarioConfig c;
  CHECK(c.vehicles.drone_mass == doctest::Approx(1.008));
  CHECK(c.vehicles.pod_mass == doctest::Approx(0.508));
  CHECK(c.vehicles.ring_mass == doctest::Approx(0.102));
  CHECK(c.total_mass() == doctest::Approx(1.618));
  CHECK(c.drone_side_mass() == doctest::Approx(1.110));
  CHECK(c.pod_weight_fraction() == doctest::Approx(0.508 / 1.618));
  CHECK(c.branch.diameter == doctest::Approx(0.0732));
  CHECK(c.branch.friction_coeff == doctest::Approx(0.18));
  CHECK(c.tether.total_length == doctest::Approx(4.0));
  CHECK(c.costs.first_loop_mah == doctest::Approx(60.0));
  CHECK(c.costs.second_loop_mah == doctest::Approx(49.0));
  CHECK(c.costs.pod_propeller_mah == doctest::Approx(11.0));
  CHECK(c.costs.winding_mah == doctest::Approx(0.73));
  CHECK(c.sim.target_loops == 2);
  CHECK(c.strategy == Strategy::kDuoPerch);
  CHECK(validate(c).empty());
}

TEST_CASE("partial JSON overrides merge onto defaults") {
  ScenarioConfig c = scenario_from_json_text(
      R"({"branch": {"diameter": 0.05}, "strategy": "solo_perch"})");
  CHECK(c.branch.diameter == doctest::Approx(0.05));
  CHECK(c.branch.friction_coeff == doctest::Approx(0.18));  // untouched
  CHECK(c.strategy == Strategy::kSoloPerch);
}

TEST_CASE("unknown keys are rejected with a dotted path") {
  CHECK_THROWS_WITH_AS(
      scenario_from_json_text(R"({"branch": {"diamter": 0.05}})"),
      doctest::Contains("branch.diamter"), ValidationError);
  CHECK_THROWS_AS(scenario_from_json_text(R"({"bogus_section": {}})"),
                  ValidationError);
}

TEST_CASE("malformed JSON raises ParseError") {
  CHECK_THROWS_AS(scenario_from_json_text("{nope"), ParseError);
  CHECK_THROWS_AS(scenario_from_json_text("[1, 2]"), ParseError);
}

TEST_CASE("validation reports every violation") {
  CHECK_THROWS_WITH_AS(
      scenario_from_json_text(
          R"({"branch": {"diameter": -1}, "tether": {"total_length": 0}})"),
      doctest::Contains("tether.total_length"), ValidationError);
}

TEST_CASE("underpowered drone is rejected") {
  CHECK_THROWS_WITH_AS(
      scenario_from_json_text(R"({"vehicles": {"drone_max_thrust": 10.0}})"),
      doctest::Contains("drone_max_thrust"), ValidationError);
}

TEST_CASE("target_loops zero is allowed, negative is not") {
  ScenarioConfig c =
      scenario_from_json_text(R"({"sim": {"target_loops": 0}})");
  CHECK(c.sim.target_loops == 0);
  CHECK_THROWS_AS(scenario_from_json_text(R"({"sim": {"target_loops": -1}})"),
                  ValidationError);
}

TEST_CASE("strategy names round-trip") {
  for (Strategy s :
       {Strategy::kDuoPerch, Strategy::kSoloPerch,
        Strategy::kDuoDisentangleWinding, Strategy::kDuoDisentanglePropeller,
        Strategy::kSoloDisentangle}) {
    CHECK(strategy_from_string(to_string(s)) == s);
  }
  CHECK_THROWS_AS(strategy_from_string("hover_forever"), ValidationError);
}

TEST_CASE("save and load round-trip preserves every field") {
  ScenarioConfig c;
  c.branch.diameter = 0.061;
  c.branch.incline_angle = deg_to_rad(12.0);
  c.vehicles.pod_mass = 0.444;
  c.sim.energy_accounting = EnergyAccounting::kIntegrated;
  c.strategy = Strategy::kDuoDisentanglePropeller;
  c.seed = 77;
  std::string path = "scenario_roundtrip_test.json";
  save_scenario(c, path);
  ScenarioConfig back = load_scenario(path);
  std::remove(path.c_str());
  CHECK(scenario_to_json_text(back) == scenario_to_json_text(c));
}

TEST_CASE("schema lists the top-level sections and enums") {
  nlohmann::json schema = nlohmann::json::parse(scenario_schema_json());
  CHECK(schema["properties"].contains("branch"));
  CHECK(schema["properties"].contains("vehicles"));
  CHECK(schema["properties"].contains("sim"));
  CHECK(schema["properties"]["strategy"]["enum"].size() == 5);
  CHECK(schema["additionalProperties"] == false);
}
