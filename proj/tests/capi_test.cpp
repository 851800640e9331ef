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
#include <cstdio>
#include <string>

#include "json.hpp"
#include "perchsim.h"

namespace {

std::string take(char* s) {
  std::string out = s != nullptr ? s : "";
  ps_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("scenario lifecycle and JSON round-trip") {
  ps_scenario* sc = nullptr;
  REQUIRE(ps_scenario_default(&sc) == PS_OK);
  char* text = nullptr;
  REQUIRE(ps_scenario_to_json(sc, &text) == PS_OK);
  std::string json_text = take(text);
  ps_scenario* back = nullptr;
  REQUIRE(ps_scenario_from_json(json_text.c_str(), &back) == PS_OK);
  char* text2 = nullptr;
  REQUIRE(ps_scenario_to_json(back, &text2) == PS_OK);
  CHECK(take(text2) == json_text);
  ps_scenario_free(back);

  std::string path = "capi_roundtrip_test.json";
  REQUIRE(ps_scenario_save(sc, path.c_str()) == PS_OK);
  ps_scenario* loaded = nullptr;
  REQUIRE(ps_scenario_load(path.c_str(), &loaded) == PS_OK);
  std::remove(path.c_str());
  ps_scenario_free(loaded);
  ps_scenario_free(sc);
}

TEST_CASE("error codes and last-error messages") {
  ps_scenario* sc = nullptr;
  CHECK(ps_scenario_from_json("{bad", &sc) == PS_ERR_PARSE);
  CHECK(std::string(ps_last_error()).find("parse") != std::string::npos);
  CHECK(ps_scenario_from_json(R"({"branch": {"nope": 1}})", &sc) ==
        PS_ERR_VALIDATION);
  CHECK(std::string(ps_last_error()).find("branch.nope") != std::string::npos);
  CHECK(ps_scenario_load("does_not_exist_0x9.json", &sc) != PS_OK);
  CHECK(ps_scenario_default(nullptr) == PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_simulate(nullptr, nullptr, nullptr, nullptr) ==
        PS_ERR_INVALID_ARGUMENT);
  double out = 0.0;
  REQUIRE(ps_scenario_default(&sc) == PS_OK);
  CHECK(ps_min_counterweight_ratio(sc, 0, 0.0, &out) ==
        PS_ERR_INVALID_ARGUMENT);
  CHECK(ps_hover_power(sc, -1.0, &out) == PS_ERR_INVALID_ARGUMENT);
  ps_scenario_free(sc);
}

TEST_CASE("analytic wrappers agree with known values") {
  ps_scenario* sc = nullptr;
  REQUIRE(ps_scenario_default(&sc) == PS_OK);
  double ratio = 0.0;
  REQUIRE(ps_min_counterweight_ratio(sc, 1, 0.0, &ratio) == PS_OK);
  CHECK(ratio == doctest::Approx(std::exp(-0.18 * 2.0 * 3.14159265358979)));
  int feasible = -1;
  REQUIRE(ps_hold_feasible(sc, 1, 0.0, &feasible) == PS_OK);
  CHECK(feasible == 0);
  REQUIRE(ps_hold_feasible(sc, 2, 0.0, &feasible) == PS_OK);
  CHECK(feasible == 1);
  double dist = 0.0;
  REQUIRE(ps_critical_distance(sc, 0, &dist) == PS_OK);
  CHECK(dist == doctest::Approx(0.3866));
  double power = 0.0;
  REQUIRE(ps_hover_power(sc, 1.008, &power) == PS_OK);
  CHECK(power == doctest::Approx(180.0));
  double frac = 0.0;
  REQUIRE(ps_break_even_idle_fraction(sc, 0.0, 3600.0, &frac) == PS_OK);
  CHECK(frac == doctest::Approx(0.508).epsilon(1e-3));
  double len = 0.0, turns = 0.0;
  REQUIRE(ps_spool_released_length(sc, 10.0, &len) == PS_OK);
  REQUIRE(ps_spool_turns_for_length(sc, len, &turns) == PS_OK);
  CHECK(turns == doctest::Approx(10.0).epsilon(1e-9));
  ps_scenario_free(sc);
}

TEST_CASE("simulation through the C surface") {
  ps_scenario* sc = nullptr;
  REQUIRE(ps_scenario_from_json(R"({"strategy": "duo_perch"})", &sc) == PS_OK);
  int outcome = -1;
  char* trace_json = nullptr;
  char* trace_csv = nullptr;
  REQUIRE(ps_simulate(sc, &outcome, &trace_json, &trace_csv) == PS_OK);
  CHECK(outcome == PS_OUTCOME_PERCHED);
  nlohmann::json j = nlohmann::json::parse(take(trace_json));
  CHECK(j["final_loops"] == 2);
  std::string csv = take(trace_csv);
  CHECK(csv.rfind("t,", 0) == 0);
  ps_scenario_free(sc);

  char* schema = nullptr;
  REQUIRE(ps_schema_json(&schema) == PS_OK);
  CHECK(nlohmann::json::parse(take(schema)).contains("properties"));
}
