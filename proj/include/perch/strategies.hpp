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

#ifndef PERCH_STRATEGIES_HPP_
#define PERCH_STRATEGIES_HPP_

#include <string>
#include <vector>

#include "perch/dynamics.hpp"
#include "perch/energy.hpp"
#include "perch/scenario.hpp"

namespace perch {

enum class Outcome { kPerched, kAirborne, kSlipped, kTimeout, kAborted };

std::string to_string(Outcome o);

struct StrategyPhase {
  std::string name;
  double entered_at = 0.0;   // s
  double duration = 0.0;     // s
  double drone_mah = 0.0;
  double pod_mah = 0.0;
  double drone_joules = 0.0;
  double pod_joules = 0.0;
};

struct TraceRow {
  double t = 0.0;
  Vec2 drone_pos, pod_pos;
  double wrap_angle = 0.0;
  double spooled = 0.0;
  bool taut = false;
  double tension = 0.0;  // max of the two side tensions
};

struct StrategyTrace {
  std::vector<StrategyPhase> phases;
  Outcome outcome = Outcome::kAborted;
  int final_loops = 0;
  double drone_total_mah = 0.0;
  double pod_total_mah = 0.0;
  std::vector<std::string> warnings;
  std::string diagnostic;          // set on ABORTED
  std::vector<TraceRow> state_trace;  // decimated
  SystemState final_state;
};

// Canonical perched state with the requested loop count: both bodies
// hanging taut on their own side of the wrap, motors off, at rest.
SystemState make_perched_state(const ScenarioConfig& config, int loops);

StrategyTrace run_duo_perch(const ScenarioConfig& config);
StrategyTrace run_solo_perch(const ScenarioConfig& config);
enum class DisentangleMethod { kWinding, kPropeller };
StrategyTrace run_duo_disentangle(const ScenarioConfig& config,
                                  DisentangleMethod method);
StrategyTrace run_solo_disentangle(const ScenarioConfig& config);

// Dispatch on config.strategy.
StrategyTrace run_strategy(const ScenarioConfig& config);

std::string trace_to_json(const StrategyTrace& trace);
// CSV: t,drone_x,drone_y,pod_x,pod_y,wrap_angle,spooled,taut,tension
std::string trace_to_csv(const StrategyTrace& trace);

}  // namespace perch

#endif  // PERCH_STRATEGIES_HPP_
