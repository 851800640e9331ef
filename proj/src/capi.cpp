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

#include "perchsim.h"

#include <cstring>
#include <string>

#include "json.hpp"
#include "perch/capstan.hpp"
#include "perch/dynamics.hpp"
#include "perch/energy.hpp"
#include "perch/geometry.hpp"
#include "perch/scenario.hpp"
#include "perch/strategies.hpp"
#include "perch/winding.hpp"

struct ps_scenario {
  perch::ScenarioConfig config;
};

namespace {

thread_local std::string g_last_error = "ok";

ps_status fail(ps_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Maps C++ exceptions from the core onto status codes.
template <typename Fn>
ps_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const perch::ParseError& e) {
    return fail(PS_ERR_PARSE, e.what());
  } catch (const perch::ValidationError& e) {
    return fail(PS_ERR_VALIDATION, e.what());
  } catch (const perch::InstabilityError& e) {
    return fail(PS_ERR_SIMULATION, e.what());
  } catch (const std::domain_error& e) {
    return fail(PS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::out_of_range& e) {
    return fail(PS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PS_ERR_INTERNAL, e.what());
  }
}

ps_status check_handle(const ps_scenario* sc) {
  if (sc == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null scenario");
  return PS_OK;
}

int outcome_code(perch::Outcome o) {
  switch (o) {
    case perch::Outcome::kPerched: return PS_OUTCOME_PERCHED;
    case perch::Outcome::kAirborne: return PS_OUTCOME_AIRBORNE;
    case perch::Outcome::kSlipped: return PS_OUTCOME_SLIPPED;
    case perch::Outcome::kTimeout: return PS_OUTCOME_TIMEOUT;
    case perch::Outcome::kAborted: return PS_OUTCOME_ABORTED;
  }
  return PS_OUTCOME_ABORTED;
}

}  // namespace

extern "C" {

const char* ps_last_error(void) { return g_last_error.c_str(); }

void ps_string_free(char* s) { delete[] s; }

ps_status ps_scenario_default(ps_scenario** out) {
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = new ps_scenario{perch::ScenarioConfig{}};
    return PS_OK;
  });
}

ps_status ps_scenario_from_json(const char* text, ps_scenario** out) {
  if (text == nullptr || out == nullptr) {
    return fail(PS_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&] {
    *out = new ps_scenario{perch::scenario_from_json_text(text)};
    return PS_OK;
  });
}

ps_status ps_scenario_load(const char* path, ps_scenario** out) {
  if (path == nullptr || out == nullptr) {
    return fail(PS_ERR_INVALID_ARGUMENT, "null argument");
  }
  return guarded([&]() -> ps_status {
    try {
      *out = new ps_scenario{perch::load_scenario(path)};
    } catch (const std::ios_base::failure& e) {
      return fail(PS_ERR_IO, e.what());
    } catch (const std::runtime_error& e) {
      // load_scenario reports unreadable files as runtime_error.
      if (std::string(e.what()).find("cannot open") != std::string::npos) {
        return fail(PS_ERR_IO, e.what());
      }
      throw;
    }
    return PS_OK;
  });
}

ps_status ps_scenario_to_json(const ps_scenario* sc, char** out) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = dup_string(perch::scenario_to_json_text(sc->config));
    return PS_OK;
  });
}

ps_status ps_scenario_save(const ps_scenario* sc, const char* path) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  if (path == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null path");
  return guarded([&]() -> ps_status {
    try {
      perch::save_scenario(sc->config, path);
    } catch (const std::runtime_error& e) {
      return fail(PS_ERR_IO, e.what());
    }
    return PS_OK;
  });
}

ps_status ps_schema_json(char** out) {
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = dup_string(perch::scenario_schema_json());
    return PS_OK;
  });
}

void ps_scenario_free(ps_scenario* sc) { delete sc; }

ps_status ps_simulate(const ps_scenario* sc, int* out_outcome,
                      char** out_trace_json, char** out_trace_csv) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  return guarded([&] {
    perch::StrategyTrace trace = perch::run_strategy(sc->config);
    if (out_outcome != nullptr) *out_outcome = outcome_code(trace.outcome);
    if (out_trace_json != nullptr) {
      *out_trace_json = dup_string(perch::trace_to_json(trace));
    }
    if (out_trace_csv != nullptr) {
      *out_trace_csv = dup_string(perch::trace_to_csv(trace));
    }
    return PS_OK;
  });
}

ps_status ps_min_counterweight_ratio(const ps_scenario* sc, int loops,
                                     double incline_rad, double* out) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = perch::min_counterweight_ratio(
        perch::stability_model_from(sc->config), loops, incline_rad);
    return PS_OK;
  });
}

ps_status ps_hold_feasible(const ps_scenario* sc, int loops,
                           double incline_rad, int* out) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = perch::is_feasible(perch::stability_model_from(sc->config),
                              sc->config.pod_weight_fraction(), loops,
                              incline_rad)
               ? 1
               : 0;
    return PS_OK;
  });
}

ps_status ps_critical_distance(const ps_scenario* sc, int for_pod,
                               double* out) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    const perch::VehicleSpec& v = sc->config.vehicles;
    double body = for_pod != 0
                      ? 0.5 * std::hypot(v.pod_length, v.pod_width)
                      : v.drone_body_radius;
    *out = perch::critical_distance(sc->config.branch.diameter,
                                    {body, sc->config.sim.clearance});
    return PS_OK;
  });
}

ps_status ps_hover_power(const ps_scenario* sc, double mass, double* out) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = perch::hover_power(sc->config.power, mass);
    return PS_OK;
  });
}

ps_status ps_break_even_idle_fraction(const ps_scenario* sc,
                                      double maneuver_joules,
                                      double mission_time, double* out) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = perch::break_even_idle_fraction(
        sc->config.power, sc->config.vehicles.drone_mass,
        sc->config.total_mass(), maneuver_joules, mission_time);
    return PS_OK;
  });
}

ps_status ps_calibrated_mass_exponent(double* out) {
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = perch::paper_calibrated_exponent();
    return PS_OK;
  });
}

ps_status ps_spool_released_length(const ps_scenario* sc, double turns,
                                   double* out) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = perch::released_length(perch::spool_spec_from(sc->config), turns);
    return PS_OK;
  });
}

ps_status ps_spool_turns_for_length(const ps_scenario* sc, double length,
                                    double* out) {
  if (ps_status s = check_handle(sc); s != PS_OK) return s;
  if (out == nullptr) return fail(PS_ERR_INVALID_ARGUMENT, "null output");
  return guarded([&] {
    *out = perch::turns_for_length(perch::spool_spec_from(sc->config), length);
    return PS_OK;
  });
}

}  // extern "C"
