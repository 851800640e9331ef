/* Copyright 2026 The Perchsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the tensile-perching simulator and its analytical models.
 *
 * All functions return a ps_status; outputs go through pointer arguments.
 * Strings returned via char** are heap-allocated and must be released with
 * ps_string_free(). On failure, ps_last_error() returns a thread-local
 * message describing what went wrong.
 */

#ifndef PERCHSIM_H_
#define PERCHSIM_H_

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ps_status {
  PS_OK = 0,
  PS_ERR_INVALID_ARGUMENT = 1, /* bad pointer, bad enum, domain error */
  PS_ERR_PARSE = 2,            /* malformed JSON */
  PS_ERR_VALIDATION = 3,       /* well-formed but inconsistent scenario */
  PS_ERR_IO = 4,               /* file not readable/writable */
  PS_ERR_SIMULATION = 5,       /* numerical blow-up during integration */
  PS_ERR_INTERNAL = 6
} ps_status;

typedef enum ps_outcome {
  PS_OUTCOME_PERCHED = 0,
  PS_OUTCOME_AIRBORNE = 1,
  PS_OUTCOME_SLIPPED = 2,
  PS_OUTCOME_TIMEOUT = 3,
  PS_OUTCOME_ABORTED = 4
} ps_outcome;

typedef struct ps_scenario ps_scenario; /* opaque */

/* Thread-local message for the most recent failure in this thread.
 * Valid until the next failing call; never NULL. */
const char* ps_last_error(void);

void ps_string_free(char* s);

/* ---- scenario lifecycle ---- */

/* Default scenario (all parameters at their built-in values). */
ps_status ps_scenario_default(ps_scenario** out);

/* Defaults overridden by the JSON object in `text` (partial objects are
 * merged; unknown keys are rejected). */
ps_status ps_scenario_from_json(const char* text, ps_scenario** out);

ps_status ps_scenario_load(const char* path, ps_scenario** out);

/* Full scenario serialized as pretty JSON. */
ps_status ps_scenario_to_json(const ps_scenario* sc, char** out);

ps_status ps_scenario_save(const ps_scenario* sc, const char* path);

/* JSON schema describing the scenario document. */
ps_status ps_schema_json(char** out);

void ps_scenario_free(ps_scenario* sc);

/* ---- simulation ---- */

/* Runs the scenario's strategy to completion.
 * Any output pointer may be NULL to skip that artifact.
 *   out_outcome     final ps_outcome
 *   out_trace_json  phases, energy totals, warnings (JSON text)
 *   out_trace_csv   decimated state history (CSV text) */
ps_status ps_simulate(const ps_scenario* sc, int* out_outcome,
                      char** out_trace_json, char** out_trace_csv);

/* ---- analytical models ---- */

/* Minimum counterweight-to-total weight ratio that holds `loops` full
 * tether wraps at branch incline `incline_rad`, using the scenario's
 * friction model. */
ps_status ps_min_counterweight_ratio(const ps_scenario* sc, int loops,
                                     double incline_rad, double* out);

/* 1 if the scenario's pod weight fraction holds `loops` wraps. */
ps_status ps_hold_feasible(const ps_scenario* sc, int loops,
                           double incline_rad, int* out);

/* Closest branch-center approach for the drone (or pod when for_pod != 0). */
ps_status ps_critical_distance(const ps_scenario* sc, int for_pod,
                               double* out);

/* Electrical hover power (W) for the given supported mass (kg). */
ps_status ps_hover_power(const ps_scenario* sc, double mass, double* out);

/* Smallest idle-time fraction at which carrying the pod saves energy.
 * maneuver_joules covers perch + disentangle; mission_time in seconds. */
ps_status ps_break_even_idle_fraction(const ps_scenario* sc,
                                      double maneuver_joules,
                                      double mission_time, double* out);

/* Hover-power mass exponent calibrated so the reference platform's
 * break-even idle fraction is 48.9%. */
ps_status ps_calibrated_mass_exponent(double* out);

/* Tether length (m) paid out after `turns` spool revolutions. */
ps_status ps_spool_released_length(const ps_scenario* sc, double turns,
                                   double* out);

/* Inverse of ps_spool_released_length. */
ps_status ps_spool_turns_for_length(const ps_scenario* sc, double length,
                                    double* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* PERCHSIM_H_ */
