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

#ifndef PERCH_CAPSTAN_HPP_
#define PERCH_CAPSTAN_HPP_

#include <vector>

#include "perch/scenario.hpp"

namespace perch {

// Static stability model for a tether wrapped n loops around an inclined
// branch. The minimum counterweight ratio follows the capstan equation
// r = exp(-mu_eff * 2*pi*n) with the effective friction attenuated by the
// branch incline, mu_eff = mu * (1 - k * sin(beta)). A single loop on a
// branch inclined at or beyond the critical angle slides axially regardless
// of counterweight; that failure mode is a hard rule, not friction running
// out.
struct StabilityModel {
  double friction_coeff = 0.18;
  double angle_sensitivity = 0.15;
  double critical_single_loop_angle = deg_to_rad(30.0);
};

struct CounterweightSample {
  int loops = 1;
  double branch_angle = 0.0;  // rad
  double weight_ratio = 1.0;  // (0, 1]
};

StabilityModel stability_model_from(const ScenarioConfig& config);

double effective_friction(const StabilityModel& model, double branch_angle);

// True when a single loop at this incline slides axially along the branch.
bool axial_slide(const StabilityModel& model, int loops, double branch_angle);

// Minimum counterweight ratio in (0, 1]; 1.0 means no counterweight up to
// the drone's own weight can hold (infeasible). Throws std::domain_error
// for loops < 1 or branch_angle outside [0, pi/2).
double min_counterweight_ratio(const StabilityModel& model, int loops,
                               double branch_angle);

// True iff weight_ratio meets the capstan minimum and the axial-slide rule
// does not fire. weight_ratio must lie in (0, 1].
bool is_feasible(const StabilityModel& model, double weight_ratio, int loops,
                 double branch_angle);

struct FrictionFit {
  StabilityModel model;
  double residual_norm = 0.0;  // on log-ratio residuals
};

// Least-squares fit of (mu, k) to measured minimum-counterweight samples,
// linear in (mu, mu*k) on log(ratio). Throws std::invalid_argument on
// samples hit by the axial-slide regime (ratio clamped at 1, uninformative)
// and std::runtime_error when the design matrix is rank-deficient.
FrictionFit fit_friction(const std::vector<CounterweightSample>& samples);

// CSV round-trip, header "loops,branch_angle_deg,weight_ratio".
std::string samples_to_csv(const std::vector<CounterweightSample>& samples);
std::vector<CounterweightSample> samples_from_csv(const std::string& text);

}  // namespace perch

#endif  // PERCH_CAPSTAN_HPP_
