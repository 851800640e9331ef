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

#include "perch/energy.hpp"

#include <cmath>
#include <stdexcept>

namespace perch {

double hover_power(const PowerModel& model, double mass) {
  if (mass <= 0.0) throw std::domain_error("mass must be > 0");
  return model.reference_power *
         std::pow(mass / model.reference_mass, model.mass_exponent);
}

double thrust_power(const PowerModel& model, double thrust, double gravity) {
  if (thrust <= 0.0) return 0.0;
  return hover_power(model, thrust / gravity);
}

double break_even_idle_fraction(const PowerModel& model, double base_mass,
                                double system_mass, double maneuver_energy,
                                double mission_time) {
  if (base_mass <= 0.0) throw std::domain_error("base_mass must be > 0");
  if (system_mass < base_mass) {
    throw std::domain_error("system_mass must be >= base_mass");
  }
  if (mission_time <= 0.0) throw std::domain_error("mission_time must be > 0");
  double p_sys = hover_power(model, system_mass);
  double p_base = hover_power(model, base_mass);
  // P_sys*(1-f)*T + P_av*f*T + E <= P_base*T, smallest f in [0, 1].
  double numer = p_sys - p_base + maneuver_energy / mission_time;
  double denom = p_sys - model.avionics_power;
  if (numer <= 0.0) return 0.0;
  if (denom <= 0.0 || numer >= denom) return 1.0;
  return numer / denom;
}

double calibrate_exponent(double target_fraction, double base_mass,
                          double system_mass) {
  if (!(target_fraction > 0.0 && target_fraction < 1.0)) {
    throw std::domain_error("target_fraction must lie in (0, 1)");
  }
  if (!(base_mass > 0.0 && system_mass > base_mass)) {
    throw std::domain_error("need system_mass > base_mass > 0");
  }
  // 1 - (base/system)^k = f  =>  k = ln(1 - f) / ln(base/system).
  return std::log(1.0 - target_fraction) / std::log(base_mass / system_mass);
}

double paper_calibrated_exponent() {
  return calibrate_exponent(0.489, 1.008, 1.618);
}

std::vector<IdleCurvePoint> idle_time_curve(
    const PowerModel& model, double base_mass,
    const std::vector<double>& added_mass_range, double maneuver_energy,
    double mission_time) {
  if (added_mass_range.empty()) {
    throw std::domain_error("added_mass_range must be non-empty");
  }
  std::vector<IdleCurvePoint> curve;
  curve.reserve(added_mass_range.size());
  double prev = added_mass_range.front();
  for (double added : added_mass_range) {
    if (added < prev) {
      throw std::domain_error("added_mass_range must be non-decreasing");
    }
    prev = added;
    curve.push_back({added, break_even_idle_fraction(model, base_mass,
                                                     base_mass + added,
                                                     maneuver_energy,
                                                     mission_time)});
  }
  return curve;
}

DisentangleRatios disentangle_comparison(const ManeuverCostTable& table) {
  if (table.second_loop_mah <= 0.0) {
    throw std::domain_error("second_loop_mah must be > 0");
  }
  if (table.winding_mah <= 0.0) {
    throw std::domain_error("winding_mah must be > 0");
  }
  return {table.pod_propeller_mah / table.second_loop_mah,
          table.winding_mah / table.second_loop_mah,
          table.pod_propeller_mah / table.winding_mah};
}

ConsumptionResult integrate_consumption(const std::vector<PowerSample>& trace,
                                        const PowerModel& model,
                                        double gravity) {
  ConsumptionResult out;
  if (trace.size() < 2) return out;
  auto electrical = [&](double thrust) {
    return thrust_power(model, thrust, gravity) / model.motor_efficiency +
           model.avionics_power;
  };
  for (std::size_t i = 1; i < trace.size(); ++i) {
    double dt = trace[i].t - trace[i - 1].t;
    if (dt <= 0.0) {
      throw std::invalid_argument(
          "integrate_consumption: timestamps must be strictly increasing");
    }
    out.drone_joules += 0.5 * dt * (electrical(trace[i - 1].drone_thrust) +
                                    electrical(trace[i].drone_thrust));
    // Winch power is drawn from the pod battery alongside its propellers.
    double pod_prev = electrical(trace[i - 1].pod_thrust) +
                      std::abs(trace[i - 1].winch_power) / model.motor_efficiency;
    double pod_cur = electrical(trace[i].pod_thrust) +
                     std::abs(trace[i].winch_power) / model.motor_efficiency;
    out.pod_joules += 0.5 * dt * (pod_prev + pod_cur);
  }
  out.drone_mah = joules_to_mah(out.drone_joules, model.battery_voltage);
  out.pod_mah = joules_to_mah(out.pod_joules, model.battery_voltage);
  return out;
}

}  // namespace perch
