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

#include "perch/capstan.hpp"

#include <cmath>
#include <sstream>

namespace perch {

StabilityModel stability_model_from(const ScenarioConfig& config) {
  return {config.branch.friction_coeff, config.stability.angle_sensitivity,
          config.stability.critical_single_loop_angle};
}

double effective_friction(const StabilityModel& model, double branch_angle) {
  double mu = model.friction_coeff *
              (1.0 - model.angle_sensitivity * std::sin(branch_angle));
  return mu > 0.0 ? mu : 0.0;
}

bool axial_slide(const StabilityModel& model, int loops, double branch_angle) {
  return loops == 1 && branch_angle >= model.critical_single_loop_angle;
}

double min_counterweight_ratio(const StabilityModel& model, int loops,
                               double branch_angle) {
  if (loops < 1) throw std::domain_error("loops must be >= 1");
  if (branch_angle < 0.0 || branch_angle >= kPi / 2.0) {
    throw std::domain_error("branch_angle must lie in [0, pi/2)");
  }
  if (axial_slide(model, loops, branch_angle)) return 1.0;
  double ratio =
      std::exp(-effective_friction(model, branch_angle) * 2.0 * kPi * loops);
  return ratio < 1.0 ? ratio : 1.0;
}

bool is_feasible(const StabilityModel& model, double weight_ratio, int loops,
                 double branch_angle) {
  if (!(weight_ratio > 0.0 && weight_ratio <= 1.0)) {
    throw std::domain_error("weight_ratio must lie in (0, 1]");
  }
  if (loops < 1) return false;  // no wrap, no capstan hold
  if (axial_slide(model, loops, branch_angle)) return false;
  return weight_ratio >= min_counterweight_ratio(model, loops, branch_angle);
}

FrictionFit fit_friction(const std::vector<CounterweightSample>& samples) {
  if (samples.size() < 2) {
    throw std::runtime_error("fit_friction: need at least 2 samples");
  }
  // log(r) = -mu * 2*pi*n + mu*k * 2*pi*n*sin(beta); linear in a = mu,
  // b = mu*k with y = -log(r), columns (2*pi*n, -2*pi*n*sin(beta)).
  double s11 = 0.0, s12 = 0.0, s22 = 0.0, sy1 = 0.0, sy2 = 0.0;
  for (const CounterweightSample& s : samples) {
    if (s.loops < 1) throw std::invalid_argument("fit_friction: loops < 1");
    if (!(s.weight_ratio > 0.0 && s.weight_ratio <= 1.0)) {
      throw std::invalid_argument("fit_friction: weight_ratio outside (0, 1]");
    }
    double x1 = 2.0 * kPi * s.loops;
    double x2 = -x1 * std::sin(s.branch_angle);
    double y = -std::log(s.weight_ratio);
    s11 += x1 * x1;
    s12 += x1 * x2;
    s22 += x2 * x2;
    sy1 += x1 * y;
    sy2 += x2 * y;
  }
  double det = s11 * s22 - s12 * s12;
  // Scale-aware rank check on the 2x2 normal matrix.
  if (!(det > 1e-12 * s11 * (s22 + 1e-30))) {
    throw std::runtime_error(
        "fit_friction: degenerate data (need distinct loop counts and at "
        "least one nonzero branch angle)");
  }
  double a = (s22 * sy1 - s12 * sy2) / det;
  double b = (s11 * sy2 - s12 * sy1) / det;
  FrictionFit fit;
  fit.model.friction_coeff = a;
  fit.model.angle_sensitivity = std::abs(a) > 1e-12 ? b / a : 0.0;
  double ss = 0.0;
  for (const CounterweightSample& s : samples) {
    double pred = -2.0 * kPi * s.loops * fit.model.friction_coeff *
                  (1.0 - fit.model.angle_sensitivity * std::sin(s.branch_angle));
    double res = std::log(s.weight_ratio) - pred;
    ss += res * res;
  }
  fit.residual_norm = std::sqrt(ss);
  return fit;
}

std::string samples_to_csv(const std::vector<CounterweightSample>& samples) {
  std::ostringstream out;
  out << "loops,branch_angle_deg,weight_ratio\n";
  out.precision(17);
  for (const CounterweightSample& s : samples) {
    out << s.loops << ',' << rad_to_deg(s.branch_angle) << ','
        << s.weight_ratio << '\n';
  }
  return out.str();
}

std::vector<CounterweightSample> samples_from_csv(const std::string& text) {
  std::vector<CounterweightSample> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    CounterweightSample s;
    if (!std::getline(row, cell, ',')) continue;
    s.loops = std::stoi(cell);
    if (!std::getline(row, cell, ',')) {
      throw std::runtime_error("samples_from_csv: malformed row: " + line);
    }
    s.branch_angle = deg_to_rad(std::stod(cell));
    if (!std::getline(row, cell, ',')) {
      throw std::runtime_error("samples_from_csv: malformed row: " + line);
    }
    s.weight_ratio = std::stod(cell);
    out.push_back(s);
  }
  return out;
}

}  // namespace perch
