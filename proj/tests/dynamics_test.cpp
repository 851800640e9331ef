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
#include <cstring>
#include <vector>

#include "perch/dynamics.hpp"
#include "perch/strategies.hpp"

using namespace perch;

namespace {

ScenarioConfig base_config() {
  ScenarioConfig c;
  return c;
}

SystemState run_steps(SystemState s, const ControlInput& input,
                      const ScenarioConfig& c, int n) {
  for (int i = 0; i < n; ++i) s = step(s, input, c);
  return s;
}

}  // namespace

TEST_CASE("free fall without drag matches the discrete closed form") {
  ScenarioConfig c = base_config();
  c.sim.damping = 0.0;
  SystemState s = initial_state(c);
  s.drone_motors_on = false;
  s.pod_motors_on = false;
  double y0 = s.drone_pos.y;
  int n = 500;  // 0.5 s
  SystemState end = run_steps(s, ControlInput{}, c, n);
  // Semi-implicit Euler: v_N = g N dt exactly, y_N = y0 - g dt^2 N(N+1)/2.
  CHECK(end.drone_vel.y ==
        doctest::Approx(-c.gravity * n * c.timestep).epsilon(1e-12));
  CHECK(end.drone_pos.y ==
        doctest::Approx(y0 - c.gravity * c.timestep * c.timestep * n *
                                 (n + 1) / 2.0)
            .epsilon(1e-9));
  // Pod falls in lockstep; the slack tether stays slack, no tension.
  CHECK(end.pod_vel.y == doctest::Approx(end.drone_vel.y).epsilon(1e-12));
  CHECK(end.drone_tension == 0.0);
}

TEST_CASE("hanging pendulum period matches 2 pi sqrt(L/g) within 1%") {
  ScenarioConfig c = base_config();
  c.sim.damping = 0.0;
  double L = 0.5;
  SystemState s = initial_state(c);
  s.drone_motors_on = false;
  s.pod_motors_on = false;
  s.drone_pinned = true;
  double theta0 = 0.03;  // small angle
  s.pod_pos = s.drone_pos + Vec2{L * std::sin(theta0), -L * std::cos(theta0)};
  s.spooled_length = c.tether.total_length - L;
  // Count zero crossings of the swing angle over many periods.
  std::vector<double> crossings;
  double prev_x = s.pod_pos.x - s.drone_pos.x;
  for (int i = 0; i < 12000; ++i) {
    s = step(s, ControlInput{}, c);
    double x = s.pod_pos.x - s.drone_pos.x;
    if (prev_x > 0.0 && x <= 0.0) crossings.push_back(s.time);
    prev_x = x;
  }
  REQUIRE(crossings.size() >= 5);
  double period =
      (crossings.back() - crossings.front()) / (crossings.size() - 1);
  double want = 2.0 * kPi * std::sqrt(L / c.gravity);
  CHECK(period == doctest::Approx(want).epsilon(0.01));
}

TEST_CASE("taut tether keeps the pair distance at the free length") {
  ScenarioConfig c = base_config();
  SystemState s = initial_state(c);
  s.drone_motors_on = false;
  s.pod_motors_on = false;
  s.drone_pinned = true;
  s.pod_vel = {0.8, 0.0};  // swing sideways on the taut tether
  double pool = c.tether.total_length - s.spooled_length;
  for (int i = 0; i < 3000; ++i) {
    s = step(s, ControlInput{}, c);
    CHECK((s.drone_pos - s.pod_pos).norm() <= pool + 1e-6);
  }
}

TEST_CASE("perched state is a stable equilibrium with motors off") {
  ScenarioConfig c = base_config();
  SystemState s = make_perched_state(c, 2);
  Vec2 drone0 = s.drone_pos;
  Vec2 pod0 = s.pod_pos;
  int loops0 = wrap_loops(s.wrap);
  s = run_steps(s, ControlInput{}, c, 10000);  // 10 s
  CHECK((s.drone_pos - drone0).norm() < 1e-6);
  CHECK((s.pod_pos - pod0).norm() < 1e-6);
  CHECK(wrap_loops(s.wrap) == loops0);
  CHECK(s.tether_taut);
  // Hanging tensions match the supported weights.
  CHECK(s.drone_tension ==
        doctest::Approx(c.drone_side_mass() * c.gravity).epsilon(1e-6));
  CHECK(s.pod_tension ==
        doctest::Approx(c.vehicles.pod_mass * c.gravity).epsilon(1e-6));
}

TEST_CASE("hold check accepts two loops and rejects one at steep incline") {
  ScenarioConfig c = base_config();
  StabilityModel m = stability_model_from(c);
  SystemState two = make_perched_state(c, 2);
  CHECK(hold_check(two, m, c));
  SystemState one = make_perched_state(c, 1);
  CHECK_FALSE(hold_check(one, m, c));  // 0.314 < exp(-0.18*2pi) = 0.3227
  ScenarioConfig steep = c;
  steep.branch.incline_angle = deg_to_rad(30.0);
  SystemState one_steep = make_perched_state(steep, 1);
  CHECK_FALSE(hold_check(one_steep, m, steep));
  SystemState none = initial_state(c);
  CHECK_FALSE(hold_check(none, m, c));
}

TEST_CASE("mechanical energy never grows with motors off") {
  ScenarioConfig c = base_config();
  SystemState s = initial_state(c);
  s.drone_motors_on = false;
  s.pod_motors_on = false;
  s.drone_pinned = true;
  s.pod_vel = {0.6, 0.0};
  double prev = mechanical_energy(s, c);
  for (int i = 0; i < 5000; ++i) {
    s = step(s, ControlInput{}, c);
    double e = mechanical_energy(s, c);
    CHECK(e <= prev + 1e-9);
    prev = e;
  }
}

TEST_CASE("side tensions respect the capstan bound throughout a maneuver") {
  ScenarioConfig c = base_config();
  StabilityModel m = stability_model_from(c);
  double mu = effective_friction(m, c.branch.incline_angle);
  StrategyTrace trace = run_duo_perch(c);
  // Re-run a perched settle and sample the step-level tensions.
  SystemState s = make_perched_state(c, 2);
  for (int i = 0; i < 2000; ++i) {
    s = step(s, ControlInput{}, c);
    double bound = std::exp(mu * std::abs(s.wrap.accumulated_angle));
    double hi = std::max(s.drone_tension, s.pod_tension);
    double lo = std::min(s.drone_tension, s.pod_tension);
    CHECK(hi <= bound * lo + 1e-9);
  }
  CHECK(trace.outcome == Outcome::kPerched);
}

TEST_CASE("stepping is deterministic") {
  ScenarioConfig c = base_config();
  auto run_once = [&] {
    SystemState s = initial_state(c);
    ControlInput input;
    input.winch_rate = 0.05;
    std::vector<double> log;
    for (int i = 0; i < 2000; ++i) {
      input.drone_thrust = {0.3 * std::sin(0.01 * i), 16.0};
      s = step(s, input, c);
      log.push_back(s.drone_pos.x);
      log.push_back(s.drone_pos.y);
      log.push_back(s.pod_pos.x);
      log.push_back(s.pod_pos.y);
      log.push_back(s.wrap.accumulated_angle);
    }
    return log;
  };
  std::vector<double> a = run_once();
  std::vector<double> b = run_once();
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

TEST_CASE("waypoint controller reaches and holds a setpoint") {
  ScenarioConfig c = base_config();
  SystemState s = initial_state(c);
  Vec2 target{-0.8, 2.4};
  for (int i = 0; i < 8000; ++i) {
    s = step(s, waypoint_controller(s, target, c.controller_gains, c), c);
  }
  CHECK((s.drone_pos - target).norm() < 0.05);
  CHECK(s.drone_vel.norm() < 0.05);
}

TEST_CASE("winch release lowers the pod at the commanded rate") {
  ScenarioConfig c = base_config();
  SystemState s = initial_state(c);
  ControlInput input;
  input.winch_rate = 0.1;
  Vec2 hold = s.drone_pos;
  double pod_y0 = s.pod_pos.y;
  for (int i = 0; i < 5000; ++i) {  // 5 s
    ControlInput u = waypoint_controller(s, hold, c.controller_gains, c);
    u.winch_rate = input.winch_rate;
    s = step(s, u, c);
  }
  // ~0.5 m released; the pod ends correspondingly lower and still hanging.
  CHECK(s.pod_pos.y == doctest::Approx(pod_y0 - 0.5).epsilon(0.05));
  CHECK(s.spooled_length == doctest::Approx(3.0).epsilon(0.01));
}

TEST_CASE("blow-up raises InstabilityError") {
  ScenarioConfig c = base_config();
  SystemState s = initial_state(c);
  s.initial_energy = 10.0;     // reference energy already captured
  s.drone_vel = {500.0, 0.0};  // absurd kinetic energy against the guard
  CHECK_THROWS_AS(run_steps(s, ControlInput{}, c, 10), InstabilityError);
}
