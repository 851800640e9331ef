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

#include "perch/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

#include "json.hpp"

namespace perch {

using nlohmann::json;

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::kPerched: return "PERCHED";
    case Outcome::kAirborne: return "AIRBORNE";
    case Outcome::kSlipped: return "SLIPPED";
    case Outcome::kTimeout: return "TIMEOUT";
    case Outcome::kAborted: return "ABORTED";
  }
  return "ABORTED";
}

namespace {

double pod_half_diagonal(const VehicleSpec& v) {
  return 0.5 * std::hypot(v.pod_length, v.pod_width);
}

struct OrbitFollower {
  double target_angle = 0.0;
  double end_angle = 0.0;
  double radius = 0.0;
  double omega = 0.0;  // signed rad/s

  bool done(double body_bearing) const {
    return target_angle == end_angle &&
           std::abs(body_bearing - end_angle) < 0.2;
  }
  Vec2 advance(const BranchCircle& branch, double body_bearing, double dt) {
    double next = target_angle + omega * dt;
    // Never run further than the body can follow.
    double lead = 0.7;
    if (omega > 0.0) {
      next = std::min({next, end_angle, body_bearing + lead});
      target_angle = std::max(target_angle, next);
    } else {
      next = std::max({next, end_angle, body_bearing - lead});
      target_angle = std::min(target_angle, next);
    }
    return branch.center +
           Vec2{std::cos(target_angle), std::sin(target_angle)} * radius;
  }
};

// Phase-level executor shared by the four strategies.
class Runner {
 public:
  explicit Runner(const ScenarioConfig& config)
      : cfg_(config),
        branch_(branch_circle(config.branch)),
        model_(stability_model_from(config)) {
    st_ = initial_state(config);
  }

  const ScenarioConfig& cfg() const { return cfg_; }
  SystemState& state() { return st_; }
  const BranchCircle& branch() const { return branch_; }
  const StabilityModel& model() const { return model_; }
  StrategyTrace& trace() { return trace_; }

  double drone_orbit_radius() const {
    return critical_distance(
        cfg_.branch.diameter,
        {cfg_.vehicles.drone_body_radius, cfg_.sim.clearance});
  }
  double pod_orbit_radius() const {
    return critical_distance(
        cfg_.branch.diameter,
        {pod_half_diagonal(cfg_.vehicles), cfg_.sim.clearance});
  }

  void begin_phase(const std::string& name) {
    StrategyPhase phase;
    phase.name = name;
    phase.entered_at = st_.time;
    trace_.phases.push_back(phase);
    prev_drone_power_ = prev_pod_power_ = 0.0;
    have_prev_power_ = false;
  }

  void end_phase(double table_drone_mah, double table_pod_mah) {
    StrategyPhase& phase = trace_.phases.back();
    phase.duration = st_.time - phase.entered_at;
    if (cfg_.sim.energy_accounting == EnergyAccounting::kTable) {
      phase.drone_mah = table_drone_mah;
      phase.pod_mah = table_pod_mah;
      double volts_to_joules = cfg_.power.battery_voltage * 3.6;
      phase.drone_joules = table_drone_mah * volts_to_joules;
      phase.pod_joules = table_pod_mah * volts_to_joules;
    } else {
      phase.drone_mah =
          joules_to_mah(phase.drone_joules, cfg_.power.battery_voltage);
      phase.pod_mah =
          joules_to_mah(phase.pod_joules, cfg_.power.battery_voltage);
    }
    trace_.drone_total_mah += phase.drone_mah;
    trace_.pod_total_mah += phase.pod_mah;
  }

  bool timed_out() const { return st_.time >= cfg_.max_sim_time; }

  // Runs until `finished` returns true. Returns false on global timeout.
  bool run_until(const std::function<ControlInput()>& controls,
                 const std::function<bool()>& finished) {
    while (!finished()) {
      if (timed_out()) return false;
      ControlInput input = controls();
      st_ = step(st_, input, cfg_);
      integrate_energy(input);
      record();
    }
    return true;
  }

  // Winch command keeping the pod-side slack inside [lo, hi].
  double winch_slack_hold(double lo, double hi) const {
    double slack = pod_slack();
    if (slack < lo) return cfg_.spool.winch_rate_max;
    if (slack > hi) return -cfg_.spool.winch_rate_max;
    return 0.0;
  }

  double pod_slack() const {
    FreeLengths fl = free_lengths(st_, cfg_);
    double need = st_.routing.contact
                      ? tangent_length(branch_, st_.pod_pos)
                      : (st_.drone_pos - st_.pod_pos).norm();
    return fl.pod_side - need;
  }

  // Slack on the drone side of the wrap; large when the wrap is not engaged.
  double drone_slack() const {
    if (!st_.routing.contact) return 1e9;
    FreeLengths fl = free_lengths(st_, cfg_);
    return fl.drone_side - tangent_length(branch_, st_.drone_pos);
  }

  double pod_free_hang() const {
    return st_.routing.contact ? tangent_length(branch_, st_.pod_pos)
                               : (st_.drone_pos - st_.pod_pos).norm();
  }

  ControlInput drone_hold(const Vec2& target) const {
    return waypoint_controller(st_, target, cfg_.controller_gains, cfg_);
  }

  Vec2 pod_thrust_toward(const Vec2& target) const {
    Vec2 tension_force;
    if (st_.pod_tension > 0.0) {
      Vec2 dir;
      if (st_.routing.contact) {
        Vec2 tp = st_.wrap.exit_tangent_point;
        dir = (st_.pod_pos - tp).normalized();
      } else {
        dir = (st_.pod_pos - st_.drone_pos).normalized();
      }
      tension_force = -st_.pod_tension * dir;
    }
    return pd_thrust(st_.pod_pos, st_.pod_vel, target,
                     {cfg_.controller_gains.pod_kp, cfg_.controller_gains.pod_kd},
                     cfg_.vehicles.pod_mass, cfg_.gravity, tension_force,
                     cfg_.vehicles.pod_max_thrust);
  }

  void finish(Outcome outcome) {
    trace_.outcome = outcome;
    trace_.final_loops = wrap_loops(st_.wrap);
    trace_.final_state = st_;
  }

  void abort(const std::string& why) {
    trace_.diagnostic = why;
    finish(Outcome::kAborted);
  }

 private:
  void integrate_energy(const ControlInput& input) {
    if (trace_.phases.empty()) return;
    double drone_thrust =
        st_.drone_motors_on ? input.drone_thrust.norm() : 0.0;
    double pod_thrust_mag = st_.pod_motors_on ? input.pod_thrust.norm() : 0.0;
    double winch_mech = std::abs(input.winch_rate) * st_.pod_tension;
    double pd = thrust_power(cfg_.power, drone_thrust, cfg_.gravity) /
                    cfg_.power.motor_efficiency +
                cfg_.power.avionics_power;
    double pp = (thrust_power(cfg_.power, pod_thrust_mag, cfg_.gravity) +
                 winch_mech) /
                    cfg_.power.motor_efficiency +
                cfg_.power.avionics_power;
    if (have_prev_power_) {
      StrategyPhase& phase = trace_.phases.back();
      phase.drone_joules += 0.5 * cfg_.timestep * (prev_drone_power_ + pd);
      phase.pod_joules += 0.5 * cfg_.timestep * (prev_pod_power_ + pp);
    }
    prev_drone_power_ = pd;
    prev_pod_power_ = pp;
    have_prev_power_ = true;
  }

  void record() {
    if (!trace_.state_trace.empty() &&
        st_.time - trace_.state_trace.back().t <
            cfg_.sim.trace_decimation - 1e-12) {
      return;
    }
    trace_.state_trace.push_back(
        {st_.time, st_.drone_pos, st_.pod_pos, st_.wrap.accumulated_angle,
         st_.spooled_length, st_.tether_taut,
         std::max(st_.drone_tension, st_.pod_tension)});
  }

  ScenarioConfig cfg_;
  BranchCircle branch_;
  StabilityModel model_;
  SystemState st_;
  StrategyTrace trace_;
  double prev_drone_power_ = 0.0;
  double prev_pod_power_ = 0.0;
  bool have_prev_power_ = false;
};

bool preflight(Runner& run, bool need_drone_standoff) {
  const ScenarioConfig& cfg = run.cfg();
  double weight = cfg.total_mass() * cfg.gravity;
  if (cfg.vehicles.drone_max_thrust <= weight) {
    run.abort("drone_max_thrust below system hover weight");
    return false;
  }
  if (need_drone_standoff) {
    double dist =
        (run.state().drone_pos - run.branch().center).norm();
    double dmin = run.drone_orbit_radius();
    if (dist < dmin) {
      std::ostringstream msg;
      msg << "start distance " << dist << " m below critical distance "
          << dmin << " m";
      run.abort(msg.str());
      return false;
    }
  }
  return true;
}

// Feeds the wrapping drone by pumping the winch. The two sides of the wrap
// are coupled only through capstan slip, and a hanging pod keeps its side
// tensioned, locking the material split. A release burst drops the pod into
// brief free fall; with its side tension-free the taut drone side drags the
// fresh slack across the wrap. Retraction then hauls the pod back up and the
// cycle repeats while the drone side runs low.
struct WinchPump {
  enum class Mode { kIdle, kDrop, kRecover };
  Mode mode = Mode::kIdle;
  double base_hang = 0.0;

  double rate(Runner& run) {
    const SystemState& st = run.state();
    if (!st.routing.contact) return 0.0;
    double vmax = run.cfg().spool.winch_rate_max;
    double slack = run.drone_slack();
    double hang = run.pod_free_hang();
    switch (mode) {
      case Mode::kIdle:
        if (slack < 0.005 && st.spooled_length > 1e-6) {
          mode = Mode::kDrop;
          base_hang = hang;
          return vmax;
        }
        return 0.0;
      case Mode::kDrop:
        if (slack > 0.02 || hang > base_hang + 0.35 ||
            st.spooled_length <= 1e-6) {
          mode = Mode::kRecover;
          return -vmax;
        }
        return vmax;
      case Mode::kRecover:
        if (hang <= base_hang) {
          mode = Mode::kIdle;
          return 0.0;
        }
        return -vmax;
    }
    return 0.0;
  }
};

// Flies the drone around the branch by `delta` radians of bearing at the
// standoff radius, feeding its side of the wrap from the winch.
bool drone_loop(Runner& run, double delta, double omega) {
  const BranchCircle& branch = run.branch();
  double radius = run.drone_orbit_radius();
  OrbitFollower orbit;
  orbit.radius = radius;
  orbit.omega = delta < 0.0 ? -omega : omega;
  orbit.target_angle = run.state().routing.drone_bearing;
  orbit.end_angle = orbit.target_angle + delta;
  WinchPump pump;
  return run.run_until(
      [&] {
        ControlInput input = run.drone_hold(orbit.advance(
            branch, run.state().routing.drone_bearing, run.cfg().timestep));
        input.winch_rate = pump.rate(run);
        return input;
      },
      [&] { return orbit.done(run.state().routing.drone_bearing); });
}

bool drone_goto(Runner& run, const Vec2& target, double tol,
                double winch_lo = -1.0, double winch_hi = -1.0) {
  return run.run_until(
      [&] {
        ControlInput input = run.drone_hold(target);
        if (winch_lo >= 0.0) {
          input.winch_rate = run.winch_slack_hold(winch_lo, winch_hi);
        }
        return input;
      },
      [&] {
        return (run.state().drone_pos - target).norm() < tol &&
               run.state().drone_vel.norm() < 0.3;
      });
}

bool stabilize(Runner& run, const Vec2& hold_point) {
  double settled_since = -1.0;
  return run.run_until(
      [&] { return run.drone_hold(hold_point); },
      [&] {
        bool calm = run.state().drone_vel.norm() < 0.05;
        if (!calm) {
          settled_since = -1.0;
          return false;
        }
        if (settled_since < 0.0) settled_since = run.state().time;
        return run.state().time - settled_since >= 1.0;
      });
}

// Pod flies around the branch by `delta` radians of bearing at its standoff
// radius; the winch keeps the pod side snug.
bool pod_loop(Runner& run, double delta, double omega) {
  const BranchCircle& branch = run.branch();
  OrbitFollower orbit;
  orbit.radius = run.pod_orbit_radius();
  orbit.omega = delta < 0.0 ? -omega : omega;
  orbit.target_angle = run.state().routing.pod_bearing;
  orbit.end_angle = orbit.target_angle + delta;
  Vec2 drone_hold_point = run.state().drone_pos;
  return run.run_until(
      [&] {
        ControlInput input = run.drone_hold(drone_hold_point);
        input.pod_thrust = run.pod_thrust_toward(orbit.advance(
            branch, run.state().routing.pod_bearing, run.cfg().timestep));
        input.winch_rate = run.winch_slack_hold(0.02, 0.10);
        return input;
      },
      [&] { return orbit.done(run.state().routing.pod_bearing); });
}

// Guided circumnavigation with motors off: the pod's shape walks it around
// the branch as the winding system retracts (modeled kinematically).
bool pod_guided_loop(Runner& run, double delta, double omega) {
  const BranchCircle& branch = run.branch();
  SystemState& st = run.state();
  st.pod_pinned = true;
  double radius = std::max((st.pod_pos - branch.center).norm(),
                           branch.radius + 0.05);
  double angle = st.routing.pod_bearing;
  double end = angle + delta;
  double dir = delta < 0.0 ? -1.0 : 1.0;
  Vec2 drone_hold_point = st.drone_pos;
  bool ok = run.run_until(
      [&] {
        angle += dir * omega * run.cfg().timestep;
        if ((dir > 0.0 && angle > end) || (dir < 0.0 && angle < end)) {
          angle = end;
        }
        run.state().pod_pos =
            branch.center + Vec2{std::cos(angle), std::sin(angle)} * radius;
        ControlInput input;
        input.winch_rate = run.winch_slack_hold(0.02, 0.06);
        return input;
      },
      [&] { return angle == end; });
  run.state().pod_pinned = false;
  return ok;
}

// Winch-only retraction until the pod's free hang drops to `target_hang`.
bool retract_pod(Runner& run, double target_hang, const char* /*why*/) {
  Vec2 drone_hold_point = run.state().drone_pos;
  bool drone_flying = run.state().drone_motors_on;
  return run.run_until(
      [&] {
        ControlInput input;
        if (drone_flying) input = run.drone_hold(drone_hold_point);
        input.winch_rate = -run.cfg().spool.winch_rate_max;
        return input;
      },
      [&] { return run.pod_free_hang() <= target_hang; });
}

// Motors off, settle, verify the capstan hold.
void shutdown_and_check(Runner& run) {
  run.begin_phase("HOLD_AND_SHUTDOWN");
  run.state().drone_motors_on = false;
  run.state().pod_motors_on = false;
  double t_end = std::min(run.state().time + 2.0, run.cfg().max_sim_time);
  run.run_until([] { return ControlInput{}; },
                [&] { return run.state().time >= t_end; });
  run.end_phase(0.0, 0.0);
  if (run.timed_out()) {
    run.finish(Outcome::kTimeout);
    return;
  }
  bool holds = hold_check(run.state(), run.model(), run.cfg());
  run.finish(holds ? Outcome::kPerched : Outcome::kSlipped);
}

double release_target(const Runner& run) {
  // "Adequate" initial release: twice the branch circumnavigation arc at
  // tether standoff, plus clearance; the rest is fed across the wrap during
  // the loops.
  const ScenarioConfig& cfg = run.cfg();
  return 2.0 * (2.0 * kPi * (run.branch().radius + cfg.sim.clearance)) +
         cfg.sim.clearance;
}

void perch_common(Runner& run, bool duo) {
  const ScenarioConfig& cfg = run.cfg();
  if (!preflight(run, true)) return;

  const BranchCircle& branch = run.branch();
  double r_orbit = run.drone_orbit_radius();
  Vec2 stage = branch.center + Vec2{-r_orbit, 0.0};

  run.begin_phase("APPROACH_AND_RELEASE");
  double want_free = std::max(cfg.sim.initial_free_length, release_target(run));
  bool ok = run.run_until(
      [&] {
        ControlInput input = run.drone_hold(stage);
        double pool = cfg.tether.total_length - run.state().spooled_length;
        if (pool < want_free) input.winch_rate = cfg.spool.winch_rate_max;
        return input;
      },
      [&] {
        double pool = cfg.tether.total_length - run.state().spooled_length;
        return (run.state().drone_pos - stage).norm() < 0.12 &&
               run.state().drone_vel.norm() < 0.3 && pool >= want_free;
      });
  run.end_phase(0.0, 0.0);
  if (!ok) {
    run.finish(Outcome::kTimeout);
    return;
  }

  // First wrapping loop, flown over the branch and down past the pod.
  run.begin_phase("DRONE_FIRST_LOOP");
  int loops = cfg.sim.target_loops;
  double first_delta = -(2.0 * kPi + 1.5 * kPi);  // end hanging at the bottom
  ok = drone_loop(run, first_delta, 0.9);
  run.end_phase(cfg.costs.first_loop_mah, 0.0);
  if (!ok) {
    run.finish(Outcome::kTimeout);
    return;
  }

  Vec2 hang_point = branch.center + Vec2{0.0, -r_orbit};
  run.begin_phase("STABILIZE");
  ok = stabilize(run, hang_point);
  run.end_phase(0.0, 0.0);
  if (!ok) {
    run.finish(Outcome::kTimeout);
    return;
  }

  if (loops >= 2) {
    if (duo) {
      run.begin_phase("POD_SECOND_LOOP");
      // Bring the pod up near the branch first, then swing it around.
      ok = retract_pod(run, run.pod_orbit_radius() + 0.1, "pod to branch");
      if (ok) ok = pod_loop(run, (loops - 1) * 2.0 * kPi, 0.8);
      run.end_phase(0.0, cfg.costs.pod_propeller_mah);
      if (!ok) {
        run.finish(Outcome::kTimeout);
        return;
      }
    } else {
      run.begin_phase("DRONE_SECOND_LOOP");
      ok = drone_loop(run, -(loops - 1) * 2.0 * kPi, 0.9);
      run.end_phase(cfg.costs.second_loop_mah, 0.0);
      if (!ok) {
        run.finish(Outcome::kTimeout);
        return;
      }
      run.begin_phase("STABILIZE_2");
      ok = stabilize(run, hang_point);
      run.end_phase(0.0, 0.0);
      if (!ok) {
        run.finish(Outcome::kTimeout);
        return;
      }
    }
  }

  shutdown_and_check(run);
}

void disentangle_takeoff(Runner& run, double table_drone_mah) {
  const ScenarioConfig& cfg = run.cfg();
  const BranchCircle& branch = run.branch();
  run.state().drone_motors_on = true;

  run.begin_phase("DRONE_TAKEOFF");
  // Reverse the drone's wrap until the tether comes off the branch, then
  // depart; the pod is kept short to avoid pendulum swings.
  bool ok = run.run_until(
      [&] {
        OrbitFollower orbit;  // recreated each step: chase the unwrap
        orbit.radius = run.drone_orbit_radius();
        double bearing = run.state().routing.drone_bearing;
        ControlInput input = run.drone_hold(
            branch.center + Vec2{std::cos(bearing + 0.5), std::sin(bearing + 0.5)} *
                                run.drone_orbit_radius());
        input.winch_rate = -cfg.spool.winch_rate_max;
        return input;
      },
      [&] { return !run.state().routing.contact; });
  if (ok) {
    Vec2 depart = branch.center + Vec2{-1.2, 0.4};
    double max_swing = 0.0;
    ok = run.run_until(
        [&] {
          ControlInput input = run.drone_hold(depart);
          input.winch_rate = -cfg.spool.winch_rate_max;
          Vec2 rel = run.state().pod_pos - run.state().drone_pos;
          if (rel.norm() > 1e-6 && run.state().tether_taut) {
            double swing = std::atan2(std::abs(rel.x), -rel.y);
            max_swing = std::max(max_swing, swing);
          }
          return input;
        },
        [&] {
          return (run.state().drone_pos - depart).norm() < 0.15 &&
                 run.state().drone_vel.norm() < 0.4;
        });
    if (max_swing > deg_to_rad(15.0)) {
      run.trace().warnings.push_back(
          "pendulum amplitude exceeded 15 deg during takeoff");
    }
  }
  run.end_phase(table_drone_mah, 0.0);
  if (!ok) {
    run.finish(Outcome::kTimeout);
    return;
  }
  run.finish(Outcome::kAirborne);
}

}  // namespace

SystemState make_perched_state(const ScenarioConfig& config, int loops) {
  SystemState st;
  st.drone_motors_on = false;
  st.pod_motors_on = false;
  BranchCircle branch = branch_circle(config.branch);
  if (loops < 1) {
    // Airborne, nothing wrapped.
    return initial_state(config);
  }
  const double R = branch.radius;
  double hang_d = 0.6;
  double hang_p = 0.4;
  // Drone hangs off the right side tangent, pod off the left, the wrap
  // spanning `contact_angle` between the two tangent bearings.
  double contact_angle = 2.0 * kPi * loops + kPi;
  st.drone_pos = branch.center + Vec2{R, -hang_d};
  st.pod_pos = branch.center + Vec2{-R, -hang_p};
  TetherRouting& r = st.routing;
  r.contact = true;
  r.wrap_sign = 1;
  double gamma_d = std::atan2(hang_d, R);
  double gamma_p = std::atan2(hang_p, R);
  r.drone_bearing = -gamma_d;  // == atan2(-hang_d, R), tangent bearing 0
  r.pod_bearing = contact_angle + gamma_p;  // tangent bearing contact_angle
  r.anchor_bearing = contact_angle / 2.0;
  r.drone_material = hang_d + R * contact_angle / 2.0;
  r.pod_material = hang_p + R * contact_angle / 2.0;
  st.spooled_length =
      config.tether.total_length - r.drone_material - r.pod_material;
  if (st.spooled_length < 0.0) {
    throw ValidationError(
        "tether.total_length too short for the perched configuration");
  }
  st.wrap.contact = true;
  st.wrap.accumulated_angle = contact_angle + gamma_d + gamma_p;
  st.wrap.entry_tangent_point = branch.center + Vec2{R, 0.0};
  st.wrap.exit_tangent_point = branch.center + Vec2{-R, 0.0};
  st.tether_taut = true;
  st.drone_tension = config.drone_side_mass() * config.gravity;
  st.pod_tension = config.vehicles.pod_mass * config.gravity;
  return st;
}

StrategyTrace run_duo_perch(const ScenarioConfig& config) {
  Runner run(config);
  perch_common(run, true);
  return run.trace();
}

StrategyTrace run_solo_perch(const ScenarioConfig& config) {
  Runner run(config);
  perch_common(run, false);
  return run.trace();
}

StrategyTrace run_duo_disentangle(const ScenarioConfig& config,
                                  DisentangleMethod method) {
  Runner run(config);
  run.state() = make_perched_state(config, config.sim.target_loops);
  if (wrap_loops(run.state().wrap) < 1) {
    run.finish(Outcome::kAirborne);
    return run.trace();
  }

  run.begin_phase("RETRACT_TO_BRANCH");
  bool ok = retract_pod(run, run.pod_orbit_radius() + 0.05, "minimize radius");
  run.end_phase(0.0, 0.0);
  if (!ok) {
    run.finish(Outcome::kTimeout);
    return run.trace();
  }

  run.begin_phase("POD_REVERSE_LOOP");
  double delta = -2.0 * kPi;  // undo the pod's wrapping loop
  if (method == DisentangleMethod::kPropeller) {
    run.state().pod_motors_on = true;
    ok = pod_loop(run, delta, 0.8);
    run.state().pod_motors_on = false;
  } else {
    ok = pod_guided_loop(run, delta, 0.5);
  }
  run.end_phase(0.0, method == DisentangleMethod::kPropeller
                         ? config.costs.pod_propeller_mah
                         : config.costs.winding_mah);
  if (!ok) {
    run.finish(Outcome::kTimeout);
    return run.trace();
  }

  run.begin_phase("RETRACT_FOR_TAKEOFF");
  ok = retract_pod(run, 0.15, "minimize pendulum");
  run.end_phase(0.0, 0.0);
  if (!ok) {
    run.finish(Outcome::kTimeout);
    return run.trace();
  }

  disentangle_takeoff(run, config.costs.second_loop_mah);
  return run.trace();
}

StrategyTrace run_solo_disentangle(const ScenarioConfig& config) {
  Runner run(config);
  run.state() = make_perched_state(config, config.sim.target_loops);
  if (wrap_loops(run.state().wrap) < 1) {
    run.finish(Outcome::kAirborne);
    return run.trace();
  }
  run.begin_phase("RETRACT_FOR_TAKEOFF");
  bool ok = retract_pod(run, 0.15, "minimize pendulum");
  run.end_phase(0.0, 0.0);
  if (!ok) {
    run.finish(Outcome::kTimeout);
    return run.trace();
  }
  // The drone reverses both loops itself; table cost is the reciprocal of
  // the two perching loops.
  disentangle_takeoff(
      run, config.costs.second_loop_mah + config.costs.first_loop_mah);
  return run.trace();
}

StrategyTrace run_strategy(const ScenarioConfig& config) {
  switch (config.strategy) {
    case Strategy::kDuoPerch: return run_duo_perch(config);
    case Strategy::kSoloPerch: return run_solo_perch(config);
    case Strategy::kDuoDisentangleWinding:
      return run_duo_disentangle(config, DisentangleMethod::kWinding);
    case Strategy::kDuoDisentanglePropeller:
      return run_duo_disentangle(config, DisentangleMethod::kPropeller);
    case Strategy::kSoloDisentangle: return run_solo_disentangle(config);
  }
  throw std::logic_error("unknown strategy");
}

std::string trace_to_json(const StrategyTrace& trace) {
  json j;
  j["outcome"] = to_string(trace.outcome);
  j["final_loops"] = trace.final_loops;
  j["drone_total_mah"] = trace.drone_total_mah;
  j["pod_total_mah"] = trace.pod_total_mah;
  j["warnings"] = trace.warnings;
  if (!trace.diagnostic.empty()) j["diagnostic"] = trace.diagnostic;
  json phases = json::array();
  for (const StrategyPhase& p : trace.phases) {
    phases.push_back({{"name", p.name},
                      {"entered_at", p.entered_at},
                      {"duration", p.duration},
                      {"drone_mah", p.drone_mah},
                      {"pod_mah", p.pod_mah},
                      {"drone_joules", p.drone_joules},
                      {"pod_joules", p.pod_joules}});
  }
  j["phases"] = phases;
  return j.dump(2) + "\n";
}

std::string trace_to_csv(const StrategyTrace& trace) {
  std::ostringstream out;
  out << "t,drone_x,drone_y,pod_x,pod_y,wrap_angle,spooled,taut,tension\n";
  out.precision(9);
  for (const TraceRow& r : trace.state_trace) {
    out << r.t << ',' << r.drone_pos.x << ',' << r.drone_pos.y << ','
        << r.pod_pos.x << ',' << r.pod_pos.y << ',' << r.wrap_angle << ','
        << r.spooled << ',' << (r.taut ? 1 : 0) << ',' << r.tension << '\n';
  }
  return out.str();
}

}  // namespace perch
