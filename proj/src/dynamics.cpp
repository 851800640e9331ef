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

#include "perch/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace perch {

namespace {

constexpr double kTautBand = 1e-6;     // taut/slack hysteresis, m
constexpr double kContactOn = kPi / 2.0;   // |winding| to engage the wrap
constexpr double kContactOff = 0.4;        // |winding| to release it
constexpr double kSlideRate = 1.0;     // m/s material transfer across the wrap
constexpr double kMinSideLength = 0.02;    // m, keep a stub of free tether

double wrap_to_pi(double a) {
  a = std::fmod(a + kPi, 2.0 * kPi);
  if (a < 0.0) a += 2.0 * kPi;
  return a - kPi;
}

double bearing_of(const BranchCircle& branch, const Vec2& p) {
  return std::atan2(p.y - branch.center.y, p.x - branch.center.x);
}

// Continuous bearing tracking: advance by the principal angle difference.
double advance_bearing(double prev, const BranchCircle& branch,
                       const Vec2& p) {
  return prev + wrap_to_pi(bearing_of(branch, p) - prev);
}

struct SideGeometry {
  double free_length = 0.0;   // straight tangent distance
  double arc_angle = 0.0;     // wrapped arc on this side of the anchor, >= 0
  Vec2 tangent;               // departure point on the branch
  Vec2 dir;                   // unit vector tangent point -> body
};

// Tangent geometry of one wrapped side. `tangent_side` is +wrap_sign for the
// drone (the arc continues in the wrap direction past its tangent point) and
// -wrap_sign for the pod.
SideGeometry side_geometry(const BranchCircle& branch, const Vec2& p,
                           double body_bearing, double anchor_bearing,
                           int wrap_sign, bool drone_side) {
  SideGeometry geo;
  double gamma = tangent_half_angle(branch, p);
  double tb = drone_side ? body_bearing + wrap_sign * gamma
                         : body_bearing - wrap_sign * gamma;
  geo.arc_angle = drone_side ? wrap_sign * (anchor_bearing - tb)
                             : wrap_sign * (tb - anchor_bearing);
  geo.tangent =
      branch.center + Vec2{std::cos(tb), std::sin(tb)} * branch.radius;
  geo.free_length = tangent_length(branch, p);
  geo.dir = geo.free_length > 1e-12 ? (p - geo.tangent) / geo.free_length
                                    : (p - branch.center).normalized();
  return geo;
}

}  // namespace

SystemState initial_state(const ScenarioConfig& config) {
  SystemState s;
  s.drone_pos = {config.sim.drone_start[0], config.sim.drone_start[1]};
  s.pod_pos = s.drone_pos - Vec2{0.0, config.sim.initial_free_length};
  s.spooled_length =
      config.tether.total_length - config.sim.initial_free_length;
  BranchCircle branch = branch_circle(config.branch);
  s.routing.drone_bearing = bearing_of(branch, s.drone_pos);
  s.routing.pod_bearing = bearing_of(branch, s.pod_pos);
  s.tether_taut = true;  // pod hangs from the drone
  return s;
}

FreeLengths free_lengths(const SystemState& state,
                         const ScenarioConfig& config) {
  BranchCircle branch = branch_circle(config.branch);
  if (!state.routing.contact) {
    double pool = config.tether.total_length - state.spooled_length;
    return {pool, pool};
  }
  const TetherRouting& r = state.routing;
  SideGeometry gd = side_geometry(branch, state.drone_pos, r.drone_bearing,
                                  r.anchor_bearing, r.wrap_sign, true);
  SideGeometry gp = side_geometry(branch, state.pod_pos, r.pod_bearing,
                                  r.anchor_bearing, r.wrap_sign, false);
  return {r.drone_material - branch.radius * gd.arc_angle,
          r.pod_material - branch.radius * gp.arc_angle};
}

Vec2 pd_thrust(const Vec2& pos, const Vec2& vel, const Vec2& target,
               const PDGains& gains, double mass, double gravity,
               const Vec2& tension_force, double max_thrust) {
  Vec2 desired = Vec2{0.0, mass * gravity} - tension_force +
                 mass * (gains.kp * (target - pos) - gains.kd * vel);
  double mag = desired.norm();
  if (mag > max_thrust) desired = desired * (max_thrust / mag);
  return desired;
}

ControlInput waypoint_controller(const SystemState& state, const Vec2& target,
                                 const ControllerGains& gains,
                                 const ScenarioConfig& config) {
  BranchCircle branch = branch_circle(config.branch);
  Vec2 tension_force;
  if (state.drone_tension > 0.0) {
    Vec2 dir;
    if (state.routing.contact) {
      SideGeometry gd =
          side_geometry(branch, state.drone_pos, state.routing.drone_bearing,
                        state.routing.anchor_bearing, state.routing.wrap_sign,
                        true);
      dir = gd.dir;
    } else {
      dir = (state.drone_pos - state.pod_pos).normalized();
    }
    tension_force = -state.drone_tension * dir;
  }
  ControlInput input;
  input.drone_thrust = pd_thrust(
      state.drone_pos, state.drone_vel, target,
      {gains.drone_kp, gains.drone_kd}, config.drone_side_mass(),
      config.gravity, tension_force, config.vehicles.drone_max_thrust);
  return input;
}

double mechanical_energy(const SystemState& state,
                         const ScenarioConfig& config) {
  double md = config.drone_side_mass();
  double mp = config.vehicles.pod_mass;
  double ke = 0.5 * md * state.drone_vel.norm2() +
              0.5 * mp * state.pod_vel.norm2();
  double pe = config.gravity * (md * state.drone_pos.y + mp * state.pod_pos.y);
  return ke + pe;
}

bool hold_check(const SystemState& state, const StabilityModel& model,
                const ScenarioConfig& config) {
  int loops = wrap_loops(state.wrap);
  if (loops < 1) return false;
  double ratio = config.pod_weight_fraction();
  if (ratio > 1.0) ratio = 1.0;
  return is_feasible(model, ratio, loops, config.branch.incline_angle);
}

SystemState step(const SystemState& state, const ControlInput& input,
                 const ScenarioConfig& config) {
  const double dt = config.timestep;
  const BranchCircle branch = branch_circle(config.branch);
  const double md = config.drone_side_mass();
  const double mp = config.vehicles.pod_mass;
  const double wd = state.drone_pinned ? 0.0 : 1.0 / md;
  const double wp = state.pod_pinned ? 0.0 : 1.0 / mp;

  SystemState next = state;
  if (next.initial_energy < 0.0) {
    next.initial_energy = std::max(mechanical_energy(state, config), 10.0);
  }

  // Forces and semi-implicit velocity update.
  auto clamp_thrust = [](Vec2 f, double limit) {
    double mag = f.norm();
    return mag > limit ? f * (limit / mag) : f;
  };
  Vec2 f_drone;
  Vec2 f_pod;
  if (state.drone_motors_on) {
    f_drone = clamp_thrust(input.drone_thrust, config.vehicles.drone_max_thrust);
  }
  if (state.pod_motors_on) {
    f_pod = clamp_thrust(input.pod_thrust, config.vehicles.pod_max_thrust);
  }
  f_drone += Vec2{0.0, -md * config.gravity} - config.sim.damping * state.drone_vel;
  f_pod += Vec2{0.0, -mp * config.gravity} - config.sim.damping * state.pod_vel;
  if (!state.drone_pinned) next.drone_vel += f_drone * (dt / md);
  if (!state.pod_pinned) next.pod_vel += f_pod * (dt / mp);
  if (state.drone_pinned) next.drone_vel = {0.0, 0.0};
  if (state.pod_pinned) next.pod_vel = {0.0, 0.0};

  // Velocity-level tether constraints at the start-of-step geometry.
  double tension_d = 0.0, tension_p = 0.0;
  if (!state.routing.contact) {
    double pool = config.tether.total_length - state.spooled_length;
    Vec2 diff = next.drone_pos - next.pod_pos;
    double dist = diff.norm();
    if (dist - pool > -kTautBand && dist > 1e-12 && wd + wp > 0.0) {
      Vec2 u = diff / dist;
      double sep = u.dot(next.drone_vel) - u.dot(next.pod_vel);
      // Winch release feeds the free pool; only the excess separation rate
      // is cancelled.
      double rate = std::clamp(input.winch_rate, -config.spool.winch_rate_max,
                               config.spool.winch_rate_max);
      sep -= std::max(rate, 0.0);
      if (sep > 0.0) {
        double lambda = sep / (wd + wp);
        next.drone_vel -= u * (lambda * wd);
        next.pod_vel += u * (lambda * wp);
        tension_d = lambda / dt;
        tension_p = tension_d;
      }
    }
  } else {
    const TetherRouting& r = state.routing;
    SideGeometry gd = side_geometry(branch, next.drone_pos, r.drone_bearing,
                                    r.anchor_bearing, r.wrap_sign, true);
    SideGeometry gp = side_geometry(branch, next.pod_pos, r.pod_bearing,
                                    r.anchor_bearing, r.wrap_sign, false);
    double avail_d = r.drone_material - branch.radius * std::max(gd.arc_angle, 0.0);
    double avail_p = r.pod_material - branch.radius * std::max(gp.arc_angle, 0.0);
    if (gd.free_length - avail_d > -kTautBand && wd > 0.0) {
      double sep = gd.dir.dot(next.drone_vel);
      if (sep > 0.0) {
        double lambda = sep / wd;
        next.drone_vel -= gd.dir * (lambda * wd);
        tension_d = lambda / dt;
      }
    }
    if (gp.free_length - avail_p > -kTautBand && wp > 0.0) {
      double rate = std::clamp(input.winch_rate, -config.spool.winch_rate_max,
                               config.spool.winch_rate_max);
      double sep = gp.dir.dot(next.pod_vel) - std::max(rate, 0.0);
      if (sep > 0.0) {
        double lambda = sep / wp;
        next.pod_vel -= gp.dir * (lambda * wp);
        tension_p = lambda / dt;
      }
    }
  }

  // Integrate positions.
  Vec2 drone_old = next.drone_pos;
  Vec2 pod_old = next.pod_pos;
  next.drone_pos += next.drone_vel * dt;
  next.pod_pos += next.pod_vel * dt;

  // Branch is solid: push bodies out and kill inward radial velocity.
  auto collide = [&](Vec2& p, Vec2& v) {
    Vec2 rel = p - branch.center;
    double d = rel.norm();
    double min_d = branch.radius + 1e-6;
    if (d < min_d) {
      Vec2 n = d > 1e-12 ? rel / d : Vec2{0.0, 1.0};
      p = branch.center + n * min_d;
      double vn = n.dot(v);
      if (vn < 0.0) v -= n * vn;
    }
  };
  collide(next.drone_pos, next.drone_vel);
  collide(next.pod_pos, next.pod_vel);

  // Winch: positive rate releases tether from the spool into the pod side.
  {
    double rate = std::clamp(input.winch_rate, -config.spool.winch_rate_max,
                             config.spool.winch_rate_max);
    double delta = rate * dt;  // released material
    delta = std::min(delta, state.spooled_length);  // spool can run empty
    if (next.routing.contact) {
      // Retraction cannot pull the last stub of the pod side in.
      double avail_p = free_lengths(next, config).pod_side;
      if (avail_p + delta < kMinSideLength) {
        delta = kMinSideLength - avail_p;
      }
      next.routing.pod_material += delta;
    } else {
      double pool = config.tether.total_length - state.spooled_length;
      if (pool + delta < kMinSideLength) delta = kMinSideLength - pool;
    }
    next.spooled_length = std::clamp(state.spooled_length - delta, 0.0,
                                     config.tether.total_length);
  }

  // Slip across the wrap: static friction holds the material split while the
  // side tensions respect the capstan bound; otherwise material transfers
  // toward the high-tension side and the reported tensions saturate at the
  // kinetic-friction ratio.
  if (next.routing.contact) {
    double mu = effective_friction(stability_model_from(config),
                                   config.branch.incline_angle);
    double bound = std::exp(mu * std::abs(state.wrap.accumulated_angle));
    FreeLengths avail = free_lengths(next, config);
    double slack_d =
        avail.drone_side - tangent_length(branch, next.drone_pos);
    double slack_p = avail.pod_side - tangent_length(branch, next.pod_pos);
    // A side within a hair of taut carries no impulse tension this step even
    // though it is pulling; score it by its applied-force demand along the
    // taut direction so the slip logic sees the pull it is about to exert.
    constexpr double kStarveBand = 2e-3;
    double eff_d = tension_d;
    double eff_p = tension_p;
    if (eff_d == 0.0 && slack_d < kStarveBand) {
      SideGeometry g =
          side_geometry(branch, next.drone_pos, next.routing.drone_bearing,
                        next.routing.anchor_bearing, next.routing.wrap_sign,
                        true);
      eff_d = std::max(0.0, g.dir.dot(f_drone));
    }
    if (eff_p == 0.0 && slack_p < kStarveBand) {
      SideGeometry g =
          side_geometry(branch, next.pod_pos, next.routing.pod_bearing,
                        next.routing.anchor_bearing, next.routing.wrap_sign,
                        false);
      eff_p = std::max(0.0, g.dir.dot(f_pod));
    }
    double transfer = 0.0;  // positive: pod side -> drone side
    if (eff_d > bound * eff_p + 1e-9) {
      // A taut low side is dragged (kinetic capstan slip); a slack low side
      // only feeds its slack.
      double limit = eff_p > 1e-6
                         ? std::max(avail.pod_side - kMinSideLength, 0.0)
                         : std::max(slack_p, 0.0);
      transfer = std::min(kSlideRate * dt, limit);
      tension_d = std::min(tension_d, bound * tension_p);
    } else if (eff_p > bound * eff_d + 1e-9) {
      double limit = eff_d > 1e-6
                         ? std::max(avail.drone_side - kMinSideLength, 0.0)
                         : std::max(slack_d, 0.0);
      transfer = -std::min(kSlideRate * dt, limit);
      tension_p = std::min(tension_p, bound * tension_d);
    }
    next.routing.drone_material += transfer;
    next.routing.pod_material -= transfer;
  }

  // Position projection with self-consistent geometry: bearings, regime and
  // the wrap split are refreshed as the projection moves the bodies.
  for (int iter = 0; iter < 6; ++iter) {
    next.routing.drone_bearing =
        advance_bearing(next.routing.drone_bearing, branch, next.drone_pos);
    next.routing.pod_bearing =
        advance_bearing(next.routing.pod_bearing, branch, next.pod_pos);
    double winding = state.wrap.accumulated_angle +
                     (next.routing.pod_bearing - state.routing.pod_bearing) -
                     (next.routing.drone_bearing - state.routing.drone_bearing);

    TetherRouting& r = next.routing;
    if (!r.contact && std::abs(winding) >= kContactOn) {
      int s = winding >= 0.0 ? 1 : -1;
      double gamma_d = tangent_half_angle(branch, next.drone_pos);
      double gamma_p = tangent_half_angle(branch, next.pod_pos);
      double tb_d = r.drone_bearing + s * gamma_d;
      double tb_p = r.pod_bearing - s * gamma_p;
      // Bearings are tracked continuously, so this is the full contact angle.
      double contact_angle = s * (tb_p - tb_d);
      // Engage once the tangent construction is consistent with the winding.
      if (contact_angle > 0.1) {
        r.contact = true;
        r.wrap_sign = s;
        r.anchor_bearing = 0.5 * (tb_d + tb_p);
        // Split the free pool: each side gets its geometric need plus a
        // share of the slack proportional to its free length.
        double ld = tangent_length(branch, next.drone_pos);
        double lp = tangent_length(branch, next.pod_pos);
        double arc = branch.radius * contact_angle;
        double pool = config.tether.total_length - next.spooled_length;
        double slack = pool - (ld + lp + arc);
        double share = ld + lp > 1e-12 ? ld / (ld + lp) : 0.5;
        r.drone_material = ld + 0.5 * arc + slack * share;
        r.pod_material = pool - r.drone_material;
      }
    } else if (r.contact && std::abs(winding) < kContactOff) {
      r.contact = false;
      r.wrap_sign = 0;
    }

    if (!r.contact) {
      double pool = config.tether.total_length - next.spooled_length;
      Vec2 diff = next.drone_pos - next.pod_pos;
      double dist = diff.norm();
      double g = dist - pool;
      if (g > 1e-9 && dist > 1e-12 && wd + wp > 0.0) {
        Vec2 u = diff / dist;
        next.drone_pos -= u * (g * wd / (wd + wp));
        next.pod_pos += u * (g * wp / (wd + wp));
      } else if (iter > 0) {
        break;
      }
      continue;
    }

    // Anchor shifts: a side that unwound past the anchor moves the split
    // point to its tangent bearing, keeping both free lengths continuous.
    SideGeometry gd = side_geometry(branch, next.drone_pos, r.drone_bearing,
                                    r.anchor_bearing, r.wrap_sign, true);
    SideGeometry gp = side_geometry(branch, next.pod_pos, r.pod_bearing,
                                    r.anchor_bearing, r.wrap_sign, false);
    if (gp.arc_angle < 0.0) {
      r.anchor_bearing += r.wrap_sign * gp.arc_angle;
      r.pod_material -= branch.radius * gp.arc_angle;
      r.drone_material += branch.radius * gp.arc_angle;
      gp.arc_angle = 0.0;
      gd = side_geometry(branch, next.drone_pos, r.drone_bearing,
                         r.anchor_bearing, r.wrap_sign, true);
    }
    if (gd.arc_angle < 0.0) {
      r.anchor_bearing -= r.wrap_sign * gd.arc_angle;
      r.drone_material -= branch.radius * gd.arc_angle;
      r.pod_material += branch.radius * gd.arc_angle;
      gd.arc_angle = 0.0;
      gp = side_geometry(branch, next.pod_pos, r.pod_bearing,
                         r.anchor_bearing, r.wrap_sign, false);
    }

    double avail_d = r.drone_material - branch.radius * gd.arc_angle;
    double avail_p = r.pod_material - branch.radius * gp.arc_angle;
    double g_d = gd.free_length - avail_d;
    double g_p = gp.free_length - avail_p;
    bool moved = false;
    if (g_d > 1e-9 && wd > 0.0) {
      next.drone_pos -= gd.dir * g_d;
      moved = true;
    }
    if (g_p > 1e-9 && wp > 0.0) {
      next.pod_pos -= gp.dir * g_p;
      moved = true;
    }
    if (!moved && iter > 0) break;
  }

  // Final winding-number bookkeeping from the net step displacement, the
  // same accumulation the geometry module exposes.
  next.wrap = wrap_angle_update(state.wrap, branch, pod_old, next.pod_pos);
  {
    WrapState reverse = wrap_angle_update(WrapState{}, branch, drone_old,
                                          next.drone_pos);
    next.wrap.accumulated_angle -= reverse.accumulated_angle;
  }
  next.wrap.contact = next.routing.contact;
  if (next.routing.contact) {
    const TetherRouting& r = next.routing;
    SideGeometry gd = side_geometry(branch, next.drone_pos, r.drone_bearing,
                                    r.anchor_bearing, r.wrap_sign, true);
    SideGeometry gp = side_geometry(branch, next.pod_pos, r.pod_bearing,
                                    r.anchor_bearing, r.wrap_sign, false);
    next.wrap.entry_tangent_point = gd.tangent;
    next.wrap.exit_tangent_point = gp.tangent;
    double avail_d = r.drone_material - branch.radius * gd.arc_angle;
    double avail_p = r.pod_material - branch.radius * gp.arc_angle;
    next.tether_taut = gd.free_length >= avail_d - kTautBand &&
                       gp.free_length >= avail_p - kTautBand;
  } else {
    double pool = config.tether.total_length - next.spooled_length;
    next.tether_taut = (next.drone_pos - next.pod_pos).norm() >= pool - kTautBand;
  }
  next.drone_tension = tension_d;
  next.pod_tension = tension_p;
  next.time = state.time + dt;

  double ke = 0.5 * md * next.drone_vel.norm2() +
              0.5 * mp * next.pod_vel.norm2();
  if (ke > 10.0 * next.initial_energy) {
    throw InstabilityError("integration blow-up: kinetic energy exceeds 10x "
                           "initial mechanical energy");
  }
  return next;
}

}  // namespace perch
