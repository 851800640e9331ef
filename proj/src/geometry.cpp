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

#include "perch/geometry.hpp"

#include <cmath>

namespace perch {

namespace {

void check_outside(const BranchCircle& branch, const Vec2& p,
                   const char* what) {
  if ((p - branch.center).norm() < branch.radius) {
    throw PenetrationError(std::string(what) +
                           " lies inside the branch circle");
  }
}

}  // namespace

double subtended_angle(const BranchCircle& branch, const Vec2& prev,
                       const Vec2& next) {
  check_outside(branch, prev, "previous anchor");
  check_outside(branch, next, "new anchor");
  Vec2 a = prev - branch.center;
  Vec2 b = next - branch.center;
  return std::atan2(a.cross(b), a.dot(b));
}

WrapState wrap_angle_update(const WrapState& state, const BranchCircle& branch,
                            const Vec2& prev_anchor, const Vec2& new_anchor) {
  WrapState next = state;
  next.accumulated_angle += subtended_angle(branch, prev_anchor, new_anchor);
  return next;
}

double tangent_half_angle(const BranchCircle& branch, const Vec2& p) {
  double d = (p - branch.center).norm();
  if (d < branch.radius) {
    throw PenetrationError("point lies inside the branch circle");
  }
  double c = branch.radius / d;
  return std::acos(c > 1.0 ? 1.0 : c);
}

double tangent_length(const BranchCircle& branch, const Vec2& p) {
  double d2 = (p - branch.center).norm2();
  double r2 = branch.radius * branch.radius;
  if (d2 < r2) {
    throw PenetrationError("point lies inside the branch circle");
  }
  return std::sqrt(d2 - r2);
}

Vec2 tangent_point(const BranchCircle& branch, const Vec2& p, int side) {
  double bearing = std::atan2(p.y - branch.center.y, p.x - branch.center.x);
  double gamma = tangent_half_angle(branch, p);
  double b = bearing + (side >= 0 ? gamma : -gamma);
  return branch.center + Vec2{std::cos(b), std::sin(b)} * branch.radius;
}

TetherPartition tether_partition(const Vec2& drone_pos, const Vec2& pod_pos,
                                 const BranchCircle& branch,
                                 const WrapState& wrap, double /*spooled*/) {
  check_outside(branch, drone_pos, "drone position");
  check_outside(branch, pod_pos, "pod position");
  TetherPartition part;
  if (!wrap.contact) {
    part.free_drone_side = (drone_pos - pod_pos).norm();
    return part;
  }
  // Wrapped: straight tangent segments plus the contact arc. The tether
  // runs around the branch in the wrap direction; the drone-side tangent
  // departs where the arc begins, the pod-side tangent where it ends.
  int s = wrap.accumulated_angle >= 0.0 ? 1 : -1;
  double gamma_d = tangent_half_angle(branch, drone_pos);
  double gamma_p = tangent_half_angle(branch, pod_pos);
  double bearing_d =
      std::atan2(drone_pos.y - branch.center.y, drone_pos.x - branch.center.x);
  double bearing_p =
      std::atan2(pod_pos.y - branch.center.y, pod_pos.x - branch.center.x);
  double tan_bearing_d = bearing_d + s * gamma_d;
  double tan_bearing_p = bearing_p - s * gamma_p;
  // Contact angle congruent to the tangent-bearing difference, lifted to
  // the 2*pi multiple nearest the accumulated winding.
  double base = std::fmod(s * (tan_bearing_p - tan_bearing_d), 2.0 * kPi);
  if (base < 0.0) base += 2.0 * kPi;
  double target = std::abs(wrap.accumulated_angle);
  double k = std::round((target - base) / (2.0 * kPi));
  double contact_angle = base + 2.0 * kPi * (k > 0.0 ? k : 0.0);
  part.free_drone_side = tangent_length(branch, drone_pos);
  part.free_pod_side = tangent_length(branch, pod_pos);
  part.wrapped_arc = branch.radius * contact_angle;
  return part;
}

double critical_distance(double branch_diameter,
                         const CriticalDistanceParams& params) {
  if (branch_diameter < 0.0) {
    throw std::domain_error("branch_diameter must be >= 0");
  }
  return branch_diameter / 2.0 + params.body_radius + params.clearance;
}

}  // namespace perch
