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

#ifndef PERCH_GEOMETRY_HPP_
#define PERCH_GEOMETRY_HPP_

#include <stdexcept>

#include "perch/scenario.hpp"
#include "perch/vec2.hpp"

namespace perch {

class PenetrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Branch cross-section in the simulation plane.
struct BranchCircle {
  Vec2 center;
  double radius = 0.0;
};

inline BranchCircle branch_circle(const BranchSpec& branch) {
  return {{0.0, branch.center_height}, branch.diameter / 2.0};
}

// Signed accumulated angle of the tether around the branch center.
// loops = floor(|accumulated_angle| / 2*pi).
struct WrapState {
  double accumulated_angle = 0.0;  // rad, signed winding
  bool contact = false;
  Vec2 entry_tangent_point;  // drone-side departure point on the branch
  Vec2 exit_tangent_point;   // pod-side departure point
};

inline int wrap_loops(const WrapState& wrap) {
  return static_cast<int>(std::floor(std::abs(wrap.accumulated_angle) /
                                     (2.0 * kPi)));
}

// Signed angle subtended at the branch center by the move prev -> next.
// Throws PenetrationError if either point lies strictly inside the circle.
double subtended_angle(const BranchCircle& branch, const Vec2& prev,
                       const Vec2& next);

// Accumulates the subtended angle of an anchor move into the wrap state.
WrapState wrap_angle_update(const WrapState& state, const BranchCircle& branch,
                            const Vec2& prev_anchor, const Vec2& new_anchor);

// Tangent point on the circle seen from external point p. side = +1 picks
// the tangent point counterclockwise of the direction to p, -1 clockwise.
Vec2 tangent_point(const BranchCircle& branch, const Vec2& p, int side);

// Half-angle at the center between an external point and its tangent
// points, acos(R/d).
double tangent_half_angle(const BranchCircle& branch, const Vec2& p);

// Straight free length from external point to its tangent point,
// sqrt(d^2 - R^2).
double tangent_length(const BranchCircle& branch, const Vec2& p);

struct TetherPartition {
  double free_drone_side = 0.0;  // m
  double wrapped_arc = 0.0;      // m
  double free_pod_side = 0.0;    // m
  double total(double spooled) const {
    return free_drone_side + wrapped_arc + free_pod_side + spooled;
  }
};

// Partitions a taut tether routed drone -> branch wrap -> pod. Without
// contact the tether is the straight segment between the bodies. The
// wrapped contact arc is reconstructed from the winding angle and the
// tangent-point bearings.
TetherPartition tether_partition(const Vec2& drone_pos, const Vec2& pod_pos,
                                 const BranchCircle& branch,
                                 const WrapState& wrap, double spooled);

struct CriticalDistanceParams {
  double body_radius = 0.30;  // m, guard radius or pod half-diagonal
  double clearance = 0.05;    // m
};

// Minimum center-of-branch standoff below which a circumnavigation
// (wrapping) maneuver cannot clear the branch:
// D_min = branch_diameter / 2 + body_radius + clearance.
double critical_distance(double branch_diameter,
                         const CriticalDistanceParams& params);

}  // namespace perch

#endif  // PERCH_GEOMETRY_HPP_
