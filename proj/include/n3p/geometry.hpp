// Copyright 2026 N3P Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace n3p {

inline constexpr double kPi = 3.14159265358979323846;

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) {
    a += 2.0 * kPi;
  } else if (a > kPi) {
    a -= 2.0 * kPi;
  }
  return a;
}

/// Wrapped difference a - b in (-pi, pi].
inline double angle_diff(double a, double b) { return wrap_angle(a - b); }

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

/// An SE(2) configuration. The heading is kept in (-pi, pi] by every
/// constructor and transform.
struct Pose {
  double x = 0.0;
  double y = 0.0;
  double theta = 0.0;

  Pose() = default;
  Pose(double x_, double y_, double theta_) : x(x_), y(y_), theta(wrap_angle(theta_)) {}

  Vec2 position() const { return {x, y}; }
};

/// Euclidean distance between pose positions.
inline double position_distance(const Pose& a, const Pose& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

/// Express `pose_world` in the frame whose origin/axes are `frame_world`.
Pose to_frame(const Pose& pose_world, const Pose& frame_world);

/// Inverse of to_frame: local pose -> world.
Pose from_frame(const Pose& pose_local, const Pose& frame_world);

/// Express a world pose in the parking-spot frame.
inline Pose to_spot_frame(const Pose& pose_world, const Pose& spot_pose_world) {
  return to_frame(pose_world, spot_pose_world);
}

inline Pose from_spot_frame(const Pose& pose_spot, const Pose& spot_pose_world) {
  return from_frame(pose_spot, spot_pose_world);
}

Vec2 point_to_frame(const Vec2& p_world, const Pose& frame_world);
Vec2 point_from_frame(const Vec2& p_local, const Pose& frame_world);

/// Rectangular vehicle with rear-axle-center reference point.
///
/// The footprint extends `rear_overhang` behind the rear axle and
/// `body_length - rear_overhang` ahead of it along the heading.
struct VehicleSpec {
  double body_length = 4.97;
  double body_width = 1.86;
  double wheelbase = 2.83;
  double max_steer = 34.9 * kPi / 180.0;
  double v_forward = 2.0;
  double v_reverse = 1.0;
  double rear_overhang = 1.07;
  double safety_margin = 0.05;

  double min_turn_radius() const { return wheelbase / std::tan(max_steer); }
  double max_curvature() const { return std::tan(max_steer) / wheelbase; }
  double front_overhang() const { return body_length - rear_overhang; }

  /// Returns an empty string when the spec is geometrically consistent.
  std::string validate() const;
};

/// Unordered 2-D obstacle points in a declared frame.
struct ObstacleCloud {
  std::vector<Vec2> points;

  bool empty() const { return points.empty(); }
  std::size_t size() const { return points.size(); }
};

ObstacleCloud cloud_to_frame(const ObstacleCloud& world, const Pose& frame_world);
ObstacleCloud cloud_from_frame(const ObstacleCloud& local, const Pose& frame_world);

/// Oriented rectangle, corners ordered rear-right, front-right, front-left,
/// rear-left (counter-clockwise in the body frame).
struct Footprint {
  std::array<Vec2, 4> corners;

  double area() const;
  void bounds(double& min_x, double& min_y, double& max_x, double& max_y) const;
};

/// Vehicle footprint at a pose, inflated by `inflate` on all sides.
Footprint footprint_at(const VehicleSpec& spec, const Pose& pose, double inflate = 0.0);

/// True iff any obstacle point lies strictly inside the footprint inflated by
/// the spec's safety margin. Tangent contact does not collide.
bool pose_in_collision(const VehicleSpec& spec, const Pose& pose, const ObstacleCloud& obstacles);

/// True iff no sampled pose collides. Callers sample at their configured
/// arc-length resolution (ds_check).
bool path_collision_free(const VehicleSpec& spec, std::span<const Pose> poses,
                         const ObstacleCloud& obstacles);

/// Bucket-indexed point cloud for repeated pose collision queries.
///
/// Semantics match pose_in_collision exactly: strict interior of the
/// safety-margin-inflated rectangle.
class CollisionChecker {
 public:
  CollisionChecker(const ObstacleCloud& cloud, const VehicleSpec& spec);

  bool pose_in_collision(const Pose& pose, double extra_inflate = 0.0) const;
  bool path_collision_free(std::span<const Pose> poses) const;

  const VehicleSpec& spec() const { return spec_; }

 private:
  static constexpr double kCell = 1.0;

  static int64_t key(int ix, int iy) {
    return (static_cast<int64_t>(ix) << 32) ^ (static_cast<uint32_t>(iy));
  }

  VehicleSpec spec_;
  std::vector<Vec2> points_;
  std::unordered_map<int64_t, std::vector<int32_t>> buckets_;
};

}  // namespace n3p
