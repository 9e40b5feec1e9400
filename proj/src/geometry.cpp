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

#include "n3p/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace n3p {

Pose to_frame(const Pose& pose_world, const Pose& frame_world) {
  const double c = std::cos(frame_world.theta);
  const double s = std::sin(frame_world.theta);
  const double dx = pose_world.x - frame_world.x;
  const double dy = pose_world.y - frame_world.y;
  return Pose(c * dx + s * dy, -s * dx + c * dy, pose_world.theta - frame_world.theta);
}

Pose from_frame(const Pose& pose_local, const Pose& frame_world) {
  const double c = std::cos(frame_world.theta);
  const double s = std::sin(frame_world.theta);
  return Pose(frame_world.x + c * pose_local.x - s * pose_local.y,
              frame_world.y + s * pose_local.x + c * pose_local.y,
              pose_local.theta + frame_world.theta);
}

Vec2 point_to_frame(const Vec2& p_world, const Pose& frame_world) {
  const double c = std::cos(frame_world.theta);
  const double s = std::sin(frame_world.theta);
  const double dx = p_world.x - frame_world.x;
  const double dy = p_world.y - frame_world.y;
  return {c * dx + s * dy, -s * dx + c * dy};
}

Vec2 point_from_frame(const Vec2& p_local, const Pose& frame_world) {
  const double c = std::cos(frame_world.theta);
  const double s = std::sin(frame_world.theta);
  return {frame_world.x + c * p_local.x - s * p_local.y,
          frame_world.y + s * p_local.x + c * p_local.y};
}

ObstacleCloud cloud_to_frame(const ObstacleCloud& world, const Pose& frame_world) {
  ObstacleCloud out;
  out.points.reserve(world.points.size());
  for (const Vec2& p : world.points) out.points.push_back(point_to_frame(p, frame_world));
  return out;
}

ObstacleCloud cloud_from_frame(const ObstacleCloud& local, const Pose& frame_world) {
  ObstacleCloud out;
  out.points.reserve(local.points.size());
  for (const Vec2& p : local.points) out.points.push_back(point_from_frame(p, frame_world));
  return out;
}

std::string VehicleSpec::validate() const {
  if (!(body_length > 0.0) || !(body_width > 0.0)) return "body dimensions must be positive";
  if (!(wheelbase > 0.0) || wheelbase >= body_length) return "wheelbase must be in (0, body_length)";
  if (rear_overhang < 0.0 || rear_overhang + wheelbase > body_length)
    return "rear_overhang + wheelbase must not exceed body_length";
  if (!(max_steer > 0.0) || max_steer >= kPi / 2.0) return "max_steer must be in (0, pi/2)";
  if (!(v_forward > 0.0) || !(v_reverse > 0.0)) return "speeds must be positive";
  if (safety_margin < 0.0) return "safety_margin must be non-negative";
  return {};
}

double Footprint::area() const {
  double a = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vec2& p = corners[i];
    const Vec2& q = corners[(i + 1) % 4];
    a += p.x * q.y - q.x * p.y;
  }
  return std::abs(a) * 0.5;
}

void Footprint::bounds(double& min_x, double& min_y, double& max_x, double& max_y) const {
  min_x = min_y = std::numeric_limits<double>::infinity();
  max_x = max_y = -std::numeric_limits<double>::infinity();
  for (const Vec2& c : corners) {
    min_x = std::min(min_x, c.x);
    min_y = std::min(min_y, c.y);
    max_x = std::max(max_x, c.x);
    max_y = std::max(max_y, c.y);
  }
}

Footprint footprint_at(const VehicleSpec& spec, const Pose& pose, double inflate) {
  const double rear = -(spec.rear_overhang + inflate);
  const double front = spec.front_overhang() + inflate;
  const double half = spec.body_width * 0.5 + inflate;
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  auto world = [&](double bx, double by) -> Vec2 {
    return {pose.x + c * bx - s * by, pose.y + s * bx + c * by};
  };
  return Footprint{{world(rear, -half), world(front, -half), world(front, half), world(rear, half)}};
}

namespace {

// Strict-interior test of one point against the inflated footprint.
inline bool point_inside(const VehicleSpec& spec, const Pose& pose, double c, double s,
                         double inflate, const Vec2& p) {
  const double dx = p.x - pose.x;
  const double dy = p.y - pose.y;
  const double bx = c * dx + s * dy;
  const double by = -s * dx + c * dy;
  const double rear = -(spec.rear_overhang + inflate);
  const double front = spec.front_overhang() + inflate;
  const double half = spec.body_width * 0.5 + inflate;
  return bx > rear && bx < front && by > -half && by < half;
}

}  // namespace

bool pose_in_collision(const VehicleSpec& spec, const Pose& pose, const ObstacleCloud& obstacles) {
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  for (const Vec2& p : obstacles.points) {
    if (point_inside(spec, pose, c, s, spec.safety_margin, p)) return true;
  }
  return false;
}

bool path_collision_free(const VehicleSpec& spec, std::span<const Pose> poses,
                         const ObstacleCloud& obstacles) {
  for (const Pose& pose : poses) {
    if (pose_in_collision(spec, pose, obstacles)) return false;
  }
  return true;
}

CollisionChecker::CollisionChecker(const ObstacleCloud& cloud, const VehicleSpec& spec)
    : spec_(spec), points_(cloud.points) {
  for (int32_t i = 0; i < static_cast<int32_t>(points_.size()); ++i) {
    const int ix = static_cast<int>(std::floor(points_[i].x / kCell));
    const int iy = static_cast<int>(std::floor(points_[i].y / kCell));
    buckets_[key(ix, iy)].push_back(i);
  }
}

bool CollisionChecker::pose_in_collision(const Pose& pose, double extra_inflate) const {
  if (points_.empty()) return false;
  const double inflate = spec_.safety_margin + extra_inflate;
  const Footprint fp = footprint_at(spec_, pose, inflate);
  double min_x, min_y, max_x, max_y;
  fp.bounds(min_x, min_y, max_x, max_y);
  const double c = std::cos(pose.theta);
  const double s = std::sin(pose.theta);
  const int ix0 = static_cast<int>(std::floor(min_x / kCell));
  const int ix1 = static_cast<int>(std::floor(max_x / kCell));
  const int iy0 = static_cast<int>(std::floor(min_y / kCell));
  const int iy1 = static_cast<int>(std::floor(max_y / kCell));
  for (int ix = ix0; ix <= ix1; ++ix) {
    for (int iy = iy0; iy <= iy1; ++iy) {
      auto it = buckets_.find(key(ix, iy));
      if (it == buckets_.end()) continue;
      for (int32_t idx : it->second) {
        if (point_inside(spec_, pose, c, s, inflate, points_[idx])) return true;
      }
    }
  }
  return false;
}

bool CollisionChecker::path_collision_free(std::span<const Pose> poses) const {
  for (const Pose& pose : poses) {
    if (pose_in_collision(pose)) return false;
  }
  return true;
}

}  // namespace n3p
