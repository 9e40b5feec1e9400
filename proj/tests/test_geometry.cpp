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

#include <doctest.h>

#include "n3p/rng.hpp"

using namespace n3p;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("wrap_angle lands in (-pi, pi]") {
  CHECK(wrap_angle(kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(-kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(3.0 * kPi) == doctest::Approx(kPi));
  CHECK(wrap_angle(0.0) == 0.0);
  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const double a = rng.uniform(-50.0, 50.0);
    const double w = wrap_angle(a);
    CHECK(w > -kPi);
    CHECK(w <= kPi);
    CHECK(std::abs(std::sin(w) - std::sin(a)) < 1e-9);
    CHECK(std::abs(std::cos(w) - std::cos(a)) < 1e-9);
  }
}

TEST_CASE("spot frame transform identities") {
  // Identity frame leaves the pose unchanged.
  const Pose p = to_spot_frame(Pose(3.0, 2.0, 0.0), Pose(0.0, 0.0, 0.0));
  CHECK(p.x == doctest::Approx(3.0));
  CHECK(p.y == doctest::Approx(2.0));
  CHECK(p.theta == doctest::Approx(0.0));

  // A pose coinciding with the frame origin maps to the origin.
  const Pose q = to_spot_frame(Pose(1.0, 0.0, kPi / 2.0), Pose(1.0, 0.0, kPi / 2.0));
  CHECK(q.x == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.y == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(q.theta == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("frame round-trip is exact within 1e-12") {
  // Oracle: composing the explicit 2x2 rotation with its inverse must give
  // the identity for any (pose, frame) pair.
  Rng rng(11);
  double worst_pos = 0.0, worst_ang = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Pose pose(rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0),
                    rng.uniform(-kPi, kPi));
    const Pose frame(rng.uniform(-40.0, 40.0), rng.uniform(-40.0, 40.0),
                     rng.uniform(-kPi, kPi));
    const Pose back = from_spot_frame(to_spot_frame(pose, frame), frame);
    worst_pos = std::max(worst_pos, std::hypot(back.x - pose.x, back.y - pose.y));
    worst_ang = std::max(worst_ang, std::abs(angle_diff(back.theta, pose.theta)));
  }
  CHECK(worst_pos < 1e-12);
  CHECK(worst_ang < 1e-12);
}

TEST_CASE("footprint dimensions at the reference vehicle") {
  VehicleSpec spec;  // 4.97 x 1.86, overhang 1.07
  const Footprint fp = footprint_at(spec, Pose(0.0, 0.0, 0.0), 0.0);
  double min_x, min_y, max_x, max_y;
  fp.bounds(min_x, min_y, max_x, max_y);
  CHECK(min_x == doctest::Approx(-1.07));
  CHECK(max_x == doctest::Approx(3.90));
  CHECK(min_y == doctest::Approx(-0.93));
  CHECK(max_y == doctest::Approx(0.93));

  // Rotated 90 degrees: the same rectangle rotated.
  const Footprint fr = footprint_at(spec, Pose(0.0, 0.0, kPi / 2.0), 0.0);
  fr.bounds(min_x, min_y, max_x, max_y);
  CHECK(min_y == doctest::Approx(-1.07));
  CHECK(max_y == doctest::Approx(3.90));
  CHECK(min_x == doctest::Approx(-0.93));
  CHECK(max_x == doctest::Approx(0.93));

  // Inflation extends every side.
  const Footprint fi = footprint_at(spec, Pose(0.0, 0.0, 0.0), 0.1);
  fi.bounds(min_x, min_y, max_x, max_y);
  CHECK(min_x == doctest::Approx(-1.17));
  CHECK(max_x == doctest::Approx(4.00));
  CHECK(min_y == doctest::Approx(-1.03));
  CHECK(max_y == doctest::Approx(1.03));
}

TEST_CASE("footprint area is pose-invariant") {
  VehicleSpec spec;
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const Pose pose(rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0), rng.uniform(-kPi, kPi));
    const double inflate = rng.uniform(0.0, 0.4);
    const double expect = (spec.body_length + 2 * inflate) * (spec.body_width + 2 * inflate);
    CHECK(footprint_at(spec, pose, inflate).area() == doctest::Approx(expect).epsilon(1e-9));
  }
}

TEST_CASE("pose collision basics") {
  VehicleSpec spec;
  ObstacleCloud empty;
  CHECK_FALSE(pose_in_collision(spec, Pose(0, 0, 0), empty));

  ObstacleCloud center;
  center.points.push_back(Vec2{1.0, 0.0});
  CHECK(pose_in_collision(spec, Pose(0, 0, 0), center));

  // Point exactly on the inflated boundary: strict interior, no collision.
  ObstacleCloud edge;
  edge.points.push_back(Vec2{spec.front_overhang() + spec.safety_margin, 0.0});
  CHECK_FALSE(pose_in_collision(spec, Pose(0, 0, 0), edge));
}

TEST_CASE("collision is invariant under rigid transforms of pose and cloud") {
  VehicleSpec spec;
  Rng rng(19);
  for (int i = 0; i < 500; ++i) {
    const Pose pose(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-kPi, kPi));
    ObstacleCloud cloud;
    for (int k = 0; k < 12; ++k) {
      cloud.points.push_back(Vec2{rng.uniform(-6, 6), rng.uniform(-6, 6)});
    }
    const Pose frame(rng.uniform(-10, 10), rng.uniform(-10, 10), rng.uniform(-kPi, kPi));
    const bool before = pose_in_collision(spec, pose, cloud);
    const bool after =
        pose_in_collision(spec, from_frame(pose, frame), cloud_from_frame(cloud, frame));
    CHECK(before == after);
  }
}

TEST_CASE("path collision checks against an analytic wall") {
  VehicleSpec spec;
  // A wall of points just beyond the swept footprint of a straight path: the
  // inflated half-width is w/2 + margin; 1 cm clearance beyond it is free.
  const double clear_y = spec.body_width / 2 + spec.safety_margin + 0.01;
  ObstacleCloud wall;
  for (double x = -2.0; x <= 12.0; x += 0.1) wall.points.push_back(Vec2{x, clear_y});

  std::vector<Pose> poses;
  for (double x = 0.0; x <= 10.0; x += 0.1) poses.emplace_back(x, 0.0, 0.0);
  CHECK(path_collision_free(spec, poses, wall));

  // One point inside the margin makes it collide.
  wall.points.push_back(Vec2{5.0, clear_y - 0.02});
  CHECK_FALSE(path_collision_free(spec, poses, wall));

  ObstacleCloud empty;
  CHECK(path_collision_free(spec, poses, empty));
}

TEST_CASE("indexed checker agrees with the naive test") {
  VehicleSpec spec;
  Rng rng(23);
  ObstacleCloud cloud;
  for (int k = 0; k < 300; ++k) {
    cloud.points.push_back(Vec2{rng.uniform(-15, 15), rng.uniform(-15, 15)});
  }
  CollisionChecker checker(cloud, spec);
  for (int i = 0; i < 2000; ++i) {
    const Pose pose(rng.uniform(-14, 14), rng.uniform(-14, 14), rng.uniform(-kPi, kPi));
    CHECK(checker.pose_in_collision(pose) == pose_in_collision(spec, pose, cloud));
  }
}

TEST_SUITE_END();
