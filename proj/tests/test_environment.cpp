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

#include "n3p/environment.hpp"

#include <doctest.h>

#include "n3p/config.hpp"
#include "n3p/rng.hpp"

using namespace n3p;

TEST_SUITE_BEGIN("environment");

namespace {
const VehicleSpec kVehicle;
const EnvGeometry kGeom;
}  // namespace

TEST_CASE("quantization follows the floor-and-clamp rule") {
  QuantizationGrid grid;
  grid.w_lane = GridAxis{4.0, 8.0, 0.5};
  grid.w_spot = GridAxis{2.4, 4.2, 0.2};
  grid.d_deadend = GridAxis{4.0, 12.0, 1.0};

  // Floor: 9.3 -> 9.0.
  const auto a = quantize(EnvAbstraction{6.0, 3.0, 9.3, ParkingType::reverse}, grid);
  REQUIRE(a.has_value());
  CHECK(a->d_deadend == doctest::Approx(9.0));

  // Clamp to the axis maximum.
  const auto b = quantize(EnvAbstraction{6.0, 4.5, 9.0, ParkingType::reverse}, grid);
  REQUIRE(b.has_value());
  CHECK(b->w_spot == doctest::Approx(4.2));

  // Exact grid points map to themselves.
  const auto c = quantize(EnvAbstraction{6.5, 2.8, 11.0, ParkingType::reverse}, grid);
  REQUIRE(c.has_value());
  CHECK(c->w_lane == doctest::Approx(6.5));
  CHECK(c->w_spot == doctest::Approx(2.8));
  CHECK(c->d_deadend == doctest::Approx(11.0));

  // Below the minimum: no trained configuration fits.
  CHECK_FALSE(quantize(EnvAbstraction{6.0, 2.3, 9.0, ParkingType::reverse}, grid).has_value());
  CHECK_FALSE(quantize(EnvAbstraction{3.4, 3.0, 9.0, ParkingType::reverse}, grid).has_value());

  // Quantization never enlarges any parameter.
  Rng rng(5);
  for (int i = 0; i < 2000; ++i) {
    const EnvAbstraction e{rng.uniform(4.0, 9.0), rng.uniform(2.4, 5.0), rng.uniform(4.0, 14.0),
                           ParkingType::reverse};
    const auto q = quantize(e, grid);
    if (!q) continue;
    CHECK(q->w_lane <= e.w_lane + 1e-9);
    CHECK(q->w_spot <= e.w_spot + 1e-9);
    CHECK(q->d_deadend <= e.d_deadend + 1e-9);
  }
}

TEST_CASE("synthesized environments round-trip through abstraction") {
  // Generator ground truth is the oracle: measuring the synthetic walls must
  // reproduce the parameters that built them.
  for (ParkingType type : {ParkingType::reverse, ParkingType::forward, ParkingType::parallel}) {
    AppConfig cfg;
    const QuantizationGrid grid = cfg.grid_for(type);
    for (int i = 0; i < grid.count(); i += 7) {
      const EnvAbstraction e = grid.env_at(i, type);
      ObstacleCloud cloud;
      GoalSpec goal;
      synth_abstract_obstacles(e, kVehicle, kGeom, &cloud, &goal);
      const AbstractionResult res = abstract_environment(cloud, type, kVehicle, kGeom);
      REQUIRE(res.env.has_value());
      CHECK_FALSE(res.spot_blocked);
      CHECK(res.env->w_lane == doctest::Approx(e.w_lane).epsilon(0.05));
      CHECK(res.env->w_spot == doctest::Approx(e.w_spot).epsilon(0.05));
      CHECK(res.env->d_deadend == doctest::Approx(e.d_deadend).epsilon(0.05));
    }
  }
}

TEST_CASE("goal pose sits collision-free inside every synthesized spot") {
  for (ParkingType type : {ParkingType::reverse, ParkingType::forward, ParkingType::parallel}) {
    AppConfig cfg;
    const QuantizationGrid grid = cfg.grid_for(type);
    for (int i = 0; i < grid.count(); ++i) {
      const EnvAbstraction e = grid.env_at(i, type);
      if (e.w_spot < kVehicle.body_width + 2 * kVehicle.safety_margin + 0.1) continue;
      ObstacleCloud cloud;
      GoalSpec goal;
      synth_abstract_obstacles(e, kVehicle, kGeom, &cloud, &goal);
      CHECK_FALSE(pose_in_collision(kVehicle, goal.goal, cloud));
    }
  }
}

TEST_CASE("parallel goal leaves the required depth below the boundary") {
  const GoalSpec g = goal_spec_for(ParkingType::parallel, kVehicle, kGeom);
  CHECK(g.y_boundary == doctest::Approx(kGeom.spot_depth_parallel / 2));
  const Footprint fp = footprint_at(kVehicle, g.goal, 0.0);
  double min_x, min_y, max_x, max_y;
  fp.bounds(min_x, min_y, max_x, max_y);
  CHECK(max_y < g.y_boundary);                       // fully below the boundary line
  CHECK(g.y_boundary - min_y >= 0.9 * g.d_spot);     // leaves the advertised depth
}

TEST_CASE("a vehicle protruding into the lane narrows the measured lane") {
  const EnvAbstraction e{6.0, 3.0, 10.0, ParkingType::reverse};
  ObstacleCloud cloud;
  synth_abstract_obstacles(e, kVehicle, kGeom, &cloud, nullptr);
  const double mouth = kGeom.mouth_y(ParkingType::reverse);

  // Points of a neighbor bumper 0.3 m into the lane near the spot edge.
  const double protrusion = 0.3;
  for (double x = 1.8; x <= 2.8; x += 0.05) {
    cloud.points.push_back(Vec2{x, mouth + protrusion});
  }
  const AbstractionResult res = abstract_environment(cloud, ParkingType::reverse, kVehicle, kGeom);
  REQUIRE(res.env.has_value());
  CHECK(res.env->w_lane <= 6.0 - protrusion + 1e-9);
  CHECK(res.env->w_spot == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("a vehicle across the access region invalidates the spot") {
  const EnvAbstraction e{6.0, 3.0, 10.0, ParkingType::reverse};
  ObstacleCloud cloud;
  synth_abstract_obstacles(e, kVehicle, kGeom, &cloud, nullptr);
  const double mouth = kGeom.mouth_y(ParkingType::reverse);
  for (double x = -0.5; x <= 0.5; x += 0.05) {
    cloud.points.push_back(Vec2{x, mouth + 1.0});
  }
  const AbstractionResult res = abstract_environment(cloud, ParkingType::reverse, kVehicle, kGeom);
  CHECK(res.spot_blocked);
  CHECK_FALSE(res.env.has_value());
}

TEST_CASE("scenario generation is deterministic and valid") {
  for (Difficulty diff : {Difficulty::easy, Difficulty::complex, Difficulty::extreme}) {
    for (ParkingType type : {ParkingType::reverse, ParkingType::parallel}) {
      const Scenario a = generate_scenario(diff, type, 42, kVehicle, kGeom);
      const Scenario b = generate_scenario(diff, type, 42, kVehicle, kGeom);
      CHECK(scenario_to_string(a) == scenario_to_string(b));

      const Scenario c = generate_scenario(diff, type, 43, kVehicle, kGeom);
      CHECK(scenario_to_string(a) != scenario_to_string(c));
    }
  }

  Rng seeds(77);
  int deadend_count = 0;
  for (int i = 0; i < 120; ++i) {
    const Difficulty diff = static_cast<Difficulty>(i % 3);
    const ParkingType type = static_cast<ParkingType>(i % 3 == 0 ? i / 3 % 3 : i % 3 - 1);
    const Scenario s = generate_scenario(diff, type, 1000 + i, kVehicle, kGeom);

    // Start must be collision-free and the access region clear.
    CHECK_FALSE(pose_in_collision(kVehicle, s.start, s.obstacles));
    const ObstacleCloud local = cloud_to_frame(s.obstacles, s.spot_pose);
    const AbstractionResult res = abstract_environment(local, s.type, kVehicle, kGeom);
    REQUIRE(res.env.has_value());

    // Ground truth bounds per difficulty.
    const bool parallel = type == ParkingType::parallel;
    double lo = 0, hi = 0;
    switch (diff) {
      case Difficulty::easy: lo = parallel ? 7.0 : 3.2; hi = parallel ? 8.0 : 4.2; break;
      case Difficulty::complex: lo = parallel ? 6.5 : 2.8; hi = parallel ? 7.5 : 3.7; break;
      case Difficulty::extreme: lo = parallel ? 6.0 : 2.3; hi = parallel ? 7.0 : 3.2; break;
    }
    CHECK(s.true_params.w_spot >= lo - 1e-9);
    CHECK(s.true_params.w_spot <= hi + 1e-9);
    if (diff != Difficulty::easy) {
      CHECK(s.true_params.d_deadend <= (diff == Difficulty::extreme ? 8.0 : 12.0) + 1e-9);
    }
    if (s.true_params.d_deadend < kGeom.local_extent - 1e-9) ++deadend_count;

    // Conservative abstraction: never larger than the generator's truth.
    CHECK(res.env->w_lane <= s.true_params.w_lane + 0.05);
    CHECK(res.env->w_spot <= s.true_params.w_spot + 0.05);
    CHECK(res.env->d_deadend <= s.true_params.d_deadend + 0.05);
  }
  CHECK(deadend_count > 60);
}

TEST_CASE("scenario serialization round-trips and reports malformed input") {
  const Scenario s = generate_scenario(Difficulty::complex, ParkingType::parallel, 7, kVehicle,
                                       kGeom);
  const std::string text = scenario_to_string(s);
  const Scenario back = scenario_from_string(text);
  CHECK(scenario_to_string(back) == text);
  CHECK(back.obstacles.size() == s.obstacles.size());
  CHECK(back.start.x == s.start.x);
  CHECK(back.true_params.w_spot == s.true_params.w_spot);

  CHECK_THROWS_AS((void)scenario_from_string("n3p-scenario v2\n"), FormatError);
  // Truncated body names the failing line.
  try {
    const std::string cut = text.substr(0, text.size() / 2);
    (void)scenario_from_string(cut.substr(0, cut.rfind('\n') + 1));
    CHECK(false);
  } catch (const FormatError& e) {
    CHECK(e.line() > 1);
  }
}

TEST_SUITE_END();
