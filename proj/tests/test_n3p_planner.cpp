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

#include "n3p/n3p_planner.hpp"

#include <doctest.h>

#include "n3p/rng.hpp"

using namespace n3p;

namespace {

const VehicleSpec kVehicle;
const EnvGeometry kGeom;

QuantizationGrid reverse_grid() {
  QuantizationGrid grid;
  grid.w_lane = GridAxis{5.0, 6.0, 0.5};
  grid.w_spot = GridAxis{2.8, 3.6, 0.2};
  grid.d_deadend = GridAxis{8.0, 12.0, 2.0};
  return grid;
}

const SelectorDataset& reverse_dataset() {
  static const SelectorDataset d = [] {
    PlannerConfig cfg;
    return collect_offline(ParkingType::reverse, reverse_grid(), 6, kVehicle, cfg, kGeom, 4242, 1);
  }();
  return d;
}

/// A scenario whose world equals a synthesized training environment placed
/// at an arbitrary spot pose.
Scenario scenario_from_env(const EnvAbstraction& e, const Pose& spot_pose, const Pose& start_spot) {
  ObstacleCloud cloud;
  synth_abstract_obstacles(e, kVehicle, kGeom, &cloud, nullptr);
  Scenario s;
  s.type = e.type;
  s.difficulty = Difficulty::easy;
  s.seed = 0;
  s.obstacles = cloud_from_frame(cloud, spot_pose);
  s.spot_pose = spot_pose;
  s.start = from_spot_frame(start_spot, spot_pose);
  s.true_params = e;
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("n3p_planner");

TEST_CASE("concatenate merges states and recounts direction changes") {
  const auto state = [](double x, Gear g, double len) {
    return PathState{Pose(x, 0, 0), g, 0.0, len};
  };
  PlannedPath a;
  a.states = {state(0, Gear::forward, 0), state(1, Gear::forward, 1), state(2, Gear::forward, 1)};
  a.stats.total_length = 2;
  a.stats.direction_changes = 0;
  PlannedPath b;
  b.states = {state(2, Gear::reverse, 0), state(1.5, Gear::reverse, 0.5),
              state(2.5, Gear::forward, 1.0)};
  b.stats.total_length = 1.5;
  b.stats.direction_changes = 1;
  b.rs_start_index = 1;

  const PlannedPath merged = concatenate(a, b);
  CHECK(merged.states.size() == 5);
  // Junction flip counts once: F,F then R,F.
  CHECK(merged.stats.direction_changes == 2);
  CHECK(merged.stats.total_length == doctest::Approx(3.5));
  REQUIRE(merged.rs_start_index.has_value());
  CHECK(*merged.rs_start_index == 3);

  // Empty second path: unchanged.
  const PlannedPath same = concatenate(a, PlannedPath{});
  CHECK(same.states.size() == a.states.size());

  // Mismatched junction poses.
  PlannedPath off = b;
  off.states[0].pose = Pose(2.1, 0, 0);
  CHECK_THROWS_AS((void)concatenate(a, off), JunctionMismatch);
}

TEST_CASE("start at a training sample resolves with an immediate connection") {
  const SelectorDataset& d = reverse_dataset();
  REQUIRE_FALSE(d.samples.empty());
  const KnnIndex index(d, FeatureScales{});
  PlannerConfig cfg;

  // Pick a sample from an environment and rebuild that exact scene.
  const Sample& probe = d.samples[d.samples.size() / 3];
  const EnvAbstraction e{probe.w_lane, probe.w_spot, probe.d_deadend, ParkingType::reverse};
  const Pose spot_pose(2.0, -1.0, 0.7);
  const Scenario scenario = scenario_from_env(e, spot_pose, probe.x0);

  const N3POutcome outcome = plan_n3p(scenario.start, scenario, index, kVehicle, cfg, kGeom);
  REQUIRE(outcome.ok());
  const N3PResult& result = *outcome.result;
  CHECK_FALSE(result.used_fallback);

  // The prediction equals that sample's stored pose (zero-distance match).
  REQUIRE(result.g_pre_world.has_value());
  const Pose g_pre_spot = to_spot_frame(*result.g_pre_world, spot_pose);
  CHECK(g_pre_spot.x == doctest::Approx(probe.rs_start.x).epsilon(1e-9));
  CHECK(g_pre_spot.y == doctest::Approx(probe.rs_start.y).epsilon(1e-9));

  // Junction continuity at the preparatory pose.
  REQUIRE(result.path.rs_start_index.has_value());
  CHECK(result.stages.parking_nodes <= 2);
  CHECK(replay_consistent(result.path, kVehicle));
  CHECK(path_collision_free(kVehicle, path_poses(result.path), scenario.obstacles));

  // Node accounting matches the stage breakdown.
  CHECK(result.path.stats.nodes_expanded ==
        result.stages.approach_nodes + result.stages.parking_nodes);
}

TEST_CASE("junction pose equals the predicted preparatory pose within 1e-6") {
  const SelectorDataset& d = reverse_dataset();
  const KnnIndex index(d, FeatureScales{});
  PlannerConfig cfg;
  Rng rng(55);
  int checked = 0;
  for (int i = 0; i < 6; ++i) {
    const EnvAbstraction e{6.0, rng.uniform(2.9, 3.5), rng.uniform(8.5, 11.5),
                           ParkingType::reverse};
    const Pose start_spot(rng.uniform(-9, -4), kGeom.mouth_y(ParkingType::reverse) + 3.0,
                          rng.uniform(-0.4, 0.4));
    const Scenario scenario = scenario_from_env(e, Pose(), start_spot);
    const N3POutcome outcome = plan_n3p(scenario.start, scenario, index, kVehicle, cfg, kGeom);
    REQUIRE(outcome.ok());
    if (outcome.result->used_fallback) continue;
    ++checked;
    REQUIRE(outcome.result->g_pre_world.has_value());
    // The junction between stages is the state where the parking stage
    // begins; approach ends exactly on g_pre.
    bool found = false;
    for (const PathState& s : outcome.result->path.states) {
      if (position_distance(s.pose, *outcome.result->g_pre_world) < 1e-6 &&
          std::abs(angle_diff(s.pose.theta, outcome.result->g_pre_world->theta)) < 1e-6) {
        found = true;
        break;
      }
    }
    CHECK(found);
  }
  CHECK(checked >= 3);
}

TEST_CASE("degenerate start: already parked") {
  const SelectorDataset& d = reverse_dataset();
  const KnnIndex index(d, FeatureScales{});
  PlannerConfig cfg;
  const EnvAbstraction e{6.0, 3.4, 10.0, ParkingType::reverse};
  ObstacleCloud cloud;
  GoalSpec goal;
  synth_abstract_obstacles(e, kVehicle, kGeom, &cloud, &goal);
  Scenario s;
  s.type = ParkingType::reverse;
  s.obstacles = cloud;
  s.spot_pose = Pose();
  s.start = goal.goal;
  s.true_params = e;

  const N3POutcome outcome = plan_n3p(s.start, s, index, kVehicle, cfg, kGeom);
  REQUIRE(outcome.ok());
  CHECK(outcome.result->path.stats.nodes_expanded == 0);
  CHECK(outcome.result->path.stats.total_length == 0.0);
  CHECK_FALSE(outcome.result->g_pre_world.has_value());
}

TEST_CASE("corrupted predictions fall back to direct planning") {
  const SelectorDataset& clean = reverse_dataset();
  SelectorDataset corrupted = clean;
  for (Sample& s : corrupted.samples) {
    s.rs_start = Pose(0.0, -kGeom.mouth_y(ParkingType::reverse), 0.0);  // inside the spot wall region
  }
  // Ensure the poisoned pose really is in collision in its environment.
  {
    ObstacleCloud cloud;
    synth_abstract_obstacles(EnvAbstraction{6.0, 3.0, 10.0, ParkingType::reverse}, kVehicle, kGeom,
                             &cloud, nullptr);
    CHECK(pose_in_collision(kVehicle, corrupted.samples[0].rs_start, cloud));
  }
  const KnnIndex bad_index(corrupted, FeatureScales{});
  const KnnIndex good_index(clean, FeatureScales{});
  PlannerConfig cfg;

  Rng rng(66);
  for (int i = 0; i < 4; ++i) {
    const EnvAbstraction e{6.0, rng.uniform(3.0, 3.5), rng.uniform(8.5, 11.5),
                           ParkingType::reverse};
    const Pose start_spot(rng.uniform(-9, -5), kGeom.mouth_y(ParkingType::reverse) + 3.2,
                          rng.uniform(-0.3, 0.3));
    const Scenario scenario = scenario_from_env(e, Pose(), start_spot);

    const N3POutcome direct = plan_n3p(scenario.start, scenario, good_index, kVehicle, cfg, kGeom);
    const N3POutcome poisoned =
        plan_n3p(scenario.start, scenario, bad_index, kVehicle, cfg, kGeom);
    REQUIRE(direct.ok());
    REQUIRE(poisoned.ok());
    CHECK(poisoned.result->used_fallback);
    CHECK(replay_consistent(poisoned.result->path, kVehicle));
    CHECK(path_collision_free(kVehicle, path_poses(poisoned.result->path), scenario.obstacles));
  }
}

TEST_SUITE_END();
