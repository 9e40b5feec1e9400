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

#include <chrono>

namespace n3p {

namespace {

constexpr double kJunctionTol = 1e-6;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

N3POutcome direct_fallback(const Pose& start, const Pose& goal_world, const Scenario& scenario,
                           const VehicleSpec& spec, const PlannerConfig& cfg,
                           StageBreakdown stages) {
  PlanOutcome direct = plan(start, goal_world, scenario.obstacles, spec, cfg, Variant::with_rs);
  if (!direct.ok()) return N3POutcome{std::nullopt, direct.failure};
  N3PResult result;
  result.path = std::move(*direct.path);
  result.used_fallback = true;
  result.stages = stages;
  result.path.stats.planning_time_s += stages.abstraction_s + stages.predict_s;
  return N3POutcome{std::move(result), PlanFailure::none};
}

}  // namespace

PlannedPath concatenate(const PlannedPath& approach, const PlannedPath& parking) {
  if (parking.states.empty()) return approach;
  if (approach.states.empty()) return parking;
  const Pose& a = approach.final_pose();
  const Pose& b = parking.states.front().pose;
  if (position_distance(a, b) > kJunctionTol ||
      std::abs(angle_diff(a.theta, b.theta)) > kJunctionTol) {
    throw JunctionMismatch();
  }
  PlannedPath merged;
  merged.states = approach.states;
  merged.states.insert(merged.states.end(), parking.states.begin() + 1, parking.states.end());
  if (parking.rs_start_index) {
    merged.rs_start_index = approach.states.size() - 1 + *parking.rs_start_index;
  } else {
    merged.rs_start_index = approach.rs_start_index;
  }
  merged.cost = approach.cost + parking.cost;
  merged.stats.nodes_expanded = approach.stats.nodes_expanded + parking.stats.nodes_expanded;
  merged.stats.planning_time_s = approach.stats.planning_time_s + parking.stats.planning_time_s;
  merged.stats.total_length = approach.stats.total_length + parking.stats.total_length;
  merged.stats.direction_changes = count_direction_changes(merged.states);
  return merged;
}

N3POutcome plan_n3p(const Pose& start_world, const Scenario& scenario, const KnnIndex& index,
                    const VehicleSpec& spec, const PlannerConfig& cfg, const EnvGeometry& geom) {
  const Pose goal_world = scenario.goal_world(spec, geom);
  StageBreakdown stages;

  // Degenerate input: already parked.
  if (position_distance(start_world, goal_world) <= cfg.goal_tol_xy &&
      std::abs(angle_diff(start_world.theta, goal_world.theta)) <= cfg.goal_tol_theta) {
    N3PResult result;
    result.path.states.push_back(PathState{start_world, Gear::forward, 0.0, 0.0});
    return N3POutcome{std::move(result), PlanFailure::none};
  }

  // Preparation: abstract and match the local environment, predict the
  // preparatory pose. All of it happens in the spot frame.
  const auto t_abs = std::chrono::steady_clock::now();
  const ObstacleCloud cloud_spot = cloud_to_frame(scenario.obstacles, scenario.spot_pose);
  const AbstractionResult abstraction =
      abstract_environment(cloud_spot, scenario.type, spec, geom);
  stages.abstraction_s = seconds_since(t_abs);
  if (!abstraction.env) {
    return direct_fallback(start_world, goal_world, scenario, spec, cfg, stages);
  }

  const auto matched = quantize(*abstraction.env, index.dataset().grid);
  if (!matched) {
    return direct_fallback(start_world, goal_world, scenario, spec, cfg, stages);
  }

  const auto t_pred = std::chrono::steady_clock::now();
  const Pose x0_spot = to_spot_frame(start_world, scenario.spot_pose);
  const Pose g_pre_spot = index.predict(x0_spot, *matched);
  stages.predict_s = seconds_since(t_pred);
  const Pose g_pre_world = from_spot_frame(g_pre_spot, scenario.spot_pose);

  // Both stages must end exactly on their targets so the junction and the
  // final pose are analytic; tolerance stops would break the concatenation.
  PlannerConfig stage_cfg = cfg;
  stage_cfg.require_exact_terminal = true;

  PlanOutcome approach =
      plan(start_world, g_pre_world, scenario.obstacles, spec, stage_cfg, Variant::with_rs);
  if (!approach.ok()) {
    return direct_fallback(start_world, goal_world, scenario, spec, cfg, stages);
  }
  stages.approach_nodes = approach.path->stats.nodes_expanded;
  stages.approach_s = approach.path->stats.planning_time_s;

  PlanOutcome parking = plan(approach.path->final_pose(), goal_world, scenario.obstacles, spec,
                             stage_cfg, Variant::with_rs);
  if (!parking.ok()) {
    return direct_fallback(start_world, goal_world, scenario, spec, cfg, stages);
  }
  stages.parking_nodes = parking.path->stats.nodes_expanded;
  stages.parking_s = parking.path->stats.planning_time_s;

  N3PResult result;
  result.path = concatenate(*approach.path, *parking.path);
  result.stages = stages;
  result.g_pre_world = g_pre_world;
  result.measured = abstraction.env;
  result.matched = matched;
  result.path.stats.planning_time_s =
      stages.abstraction_s + stages.predict_s + stages.approach_s + stages.parking_s;
  return N3POutcome{std::move(result), PlanFailure::none};
}

}  // namespace n3p
