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

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "n3p/geometry.hpp"
#include "n3p/motion.hpp"
#include "n3p/occupancy.hpp"
#include "n3p/reeds_shepp.hpp"

namespace n3p {

/// Search discretization, motion-primitive set and cost weights.
struct PlannerConfig {
  double grid_resolution = 0.25;
  int heading_bins = 72;
  double primitive_arc = 0.6;
  int steer_levels = 5;  // odd; symmetric about zero up to +-max_steer
  double reverse_cost_mult = 1.5;
  double gear_switch_penalty = 2.0;       // meter-equivalent per flip
  double steer_change_penalty = 0.5;      // meters per radian of change
  int rs_shot_period = 10;                // expansions between analytic-expansion attempts
  int node_cap = 200000;
  double goal_tol_xy = 0.3;
  double goal_tol_theta = 0.1;
  int hold_count = 5;
  double ds_check = 0.1;                  // arc-length collision sampling step
  double bounds_pad = 2.0;                // grid padding around cloud/start/goal
  // When set, the search may only terminate through an exact analytic
  // connection; the goal-tolerance stop is disabled.
  bool require_exact_terminal = false;

  std::string validate() const;
};

struct MotionPrimitive {
  double steer = 0.0;
  Gear direction = Gear::forward;
  double arc_length = 0.6;
};

std::vector<MotionPrimitive> make_primitive_set(const VehicleSpec& spec, const PlannerConfig& cfg);

struct SearchNode {
  Pose pose;
  double g_cost = 0.0;
  Gear gear = Gear::forward;
  bool has_gear = false;  // false for the start node
  double steer = 0.0;
  int32_t parent = -1;
  uint64_t key = 0;
};

/// One state of a planned trajectory. The motion arriving at state i is a
/// constant-steer arc of `seg_len` meters driven in `gear`; state 0 carries
/// the first motion's gear and zero length.
struct PathState {
  Pose pose;
  Gear gear = Gear::forward;
  double steer = 0.0;
  double seg_len = 0.0;
};

struct SearchStats {
  int nodes_expanded = 0;
  double planning_time_s = 0.0;
  double total_length = 0.0;
  int direction_changes = 0;
};

struct PlannedPath {
  std::vector<PathState> states;
  std::optional<std::size_t> rs_start_index;  // first pose of the terminal RS connection
  SearchStats stats;
  double cost = 0.0;  // g-cost of the full path including the RS part

  bool empty() const { return states.empty(); }
  const Pose& final_pose() const { return states.back().pose; }
};

int count_direction_changes(const std::vector<PathState>& states);

enum class PlanFailure {
  none,
  start_in_collision,
  goal_occupied,
  node_cap_exceeded,
  search_exhausted,
  bounds_too_small,
};

const char* failure_name(PlanFailure f);

struct PlanOutcome {
  std::optional<PlannedPath> path;
  PlanFailure failure = PlanFailure::none;

  bool ok() const { return path.has_value(); }
};

enum class Variant { plain, with_rs, hold };

const char* variant_name(Variant v);

/// Reusable search context over a fixed obstacle cloud and goal: collision
/// index, occupancy grid and cost-to-go field are built once.
class Planner {
 public:
  /// `cover` lists poses the occupancy grid must additionally enclose
  /// (typically the query start); the obstacle cloud and goal always are.
  Planner(const ObstacleCloud& obstacles, const Pose& goal, const VehicleSpec& spec,
          const PlannerConfig& cfg, std::span<const Pose> cover = {});

  PlanOutcome plan(const Pose& start, Variant variant) const;

  const GridMap* grid() const { return grid_ ? &*grid_ : nullptr; }
  const HeuristicField* heuristic() const { return heuristic_ ? &*heuristic_ : nullptr; }
  const CollisionChecker& checker() const { return checker_; }
  const Pose& goal() const { return goal_; }

  /// All collision-free children of a node, one per surviving primitive.
  std::vector<SearchNode> expand(const SearchNode& node, int32_t parent_index) const;

  uint64_t key_of(const Pose& pose) const;

 private:
  VehicleSpec spec_;
  PlannerConfig cfg_;
  Pose goal_;
  CollisionChecker checker_;
  std::vector<MotionPrimitive> primitives_;
  double kappa_ = 0.0;
  std::optional<GridMap> grid_;
  std::optional<HeuristicField> heuristic_;
  PlanFailure prep_failure_ = PlanFailure::none;

  double heuristic_at(const Pose& pose) const;
  friend struct SearchRun;
};

/// One-shot planning call: builds the session (collision index, grid,
/// heuristic) and searches; the reported planning time covers all of it.
PlanOutcome plan(const Pose& start, const Pose& goal, const ObstacleCloud& obstacles,
                 const VehicleSpec& spec, const PlannerConfig& cfg, Variant variant);

/// Replay the stored control sequence from the first state; true when every
/// stored pose is reproduced within `tol`.
bool replay_consistent(const PlannedPath& path, const VehicleSpec& spec, double tol = 1e-6);

/// All states of the path as poses (for collision checking / rendering).
std::vector<Pose> path_poses(const PlannedPath& path);

void save_planned_path(const PlannedPath& path, const std::string& file);
PlannedPath load_planned_path(const std::string& file);

}  // namespace n3p
