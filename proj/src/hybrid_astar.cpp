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

#include "n3p/hybrid_astar.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace n3p {

namespace {

// The octile metric overestimates the Euclidean shortest distance by up to
// sec(pi/8)*cos(pi/8 - pi/4)... = sqrt(4 - 2*sqrt(2)) at 22.5 degrees. The
// A* heuristic divides the cost-to-go field by this factor and subtracts the
// goal-tolerance and cell-quantization slack so that it never overestimates
// the remaining path cost; without the correction the search can return
// lattice-suboptimal paths.
const double kOctileInflation = std::sqrt(4.0 - 2.0 * std::sqrt(2.0));

constexpr double kEps = 1e-12;

double steer_of_segment(const RSSegment& seg, const VehicleSpec& spec) {
  switch (seg.kind) {
    case SegKind::left: return spec.max_steer;
    case SegKind::right: return -spec.max_steer;
    default: return 0.0;
  }
}

}  // namespace

std::string PlannerConfig::validate() const {
  if (!(grid_resolution > 0.0)) return "grid_resolution must be positive";
  if (heading_bins < 4) return "heading_bins must be at least 4";
  if (!(primitive_arc > 0.0)) return "primitive_arc must be positive";
  if (steer_levels < 1 || steer_levels % 2 == 0) return "steer_levels must be odd and positive";
  if (reverse_cost_mult < 1.0) return "reverse_cost_mult must be >= 1";
  if (gear_switch_penalty < 0.0 || steer_change_penalty < 0.0) return "penalties must be >= 0";
  if (rs_shot_period < 1) return "rs_shot_period must be >= 1";
  if (node_cap < 1) return "node_cap must be >= 1";
  if (!(goal_tol_xy > 0.0) || !(goal_tol_theta > 0.0)) return "goal tolerances must be positive";
  if (hold_count < 1) return "hold_count must be >= 1";
  if (!(ds_check > 0.0)) return "ds_check must be positive";
  return {};
}

std::vector<MotionPrimitive> make_primitive_set(const VehicleSpec& spec, const PlannerConfig& cfg) {
  std::vector<MotionPrimitive> prims;
  const int half = cfg.steer_levels / 2;
  for (Gear gear : {Gear::forward, Gear::reverse}) {
    for (int i = -half; i <= half; ++i) {
      const double steer = half == 0 ? 0.0 : spec.max_steer * i / half;
      prims.push_back(MotionPrimitive{steer, gear, cfg.primitive_arc});
    }
  }
  return prims;
}

const char* failure_name(PlanFailure f) {
  switch (f) {
    case PlanFailure::none: return "none";
    case PlanFailure::start_in_collision: return "start_in_collision";
    case PlanFailure::goal_occupied: return "goal_occupied";
    case PlanFailure::node_cap_exceeded: return "node_cap_exceeded";
    case PlanFailure::search_exhausted: return "search_exhausted";
    case PlanFailure::bounds_too_small: return "bounds_too_small";
  }
  return "unknown";
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::plain: return "plain";
    case Variant::with_rs: return "with_rs";
    case Variant::hold: return "hold";
  }
  return "unknown";
}

int count_direction_changes(const std::vector<PathState>& states) {
  int flips = 0;
  bool have_prev = false;
  Gear prev = Gear::forward;
  for (std::size_t i = 1; i < states.size(); ++i) {
    if (states[i].seg_len <= 0.0) continue;
    if (have_prev && states[i].gear != prev) ++flips;
    prev = states[i].gear;
    have_prev = true;
  }
  return flips;
}

namespace {

// Occupancy used only to guide the search. A cell is marked only when its
// whole extent lies within the blocked disc of some obstacle point, so the
// resulting cost-to-go never overestimates the distance a collision-free
// trajectory must cover; the admissibility the optimality argument needs
// survives cell rounding (the standard ceil dilation can over-block tight
// corridors and inflate the heuristic).
GridMap build_inner_grid(const ObstacleCloud& obstacles, const VehicleSpec& spec,
                         const GridMap& like) {
  GridMap grid = like;
  std::fill(grid.occupancy.begin(), grid.occupancy.end(), 0);
  const double res = grid.resolution;
  const double r_eff =
      spec.body_width * 0.5 + spec.safety_margin - res * std::sqrt(2.0) * 0.5;
  if (r_eff <= 0.0) return grid;
  const int reach = static_cast<int>(std::ceil(r_eff / res)) + 1;
  for (const Vec2& p : obstacles.points) {
    const int ix = grid.cell_x(p.x);
    const int iy = grid.cell_y(p.y);
    for (int dx = -reach; dx <= reach; ++dx) {
      for (int dy = -reach; dy <= reach; ++dy) {
        const int cx = ix + dx;
        const int cy = iy + dy;
        if (!grid.cell_in_bounds(cx, cy)) continue;
        const double ccx = grid.origin_x + (cx + 0.5) * res;
        const double ccy = grid.origin_y + (cy + 0.5) * res;
        if (std::hypot(ccx - p.x, ccy - p.y) <= r_eff) {
          grid.occupancy[static_cast<size_t>(cy) * grid.width + cx] = 1;
        }
      }
    }
  }
  return grid;
}

}  // namespace

Planner::Planner(const ObstacleCloud& obstacles, const Pose& goal, const VehicleSpec& spec,
                 const PlannerConfig& cfg, std::span<const Pose> cover)
    : spec_(spec), cfg_(cfg), goal_(goal), checker_(obstacles, spec),
      primitives_(make_primitive_set(spec, cfg)), kappa_(spec.max_curvature()) {
  Rect bounds = bounding_rect(obstacles);
  if (obstacles.empty()) {
    bounds = Rect{goal.x, goal.y, goal.x, goal.y};
  }
  bounds.include(goal.x, goal.y);
  for (const Pose& p : cover) bounds.include(p.x, p.y);
  bounds.expand(cfg.bounds_pad);
  grid_ = build_grid(obstacles, spec, bounds, cfg.grid_resolution);
  if (checker_.pose_in_collision(goal_)) {
    prep_failure_ = PlanFailure::goal_occupied;
    return;
  }
  heuristic_ = compute_cost_to_go(build_inner_grid(obstacles, spec, *grid_), goal_);
  if (!heuristic_) prep_failure_ = PlanFailure::goal_occupied;
}

uint64_t Planner::key_of(const Pose& pose) const {
  const int ix = grid_->cell_x(pose.x);
  const int iy = grid_->cell_y(pose.y);
  double a = pose.theta;
  if (a <= 0.0) a += 2.0 * kPi;  // (0, 2*pi]
  int bin = static_cast<int>(a / (2.0 * kPi) * cfg_.heading_bins);
  if (bin >= cfg_.heading_bins) bin = cfg_.heading_bins - 1;
  return (static_cast<uint64_t>(static_cast<uint32_t>(ix)) << 40) |
         (static_cast<uint64_t>(static_cast<uint32_t>(iy) & 0xffffff) << 16) |
         static_cast<uint64_t>(bin);
}

double Planner::heuristic_at(const Pose& pose) const {
  const int ix = grid_->cell_x(pose.x);
  const int iy = grid_->cell_y(pose.y);
  if (!grid_->cell_in_bounds(ix, iy)) return std::numeric_limits<double>::infinity();
  const double h = heuristic_->at(ix, iy);
  if (!std::isfinite(h)) return h;
  const double slack = cfg_.goal_tol_xy + std::sqrt(2.0) * cfg_.grid_resolution;
  return std::max(0.0, h / kOctileInflation - slack);
}

std::vector<SearchNode> Planner::expand(const SearchNode& node, int32_t parent_index) const {
  std::vector<SearchNode> children;
  children.reserve(primitives_.size());
  const int sweep_steps =
      std::max(1, static_cast<int>(std::ceil(cfg_.primitive_arc / cfg_.ds_check - 1e-9)));
  for (const MotionPrimitive& prim : primitives_) {
    const double curv = curvature_for_steer(spec_, prim.steer);
    const double step = gear_sign(prim.direction) * prim.arc_length / sweep_steps;
    Pose p = node.pose;
    bool blocked = false;
    for (int i = 0; i < sweep_steps; ++i) {
      p = integrate_constant_curvature(p, curv, step);
      if (checker_.pose_in_collision(p)) {
        blocked = true;
        break;
      }
    }
    if (blocked) continue;
    double cost = prim.arc_length *
                  (prim.direction == Gear::reverse ? cfg_.reverse_cost_mult : 1.0);
    if (node.has_gear && prim.direction != node.gear) cost += cfg_.gear_switch_penalty;
    cost += cfg_.steer_change_penalty * std::abs(prim.steer - node.steer);
    SearchNode child;
    child.pose = p;
    child.g_cost = node.g_cost + cost;
    child.gear = prim.direction;
    child.has_gear = true;
    child.steer = prim.steer;
    child.parent = parent_index;
    child.key = key_of(p);
    children.push_back(child);
  }
  return children;
}

namespace {

struct OpenEntry {
  double f;
  double g;
  uint64_t order;
  int32_t node;
};

struct OpenCompare {
  bool operator()(const OpenEntry& a, const OpenEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    if (a.g != b.g) return a.g > b.g;
    return a.order > b.order;
  }
};

struct RsSolution {
  int32_t node = -1;
  std::optional<RSPath> rs;
  double total_cost = 0.0;
};

}  // namespace

struct SearchRun {
  const Planner& planner;
  const VehicleSpec& spec;
  const PlannerConfig& cfg;
  Variant variant;

  std::vector<SearchNode> arena;
  std::unordered_map<uint64_t, std::pair<double, int32_t>> best;
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenCompare> open;
  uint64_t order = 0;

  // Cost of the analytic tail: segment lengths weighted like primitives,
  // with gear and steering transition penalties including the junction.
  double rs_cost(const SearchNode& node, const RSPath& rs) const {
    double cost = 0.0;
    bool have_gear = node.has_gear;
    Gear prev_gear = node.gear;
    double prev_steer = node.steer;
    for (const RSSegment& seg : rs.segments) {
      cost += seg.length * (seg.direction == Gear::reverse ? cfg.reverse_cost_mult : 1.0);
      if (have_gear && seg.direction != prev_gear) cost += cfg.gear_switch_penalty;
      const double steer = steer_of_segment(seg, spec);
      cost += cfg.steer_change_penalty * std::abs(steer - prev_steer);
      prev_gear = seg.direction;
      prev_steer = steer;
      have_gear = true;
    }
    return cost;
  }

  PlannedPath build_path(int32_t goal_node, const RSPath* rs) const {
    std::vector<int32_t> chain;
    for (int32_t i = goal_node; i >= 0; i = arena[i].parent) chain.push_back(i);
    std::reverse(chain.begin(), chain.end());

    PlannedPath path;
    path.states.reserve(chain.size() + 64);
    for (std::size_t i = 0; i < chain.size(); ++i) {
      const SearchNode& n = arena[chain[i]];
      PathState s;
      s.pose = n.pose;
      s.steer = n.steer;
      s.seg_len = i == 0 ? 0.0 : cfg.primitive_arc;
      s.gear = n.has_gear ? n.gear : Gear::forward;
      path.states.push_back(s);
    }
    if (!arena[chain[0]].has_gear && path.states.size() > 1) {
      path.states[0].gear = path.states[1].gear;  // start inherits first motion gear
      path.states[0].steer = 0.0;
    }
    path.cost = arena[goal_node].g_cost;

    if (rs != nullptr) {
      path.rs_start_index = path.states.size() - 1;
      Pose p = arena[goal_node].pose;
      if (path.states.size() == 1 && !rs->segments.empty()) {
        path.states[0].gear = rs->segments.front().direction;
      }
      for (const RSSegment& seg : rs->segments) {
        const int steps = std::max(1, static_cast<int>(std::ceil(seg.length / cfg.ds_check - 1e-9)));
        const double step = seg.length / steps;
        const double curv = seg.curvature(rs->kappa);
        const double steer = steer_of_segment(seg, spec);
        for (int k = 0; k < steps; ++k) {
          p = integrate_constant_curvature(p, curv, gear_sign(seg.direction) * step);
          path.states.push_back(PathState{p, seg.direction, steer, step});
        }
      }
      path.cost += rs_cost(arena[goal_node], *rs);
    }

    for (const PathState& s : path.states) path.stats.total_length += s.seg_len;
    path.stats.direction_changes = count_direction_changes(path.states);
    return path;
  }

  void push(const SearchNode& node) {
    auto it = best.find(node.key);
    if (it != best.end() && node.g_cost >= it->second.first - kEps) return;
    const int32_t idx = static_cast<int32_t>(arena.size());
    arena.push_back(node);
    best[node.key] = {node.g_cost, idx};
    const double h = planner.heuristic_at(node.pose);
    if (!std::isfinite(h)) return;  // unreachable at grid level
    open.push(OpenEntry{node.g_cost + h, node.g_cost, order++, idx});
  }

  PlanOutcome run(const Pose& start) {
    SearchNode root;
    root.pose = start;
    root.key = planner.key_of(start);
    push(root);

    std::vector<RsSolution> held;
    int expansions = 0;
    double nearest = std::numeric_limits<double>::infinity();

    const auto finish_hold = [&]() -> std::optional<PlannedPath> {
      if (held.empty()) return std::nullopt;
      const RsSolution* pick = &held.front();
      for (const RsSolution& s : held) {
        if (s.total_cost < pick->total_cost) pick = &s;
      }
      PlannedPath path = build_path(pick->node, pick->rs ? &*pick->rs : nullptr);
      path.stats.nodes_expanded = expansions;
      return path;
    };

    while (!open.empty()) {
      const OpenEntry entry = open.top();
      open.pop();
      if (best[arena[entry.node].key].second != entry.node) continue;  // superseded
      const int32_t node_idx = entry.node;
      ++expansions;

      const SearchNode node = arena[node_idx];
      if (!cfg.require_exact_terminal) {
        if (position_distance(node.pose, planner.goal()) <= cfg.goal_tol_xy &&
            std::abs(angle_diff(node.pose.theta, planner.goal().theta)) <= cfg.goal_tol_theta) {
          if (variant == Variant::hold) {
            RsSolution s;
            s.node = node_idx;
            s.total_cost = node.g_cost;
            held.push_back(std::move(s));
            if (static_cast<int>(held.size()) >= cfg.hold_count) {
              auto path = finish_hold();
              return PlanOutcome{std::move(path), PlanFailure::none};
            }
          } else {
            PlannedPath path = build_path(node_idx, nullptr);
            path.stats.nodes_expanded = expansions;
            return PlanOutcome{std::move(path), PlanFailure::none};
          }
        }
      }

      if (variant != Variant::plain) {
        const double d = position_distance(node.pose, planner.goal());
        const bool is_nearest = d < nearest - kEps;
        if (is_nearest) nearest = d;
        const bool periodic = (expansions - 1) % cfg.rs_shot_period == 0;
        if (is_nearest || periodic) {
          auto rs = rs_connect(node.pose, planner.goal(), planner.kappa_, planner.checker_,
                               cfg.ds_check);
          if (rs) {
            if (variant == Variant::with_rs) {
              PlannedPath path = build_path(node_idx, &*rs);
              path.stats.nodes_expanded = expansions;
              return PlanOutcome{std::move(path), PlanFailure::none};
            }
            RsSolution s;
            s.node = node_idx;
            s.total_cost = node.g_cost + rs_cost(node, *rs);
            s.rs = std::move(*rs);
            held.push_back(std::move(s));
            if (static_cast<int>(held.size()) >= cfg.hold_count) {
              auto path = finish_hold();
              return PlanOutcome{std::move(path), PlanFailure::none};
            }
          }
        }
      }

      if (expansions >= cfg.node_cap) {
        if (auto path = finish_hold()) return PlanOutcome{std::move(path), PlanFailure::none};
        return PlanOutcome{std::nullopt, PlanFailure::node_cap_exceeded};
      }

      for (SearchNode& child : planner.expand(node, node_idx)) {
        push(child);
      }
    }

    if (auto path = finish_hold()) return PlanOutcome{std::move(path), PlanFailure::none};
    return PlanOutcome{std::nullopt, PlanFailure::search_exhausted};
  }
};

PlanOutcome Planner::plan(const Pose& start, Variant variant) const {
  const auto t0 = std::chrono::steady_clock::now();
  PlanOutcome outcome;
  if (prep_failure_ != PlanFailure::none) {
    outcome = PlanOutcome{std::nullopt, prep_failure_};
  } else if (checker_.pose_in_collision(start)) {
    outcome = PlanOutcome{std::nullopt, PlanFailure::start_in_collision};
  } else if (!grid_->contains(start.x, start.y)) {
    outcome = PlanOutcome{std::nullopt, PlanFailure::bounds_too_small};
  } else if (!std::isfinite(heuristic_at(start))) {
    outcome = PlanOutcome{std::nullopt, PlanFailure::search_exhausted};
  } else {
    SearchRun run{*this, spec_, cfg_, variant, {}, {}, {}, 0};
    outcome = run.run(start);
  }
  if (outcome.ok()) {
    outcome.path->stats.planning_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return outcome;
}

PlanOutcome plan(const Pose& start, const Pose& goal, const ObstacleCloud& obstacles,
                 const VehicleSpec& spec, const PlannerConfig& cfg, Variant variant) {
  const auto t0 = std::chrono::steady_clock::now();
  Planner planner(obstacles, goal, spec, cfg, std::span<const Pose>(&start, 1));
  PlanOutcome outcome = planner.plan(start, variant);
  if (outcome.ok()) {
    outcome.path->stats.planning_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return outcome;
}

bool replay_consistent(const PlannedPath& path, const VehicleSpec& spec, double tol) {
  if (path.states.empty()) return true;
  Pose p = path.states.front().pose;
  for (std::size_t i = 1; i < path.states.size(); ++i) {
    const PathState& s = path.states[i];
    p = integrate_steer(spec, p, s.steer, s.gear, s.seg_len);
    if (std::abs(p.x - s.pose.x) > tol || std::abs(p.y - s.pose.y) > tol ||
        std::abs(angle_diff(p.theta, s.pose.theta)) > tol) {
      return false;
    }
  }
  return true;
}

std::vector<Pose> path_poses(const PlannedPath& path) {
  std::vector<Pose> poses;
  poses.reserve(path.states.size());
  for (const PathState& s : path.states) poses.push_back(s.pose);
  return poses;
}

void save_planned_path(const PlannedPath& path, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open for writing: " + file);
  out << "n3p-path v1 " << path.states.size() << " "
      << (path.rs_start_index ? static_cast<long long>(*path.rs_start_index) : -1LL) << "\n";
  char buf[512];
  for (const PathState& s : path.states) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %d %.17g %.17g\n", s.pose.x, s.pose.y,
                  s.pose.theta, s.gear == Gear::forward ? 1 : -1, s.steer, s.seg_len);
    out << buf;
  }
  if (!out) throw std::runtime_error("write failed: " + file);
}

PlannedPath load_planned_path(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open: " + file);
  std::string tag, version;
  std::size_t n = 0;
  long long rs_index = -1;
  in >> tag >> version >> n >> rs_index;
  if (!in || tag != "n3p-path" || version != "v1") {
    throw std::runtime_error("bad path file header: " + file);
  }
  PlannedPath path;
  for (std::size_t i = 0; i < n; ++i) {
    double x, y, theta, steer, seg_len;
    int gear;
    in >> x >> y >> theta >> gear >> steer >> seg_len;
    if (!in) throw std::runtime_error("truncated path file: " + file);
    path.states.push_back(
        PathState{Pose(x, y, theta), gear > 0 ? Gear::forward : Gear::reverse, steer, seg_len});
  }
  if (rs_index >= 0) path.rs_start_index = static_cast<std::size_t>(rs_index);
  for (const PathState& s : path.states) path.stats.total_length += s.seg_len;
  path.stats.direction_changes = count_direction_changes(path.states);
  return path;
}

}  // namespace n3p
