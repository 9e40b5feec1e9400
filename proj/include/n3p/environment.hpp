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
//
// Local parking environments in the spot frame: the origin is the spot
// center, +y points from the spot toward the drive lane and +x runs along
// the lane (and along the goal heading for parallel spots).

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "n3p/geometry.hpp"

namespace n3p {

enum class ParkingType : int8_t { forward = 0, reverse = 1, parallel = 2 };
enum class Difficulty : int8_t { easy = 0, complex = 1, extreme = 2 };

const char* to_string(ParkingType t);
const char* to_string(Difficulty d);
std::optional<ParkingType> parse_parking_type(const std::string& s);
std::optional<Difficulty> parse_difficulty(const std::string& s);

/// Four-parameter local environment summary.
struct EnvAbstraction {
  double w_lane = 6.0;
  double w_spot = 3.0;
  double d_deadend = 12.0;
  ParkingType type = ParkingType::reverse;
};

/// Uniform axis {min, min + step, ...} up to max (inclusive within 1e-6).
struct GridAxis {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  int count() const { return static_cast<int>(std::floor((max - min) / step + 1e-6)) + 1; }
  double value(int i) const { return min + i * step; }
  bool contains(double v, double tol = 1e-6) const;
};

struct QuantizationGrid {
  GridAxis w_lane{4.0, 8.0, 0.5};
  GridAxis w_spot{2.4, 4.2, 0.2};
  GridAxis d_deadend{4.0, 12.0, 1.0};

  int count() const { return w_lane.count() * w_spot.count() * d_deadend.count(); }
  EnvAbstraction env_at(int flat_index, ParkingType type) const;
  bool contains(const EnvAbstraction& e, double tol = 1e-6) const;
};

/// Fixed spot-frame conventions of the local environment.
struct EnvGeometry {
  double spot_depth_bay = 5.5;       // physical bay depth; not part of the abstraction
  double spot_depth_parallel = 2.5;  // curb-to-lane depth of a parallel slot
  double local_extent = 12.0;        // |x| extent of the modelled neighborhood
  double wall_spacing = 0.1;         // obstacle point spacing along walls
  double group_tolerance = 0.05;     // region-grouping measurement tolerance
  double parallel_required_depth = 2.0;  // depth the goal must leave below the boundary

  double spot_depth(ParkingType t) const {
    return t == ParkingType::parallel ? spot_depth_parallel : spot_depth_bay;
  }
  double mouth_y(ParkingType t) const { return 0.5 * spot_depth(t); }
};

/// Goal pose in the spot frame plus the parallel-parking depth contract.
struct GoalSpec {
  Pose goal;
  ParkingType type = ParkingType::reverse;
  double d_spot = 0.0;       // required depth below the boundary (parallel)
  double y_boundary = 0.0;   // spot/lane boundary line (parallel)
};

/// Aligned pose with the body center on the spot center; heading faces into
/// the spot for forward parking, out of it for reverse, along the lane for
/// parallel.
GoalSpec goal_spec_for(ParkingType type, const VehicleSpec& spec, const EnvGeometry& geom);

struct AbstractionResult {
  std::optional<EnvAbstraction> env;
  bool spot_blocked = false;
};

/// Measure {w_lane, w_spot, d_deadend} from obstacle points in the spot
/// frame by grouping them into top, bottom-left and bottom-right regions.
/// Conservative: measured spans never exceed the true free-space rectangle.
/// spot_blocked is set when the rectangular access region in front of the
/// spot contains obstacle points.
AbstractionResult abstract_environment(const ObstacleCloud& obstacles_spot, ParkingType type,
                                       const VehicleSpec& spec, const EnvGeometry& geom);

/// Floor each parameter onto the grid: min(floor(v / step) * step, max).
/// Returns nullopt when a floored value falls below the grid minimum.
std::optional<EnvAbstraction> quantize(const EnvAbstraction& e, const QuantizationGrid& grid);

/// Wall point clouds realizing exactly the lane/spot/dead-end geometry of an
/// abstracted environment, plus the goal for its parking type.
void synth_abstract_obstacles(const EnvAbstraction& e, const VehicleSpec& spec,
                              const EnvGeometry& geom, ObstacleCloud* cloud, GoalSpec* goal);

/// A randomized evaluation scene: walls, neighbor vehicles, a start pose and
/// the generator's ground-truth parameters. Obstacles and poses are in the
/// world frame; `spot_pose` locates the spot frame.
struct Scenario {
  ObstacleCloud obstacles;
  Pose spot_pose;
  Pose start;
  ParkingType type = ParkingType::reverse;
  Difficulty difficulty = Difficulty::easy;
  uint64_t seed = 0;
  EnvAbstraction true_params;

  Pose goal_world(const VehicleSpec& spec, const EnvGeometry& geom) const;
};

/// Reproducible scenario synthesis per difficulty level. Resamples until the
/// access region is clear and the start is collision-free; after bounded
/// retries it degrades to a minimal wall-only scene.
Scenario generate_scenario(Difficulty difficulty, ParkingType type, uint64_t seed,
                           const VehicleSpec& spec, const EnvGeometry& geom);

/// Malformed persisted inputs carry the offending line.
class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& msg, int line)
      : std::runtime_error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

std::string scenario_to_string(const Scenario& s);
Scenario scenario_from_string(const std::string& text);  // throws FormatError
void save_scenario(const Scenario& s, const std::string& file);
Scenario load_scenario(const std::string& file);

}  // namespace n3p
