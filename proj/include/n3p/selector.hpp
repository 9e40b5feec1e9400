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
#include <string>
#include <vector>

#include "n3p/environment.hpp"
#include "n3p/hybrid_astar.hpp"

namespace n3p {

/// One training pair: an initial state and the environment it was drawn in,
/// mapped to the start pose of the analytic connection the planner found.
/// All poses are in the spot frame.
struct Sample {
  Pose x0;
  double w_lane = 0.0;
  double w_spot = 0.0;
  double d_deadend = 0.0;
  Pose rs_start;
};

struct DatasetMeta {
  uint64_t seed = 0;
  int n_per_env = 0;
  std::string config_hash;
  int skipped_failures = 0;  // planner failures during collection
  int empty_envs = 0;        // grid configurations with no collision-free start
};

struct SelectorDataset {
  ParkingType type = ParkingType::reverse;
  QuantizationGrid grid;
  DatasetMeta meta;
  std::vector<Sample> samples;
};

/// Hash of the vehicle and planner parameters a dataset was generated with;
/// recorded in the dataset header so stale data is detectable.
std::string planner_config_hash(const VehicleSpec& spec, const PlannerConfig& cfg);

/// Offline data generation: for every grid configuration, synthesize the
/// abstracted environment, sample initial poses uniformly in collision-free
/// lane space (heading in a +-90 degree fan about the lane direction), solve
/// with the RS-augmented planner and record the analytic-connection start
/// poses. Environments are independent and processed by `workers` threads.
SelectorDataset collect_offline(ParkingType type, const QuantizationGrid& grid, int n_per_env,
                                const VehicleSpec& spec, const PlannerConfig& cfg,
                                const EnvGeometry& geom, uint64_t seed, int workers = 1);

std::string dataset_to_string(const SelectorDataset& d);
SelectorDataset dataset_from_string(const std::string& text);  // throws FormatError
void save_dataset(const SelectorDataset& d, const std::string& file);
SelectorDataset load_dataset(const std::string& file);

/// Multiplicative weights for the 6-D query features
/// (x0, y0, theta0, w_lane, w_spot, d_deadend); theta uses wrapped distance.
struct FeatureScales {
  std::array<double, 6> values{1.0, 1.0, 2.0, 0.5, 1.0, 0.25};
};

/// Single-neighbor predictor over the scaled features. k is fixed to one so
/// that every prediction is a stored connection start pose.
class KnnIndex {
 public:
  KnnIndex(SelectorDataset dataset, const FeatureScales& scales);  // throws on empty dataset

  std::size_t nearest_row(const Pose& x0, const EnvAbstraction& e_train) const;
  Pose predict(const Pose& x0, const EnvAbstraction& e_train) const;

  const SelectorDataset& dataset() const { return dataset_; }
  const FeatureScales& scales() const { return scales_; }

 private:
  SelectorDataset dataset_;
  FeatureScales scales_;
};

void save_index(const KnnIndex& index, const std::string& file);
KnnIndex load_index(const std::string& file);

}  // namespace n3p
