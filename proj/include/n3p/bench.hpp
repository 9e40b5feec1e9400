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

#include <optional>
#include <string>
#include <vector>

#include "n3p/config.hpp"
#include "n3p/n3p_planner.hpp"

namespace n3p {

struct RunRecord {
  std::string method;
  int scenario_index = 0;
  uint64_t scenario_seed = 0;
  bool success = false;
  std::string fail_cause;  // empty on success
  bool used_fallback = false;
  double planning_time_s = 0.0;
  // Path stats, present only on success.
  double length_m = 0.0;
  int direction_changes = 0;
  double mean_abs_dsteer = 0.0;
  int nodes_expanded = 0;
};

/// One table row; time statistics are over successful runs only.
struct MetricsRow {
  std::string method;
  int runs = 0;
  int successes = 0;
  double min_t = 0.0, mean_t = 0.0, median_t = 0.0, p95_t = 0.0;
  double mean_dsteer = 0.0;
  double mean_length = 0.0;
  double fail_pct = 0.0;
  double mean_ndc = 0.0;
  int max_ndc = 0;
  double mean_nnode = 0.0;
};

class PathTooShort : public std::runtime_error {
 public:
  PathTooShort() : std::runtime_error("path has fewer than two states") {}
};

/// Forward/reverse flips across consecutive motion segments, analytic tail
/// included.
int direction_changes(const PlannedPath& path);

/// Mean absolute steering change over the trajectory resampled at fixed
/// timesteps using the configured forward/reverse speeds.
double steering_variation(const PlannedPath& path, const VehicleSpec& spec, double dt = 0.1);

/// Percentile by linear interpolation between order statistics
/// (rank 1 + q*(n-1) over the sorted values).
double percentile(std::vector<double> values, double q);

MetricsRow compute_metrics(const std::string& method, const std::vector<RunRecord>& records);

struct ExperimentSpec {
  std::vector<std::string> methods;  // of: ha, ha-rs, ha-hold, knn-n3p
  Difficulty difficulty = Difficulty::complex;
  ParkingType type = ParkingType::reverse;
  int n = 100;
  uint64_t seed = 1;
  int workers = 1;
  int render_count = 0;          // per-method SVG renders of the first runs
  std::string out_dir;           // empty: nothing written
};

struct ExperimentResult {
  std::vector<MetricsRow> rows;
  std::vector<RunRecord> records;  // ordered by (method, scenario index)
};

/// Run every method over the identical seeded scenario list; emits
/// metrics.csv, runs.csv and an aligned text table under out_dir when set.
/// knn-n3p requires `index`; passing nullptr for it is a setup error.
ExperimentResult run_experiment(const AppConfig& config, const KnnIndex* index,
                                const ExperimentSpec& spec);

std::string metrics_csv(const std::vector<MetricsRow>& rows);
std::string runs_csv(const std::vector<RunRecord>& records);
std::string metrics_table(const std::vector<MetricsRow>& rows);

/// runs.csv with the timing column blanked; byte-stable across invocations
/// for a fixed seed.
std::string runs_csv_without_timing(const std::string& csv_text);

}  // namespace n3p
