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

#include <string>

#include "n3p/environment.hpp"
#include "n3p/hybrid_astar.hpp"
#include "n3p/selector.hpp"

namespace n3p {

/// Everything tunable, loadable from a key-value text file.
struct AppConfig {
  VehicleSpec vehicle;
  PlannerConfig planner;
  EnvGeometry env;
  GridAxis grid_w_lane{4.0, 8.0, 0.5};
  GridAxis grid_w_spot_bay{2.4, 4.2, 0.2};
  GridAxis grid_w_spot_parallel{6.0, 8.0, 0.25};
  GridAxis grid_d_deadend{4.0, 12.0, 1.0};
  FeatureScales scales;
  int n_per_env = 50;

  QuantizationGrid grid_for(ParkingType type) const {
    QuantizationGrid g;
    g.w_lane = grid_w_lane;
    g.w_spot = type == ParkingType::parallel ? grid_w_spot_parallel : grid_w_spot_bay;
    g.d_deadend = grid_d_deadend;
    return g;
  }

  /// Empty string when consistent.
  std::string validate() const;
};

/// `key = value` lines; '#' starts a comment; unknown keys are errors.
AppConfig load_config(const std::string& file);          // throws FormatError / runtime_error
AppConfig config_from_string(const std::string& text);   // throws FormatError

}  // namespace n3p
