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

namespace n3p {

/// Self-contained SVG of a scenario: obstacle points, spot outline, start
/// and goal arrows, footprints at intervals, the trajectory polyline and an
/// optional preparatory-pose marker. Extents cover the scenario bounding
/// box. Throws std::runtime_error on I/O failure.
void render_trajectory(const Scenario& scenario, const PlannedPath& path, const VehicleSpec& spec,
                       const EnvGeometry& geom, const std::string& out_file,
                       const Pose* g_pre = nullptr);

std::string render_trajectory_svg(const Scenario& scenario, const PlannedPath& path,
                                  const VehicleSpec& spec, const EnvGeometry& geom,
                                  const Pose* g_pre = nullptr);

}  // namespace n3p
