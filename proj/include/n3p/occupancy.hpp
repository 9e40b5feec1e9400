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
#include <span>
#include <vector>

#include "n3p/geometry.hpp"

namespace n3p {

struct Rect {
  double min_x = 0.0;
  double min_y = 0.0;
  double max_x = 0.0;
  double max_y = 0.0;

  bool contains(double x, double y) const {
    return x >= min_x && x <= max_x && y >= min_y && y <= max_y;
  }
  void expand(double pad) {
    min_x -= pad;
    min_y -= pad;
    max_x += pad;
    max_y += pad;
  }
  void include(double x, double y) {
    min_x = std::min(min_x, x);
    min_y = std::min(min_y, y);
    max_x = std::max(max_x, x);
    max_y = std::max(max_y, y);
  }
};

Rect bounding_rect(const ObstacleCloud& cloud);

/// Occupancy raster used by the cost-to-go heuristic. A cell is occupied if
/// an obstacle point falls in it, dilated by the vehicle half-width plus
/// safety margin (in whole cells).
struct GridMap {
  double origin_x = 0.0;
  double origin_y = 0.0;
  double resolution = 0.25;
  int width = 0;
  int height = 0;
  std::vector<uint8_t> occupancy;

  bool cell_in_bounds(int ix, int iy) const {
    return ix >= 0 && ix < width && iy >= 0 && iy < height;
  }
  bool contains(double x, double y) const {
    return cell_in_bounds(cell_x(x), cell_y(y));
  }
  int cell_x(double x) const { return static_cast<int>(std::floor((x - origin_x) / resolution)); }
  int cell_y(double y) const { return static_cast<int>(std::floor((y - origin_y) / resolution)); }
  bool occupied(int ix, int iy) const { return occupancy[static_cast<size_t>(iy) * width + ix] != 0; }
  int dilation_cells(const VehicleSpec& spec) const {
    return static_cast<int>(std::ceil((spec.body_width * 0.5 + spec.safety_margin) / resolution));
  }
};

/// Rasterize obstacle points into a dilated occupancy grid.
/// Returns nullopt when any pose in `must_cover` lies outside `bounds`
/// (bounds too small for the query).
std::optional<GridMap> build_grid(const ObstacleCloud& obstacles, const VehicleSpec& spec,
                                  const Rect& bounds, double resolution,
                                  std::span<const Pose> must_cover = {});

/// Per-cell shortest obstacle-aware 2-D distance to the goal cell, in meters.
/// Eight-connected Dijkstra; diagonal moves cost sqrt(2) * resolution;
/// unreachable or occupied cells hold +infinity.
struct HeuristicField {
  int width = 0;
  int height = 0;
  std::vector<double> cost_to_go;

  double at(int ix, int iy) const { return cost_to_go[static_cast<size_t>(iy) * width + ix]; }
};

/// Returns nullopt when the goal cell is occupied or out of bounds.
std::optional<HeuristicField> compute_cost_to_go(const GridMap& grid, const Pose& goal);

}  // namespace n3p
