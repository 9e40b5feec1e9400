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

#include "n3p/occupancy.hpp"

#include <limits>
#include <queue>

namespace n3p {

Rect bounding_rect(const ObstacleCloud& cloud) {
  Rect r;
  if (cloud.empty()) return r;
  r.min_x = r.max_x = cloud.points.front().x;
  r.min_y = r.max_y = cloud.points.front().y;
  for (const Vec2& p : cloud.points) r.include(p.x, p.y);
  return r;
}

std::optional<GridMap> build_grid(const ObstacleCloud& obstacles, const VehicleSpec& spec,
                                  const Rect& bounds, double resolution,
                                  std::span<const Pose> must_cover) {
  for (const Pose& p : must_cover) {
    if (!bounds.contains(p.x, p.y)) return std::nullopt;
  }

  GridMap grid;
  grid.origin_x = bounds.min_x;
  grid.origin_y = bounds.min_y;
  grid.resolution = resolution;
  grid.width = std::max(1, static_cast<int>(std::ceil((bounds.max_x - bounds.min_x) / resolution)));
  grid.height = std::max(1, static_cast<int>(std::ceil((bounds.max_y - bounds.min_y) / resolution)));
  grid.occupancy.assign(static_cast<size_t>(grid.width) * grid.height, 0);

  const int r = grid.dilation_cells(spec);
  std::vector<std::pair<int, int>> disc;
  for (int dx = -r; dx <= r; ++dx) {
    for (int dy = -r; dy <= r; ++dy) {
      if (dx * dx + dy * dy <= r * r) disc.emplace_back(dx, dy);
    }
  }

  for (const Vec2& p : obstacles.points) {
    const int ix = grid.cell_x(p.x);
    const int iy = grid.cell_y(p.y);
    if (!grid.cell_in_bounds(ix, iy)) continue;
    for (const auto& [dx, dy] : disc) {
      const int cx = ix + dx;
      const int cy = iy + dy;
      if (grid.cell_in_bounds(cx, cy)) {
        grid.occupancy[static_cast<size_t>(cy) * grid.width + cx] = 1;
      }
    }
  }
  return grid;
}

std::optional<HeuristicField> compute_cost_to_go(const GridMap& grid, const Pose& goal) {
  const int gx = grid.cell_x(goal.x);
  const int gy = grid.cell_y(goal.y);
  if (!grid.cell_in_bounds(gx, gy) || grid.occupied(gx, gy)) return std::nullopt;

  constexpr double kInf = std::numeric_limits<double>::infinity();
  HeuristicField field;
  field.width = grid.width;
  field.height = grid.height;
  field.cost_to_go.assign(static_cast<size_t>(grid.width) * grid.height, kInf);

  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  const auto idx = [&](int ix, int iy) { return static_cast<size_t>(iy) * grid.width + ix; };
  field.cost_to_go[idx(gx, gy)] = 0.0;
  open.emplace(0.0, static_cast<int>(idx(gx, gy)));

  const double straight = grid.resolution;
  const double diagonal = grid.resolution * std::sqrt(2.0);
  static constexpr int kDx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int kDy[8] = {0, 0, 1, -1, 1, -1, 1, -1};

  while (!open.empty()) {
    const auto [d, cell] = open.top();
    open.pop();
    if (d > field.cost_to_go[cell]) continue;
    const int cx = cell % grid.width;
    const int cy = cell / grid.width;
    for (int k = 0; k < 8; ++k) {
      const int nx = cx + kDx[k];
      const int ny = cy + kDy[k];
      if (!grid.cell_in_bounds(nx, ny) || grid.occupied(nx, ny)) continue;
      const double nd = d + (k < 4 ? straight : diagonal);
      double& ref = field.cost_to_go[idx(nx, ny)];
      if (nd < ref) {
        ref = nd;
        open.emplace(nd, static_cast<int>(idx(nx, ny)));
      }
    }
  }
  return field;
}

}  // namespace n3p
