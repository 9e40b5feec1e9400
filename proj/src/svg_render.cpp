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

#include "n3p/svg_render.hpp"

#include <cstdio>
#include <fstream>

namespace n3p {

namespace {

std::string num(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

// SVG y grows downward; flip about the box top.
struct Mapper {
  double max_y;
  double x(double wx) const { return wx; }
  double y(double wy) const { return max_y - wy; }
};

void emit_footprint(std::string& svg, const Mapper& m, const Footprint& fp, const char* style) {
  svg += "<polygon points=\"";
  for (const Vec2& c : fp.corners) {
    svg += num(m.x(c.x)) + "," + num(m.y(c.y)) + " ";
  }
  svg += "\" ";
  svg += style;
  svg += "/>\n";
}

void emit_pose_arrow(std::string& svg, const Mapper& m, const Pose& p, const char* color) {
  const double len = 1.2;
  const double tx = p.x + len * std::cos(p.theta);
  const double ty = p.y + len * std::sin(p.theta);
  svg += "<line x1=\"" + num(m.x(p.x)) + "\" y1=\"" + num(m.y(p.y)) + "\" x2=\"" + num(m.x(tx)) +
         "\" y2=\"" + num(m.y(ty)) + "\" stroke=\"" + color + "\" stroke-width=\"0.12\"/>\n";
  svg += "<circle cx=\"" + num(m.x(p.x)) + "\" cy=\"" + num(m.y(p.y)) +
         "\" r=\"0.18\" fill=\"" + color + "\"/>\n";
}

}  // namespace

std::string render_trajectory_svg(const Scenario& scenario, const PlannedPath& path,
                                  const VehicleSpec& spec, const EnvGeometry& geom,
                                  const Pose* g_pre) {
  Rect box = bounding_rect(scenario.obstacles);
  box.include(scenario.start.x, scenario.start.y);
  for (const PathState& s : path.states) box.include(s.pose.x, s.pose.y);
  box.expand(2.0);
  const Mapper m{box.max_y};

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + num(box.min_x) + " 0 " +
         num(box.max_x - box.min_x) + " " + num(box.max_y - box.min_y) + "\">\n";
  svg += "<rect x=\"" + num(box.min_x) + "\" y=\"0\" width=\"" + num(box.max_x - box.min_x) +
         "\" height=\"" + num(box.max_y - box.min_y) + "\" fill=\"#fafafa\"/>\n";

  // Spot outline.
  const double depth = geom.spot_depth(scenario.type);
  const double half = 0.5 * scenario.true_params.w_spot;
  svg += "<polygon class=\"spot\" points=\"";
  const double sx[4] = {-half, half, half, -half};
  const double sy[4] = {-0.5 * depth, -0.5 * depth, 0.5 * depth, 0.5 * depth};
  for (int i = 0; i < 4; ++i) {
    const Vec2 w = point_from_frame(Vec2{sx[i], sy[i]}, scenario.spot_pose);
    svg += num(m.x(w.x)) + "," + num(m.y(w.y)) + " ";
  }
  svg += "\" fill=\"#fff3bf\" stroke=\"#e0a800\" stroke-width=\"0.05\"/>\n";

  // Obstacle points.
  svg += "<g fill=\"#333333\">\n";
  for (const Vec2& p : scenario.obstacles.points) {
    svg += "<circle cx=\"" + num(m.x(p.x)) + "\" cy=\"" + num(m.y(p.y)) + "\" r=\"0.05\"/>\n";
  }
  svg += "</g>\n";

  // Footprints at intervals along the trajectory.
  if (!path.states.empty()) {
    const std::size_t stride = std::max<std::size_t>(1, path.states.size() / 12);
    for (std::size_t i = 0; i < path.states.size(); i += stride) {
      emit_footprint(svg, m, footprint_at(spec, path.states[i].pose),
                     "fill=\"none\" stroke=\"#74a9cf\" stroke-width=\"0.04\"");
    }
    emit_footprint(svg, m, footprint_at(spec, path.states.back().pose),
                   "fill=\"none\" stroke=\"#2b8cbe\" stroke-width=\"0.06\"");
  }

  // The trajectory itself.
  svg += "<polyline class=\"trajectory\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"0.1\" "
         "points=\"";
  for (const PathState& s : path.states) {
    svg += num(m.x(s.pose.x)) + "," + num(m.y(s.pose.y)) + " ";
  }
  svg += "\"/>\n";

  emit_pose_arrow(svg, m, scenario.start, "#2ca02c");
  emit_pose_arrow(svg, m, scenario.goal_world(spec, geom), "#e0a800");
  if (g_pre != nullptr) {
    svg += "<circle class=\"gpre\" cx=\"" + num(m.x(g_pre->x)) + "\" cy=\"" + num(m.y(g_pre->y)) +
           "\" r=\"0.3\" fill=\"none\" stroke=\"#9467bd\" stroke-width=\"0.1\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void render_trajectory(const Scenario& scenario, const PlannedPath& path, const VehicleSpec& spec,
                       const EnvGeometry& geom, const std::string& out_file, const Pose* g_pre) {
  std::ofstream out(out_file);
  if (!out) throw std::runtime_error("cannot open for writing: " + out_file);
  out << render_trajectory_svg(scenario, path, spec, geom, g_pre);
  if (!out) throw std::runtime_error("write failed: " + out_file);
}

}  // namespace n3p
