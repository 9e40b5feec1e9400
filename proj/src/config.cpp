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

#include "n3p/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace n3p {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw FormatError("bad number '" + v + "'", line);
  }
}

int to_int(const std::string& v, int line) {
  try {
    std::size_t used = 0;
    const int i = std::stoi(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return i;
  } catch (const std::exception&) {
    throw FormatError("bad integer '" + v + "'", line);
  }
}

GridAxis to_axis(const std::string& v, int line) {
  // min:max:step
  const std::size_t c1 = v.find(':');
  const std::size_t c2 = v.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos) {
    throw FormatError("expected 'min:max:step', found '" + v + "'", line);
  }
  return GridAxis{to_double(v.substr(0, c1), line), to_double(v.substr(c1 + 1, c2 - c1 - 1), line),
                  to_double(v.substr(c2 + 1), line)};
}

}  // namespace

std::string AppConfig::validate() const {
  if (std::string err = vehicle.validate(); !err.empty()) return "vehicle: " + err;
  if (std::string err = planner.validate(); !err.empty()) return "planner: " + err;
  for (const GridAxis* axis :
       {&grid_w_lane, &grid_w_spot_bay, &grid_w_spot_parallel, &grid_d_deadend}) {
    if (!(axis->step > 0.0) || axis->min > axis->max) return "grid axis must have min<=max, step>0";
  }
  for (double s : scales.values) {
    if (!(s > 0.0)) return "selector scales must be positive";
  }
  if (n_per_env < 1) return "selector.n_per_env must be >= 1";
  return {};
}

AppConfig config_from_string(const std::string& text) {
  AppConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("expected 'key = value'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (value.empty()) throw FormatError("missing value for '" + key + "'", line_no);

    if (key == "vehicle.body_length") cfg.vehicle.body_length = to_double(value, line_no);
    else if (key == "vehicle.body_width") cfg.vehicle.body_width = to_double(value, line_no);
    else if (key == "vehicle.wheelbase") cfg.vehicle.wheelbase = to_double(value, line_no);
    else if (key == "vehicle.max_steer_deg")
      cfg.vehicle.max_steer = to_double(value, line_no) * kPi / 180.0;
    else if (key == "vehicle.v_forward") cfg.vehicle.v_forward = to_double(value, line_no);
    else if (key == "vehicle.v_reverse") cfg.vehicle.v_reverse = to_double(value, line_no);
    else if (key == "vehicle.rear_overhang") cfg.vehicle.rear_overhang = to_double(value, line_no);
    else if (key == "vehicle.safety_margin") cfg.vehicle.safety_margin = to_double(value, line_no);
    else if (key == "planner.grid_resolution")
      cfg.planner.grid_resolution = to_double(value, line_no);
    else if (key == "planner.heading_bins") cfg.planner.heading_bins = to_int(value, line_no);
    else if (key == "planner.primitive_arc") cfg.planner.primitive_arc = to_double(value, line_no);
    else if (key == "planner.steer_levels") cfg.planner.steer_levels = to_int(value, line_no);
    else if (key == "planner.reverse_cost_mult")
      cfg.planner.reverse_cost_mult = to_double(value, line_no);
    else if (key == "planner.gear_switch_penalty")
      cfg.planner.gear_switch_penalty = to_double(value, line_no);
    else if (key == "planner.steer_change_penalty")
      cfg.planner.steer_change_penalty = to_double(value, line_no);
    else if (key == "planner.rs_shot_period") cfg.planner.rs_shot_period = to_int(value, line_no);
    else if (key == "planner.node_cap") cfg.planner.node_cap = to_int(value, line_no);
    else if (key == "planner.goal_tol_xy") cfg.planner.goal_tol_xy = to_double(value, line_no);
    else if (key == "planner.goal_tol_theta")
      cfg.planner.goal_tol_theta = to_double(value, line_no);
    else if (key == "planner.hold_count") cfg.planner.hold_count = to_int(value, line_no);
    else if (key == "planner.ds_check") cfg.planner.ds_check = to_double(value, line_no);
    else if (key == "planner.bounds_pad") cfg.planner.bounds_pad = to_double(value, line_no);
    else if (key == "env.spot_depth_bay") cfg.env.spot_depth_bay = to_double(value, line_no);
    else if (key == "env.spot_depth_parallel")
      cfg.env.spot_depth_parallel = to_double(value, line_no);
    else if (key == "env.local_extent") cfg.env.local_extent = to_double(value, line_no);
    else if (key == "env.wall_spacing") cfg.env.wall_spacing = to_double(value, line_no);
    else if (key == "env.group_tolerance") cfg.env.group_tolerance = to_double(value, line_no);
    else if (key == "env.parallel_required_depth")
      cfg.env.parallel_required_depth = to_double(value, line_no);
    else if (key == "grid.w_lane") cfg.grid_w_lane = to_axis(value, line_no);
    else if (key == "grid.w_spot_bay") cfg.grid_w_spot_bay = to_axis(value, line_no);
    else if (key == "grid.w_spot_parallel") cfg.grid_w_spot_parallel = to_axis(value, line_no);
    else if (key == "grid.d_deadend") cfg.grid_d_deadend = to_axis(value, line_no);
    else if (key == "selector.n_per_env") cfg.n_per_env = to_int(value, line_no);
    else if (key == "selector.scales") {
      std::istringstream vs(value);
      std::string tok;
      for (double& s : cfg.scales.values) {
        if (!std::getline(vs, tok, ',')) throw FormatError("expected 6 scales", line_no);
        s = to_double(trim(tok), line_no);
      }
      if (std::getline(vs, tok, ',')) throw FormatError("expected exactly 6 scales", line_no);
    } else {
      throw FormatError("unknown key '" + key + "'", line_no);
    }
  }
  if (std::string err = cfg.validate(); !err.empty()) throw FormatError(err, line_no);
  return cfg;
}

AppConfig load_config(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open: " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_string(buf.str());
}

}  // namespace n3p
