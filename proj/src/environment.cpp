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

#include "n3p/environment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "n3p/rng.hpp"

namespace n3p {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Lane-measurement windows. Structures are grouped locally in front of the
// spot; the |x| window stays below the minimum dead-end distance so that a
// dead-end wall never reads as lane structure, and points below the
// protrusion ceiling count as curb-side protrusion rather than far-side
// structure.
constexpr double kLaneWindowX = 3.0;
constexpr double kLaneWindowXWide = 6.0;
constexpr double kProtrusionCeiling = 1.6;
constexpr double kLaneCap = 8.0;
constexpr double kStripEps = 0.02;

void add_wall(ObstacleCloud* cloud, double x0, double y0, double x1, double y1, double spacing) {
  const double len = std::hypot(x1 - x0, y1 - y0);
  const int n = std::max(1, static_cast<int>(std::ceil(len / spacing - 1e-9)));
  for (int i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / n;
    cloud->points.push_back(Vec2{x0 + t * (x1 - x0), y0 + t * (y1 - y0)});
  }
}

// Outline of a parked vehicle, centered at `center` (body center, not rear
// axle), sampled along the four sides.
void add_vehicle_outline(ObstacleCloud* cloud, const Pose& center, double length, double width,
                         double spacing) {
  const double c = std::cos(center.theta);
  const double s = std::sin(center.theta);
  const double hl = 0.5 * length;
  const double hw = 0.5 * width;
  const auto corner = [&](double bx, double by) {
    return Vec2{center.x + c * bx - s * by, center.y + s * bx + c * by};
  };
  const Vec2 p0 = corner(-hl, -hw), p1 = corner(hl, -hw), p2 = corner(hl, hw), p3 = corner(-hl, hw);
  add_wall(cloud, p0.x, p0.y, p1.x, p1.y, spacing);
  add_wall(cloud, p1.x, p1.y, p2.x, p2.y, spacing);
  add_wall(cloud, p2.x, p2.y, p3.x, p3.y, spacing);
  add_wall(cloud, p3.x, p3.y, p0.x, p0.y, spacing);
}

void format_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

double parse_double(const std::string& tok, int line) {
  double v = 0.0;
  auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
    throw FormatError("bad number '" + tok + "'", line);
  }
  return v;
}

}  // namespace

const char* to_string(ParkingType t) {
  switch (t) {
    case ParkingType::forward: return "forward";
    case ParkingType::reverse: return "reverse";
    case ParkingType::parallel: return "parallel";
  }
  return "unknown";
}

const char* to_string(Difficulty d) {
  switch (d) {
    case Difficulty::easy: return "easy";
    case Difficulty::complex: return "complex";
    case Difficulty::extreme: return "extreme";
  }
  return "unknown";
}

std::optional<ParkingType> parse_parking_type(const std::string& s) {
  if (s == "forward") return ParkingType::forward;
  if (s == "reverse") return ParkingType::reverse;
  if (s == "parallel") return ParkingType::parallel;
  return std::nullopt;
}

std::optional<Difficulty> parse_difficulty(const std::string& s) {
  if (s == "easy") return Difficulty::easy;
  if (s == "complex") return Difficulty::complex;
  if (s == "extreme") return Difficulty::extreme;
  return std::nullopt;
}

bool GridAxis::contains(double v, double tol) const {
  const int i = static_cast<int>(std::llround((v - min) / step));
  if (i < 0 || i >= count()) return false;
  return std::abs(value(i) - v) <= tol;
}

EnvAbstraction QuantizationGrid::env_at(int flat_index, ParkingType type) const {
  const int nd = d_deadend.count();
  const int ns = w_spot.count();
  const int id = flat_index % nd;
  const int is = (flat_index / nd) % ns;
  const int il = flat_index / (nd * ns);
  return EnvAbstraction{w_lane.value(il), w_spot.value(is), d_deadend.value(id), type};
}

bool QuantizationGrid::contains(const EnvAbstraction& e, double tol) const {
  return w_lane.contains(e.w_lane, tol) && w_spot.contains(e.w_spot, tol) &&
         d_deadend.contains(e.d_deadend, tol);
}

GoalSpec goal_spec_for(ParkingType type, const VehicleSpec& spec, const EnvGeometry& geom) {
  // Rear-axle offset that puts the body center on the spot center.
  const double center_ahead = 0.5 * spec.body_length - spec.rear_overhang;
  GoalSpec g;
  g.type = type;
  switch (type) {
    case ParkingType::forward:
      g.goal = Pose(0.0, center_ahead, -0.5 * kPi);
      break;
    case ParkingType::reverse:
      g.goal = Pose(0.0, -center_ahead, 0.5 * kPi);
      break;
    case ParkingType::parallel:
      g.goal = Pose(-center_ahead, 0.0, 0.0);
      g.d_spot = geom.parallel_required_depth;
      g.y_boundary = geom.mouth_y(type);
      break;
  }
  return g;
}

AbstractionResult abstract_environment(const ObstacleCloud& obstacles_spot, ParkingType type,
                                       const VehicleSpec& spec, const EnvGeometry& geom) {
  const double mouth = geom.mouth_y(type);
  const double strip_lo = -mouth + 0.15;

  // Far-side (top) structure: nearest point above the protrusion ceiling in
  // a column around the spot.
  double y_top = kInf;
  for (double win : {kLaneWindowX, kLaneWindowXWide}) {
    for (const Vec2& p : obstacles_spot.points) {
      if (std::abs(p.x) <= win && p.y >= mouth + kProtrusionCeiling) y_top = std::min(y_top, p.y);
    }
    if (std::isfinite(y_top)) break;
  }
  if (!std::isfinite(y_top)) y_top = mouth + kLaneCap;

  // Access-rectangle validity: an obstacle directly in front of the spot
  // makes the goal unreachable regardless of the abstraction.
  const double acc_half = 0.5 * spec.body_width + spec.safety_margin;
  AbstractionResult result;
  for (const Vec2& p : obstacles_spot.points) {
    if (std::abs(p.x) < acc_half && p.y > mouth + kStripEps && p.y < y_top - kStripEps) {
      result.spot_blocked = true;
      return result;
    }
  }

  // Curb-side protrusions into the lane reduce the usable lane width.
  double y_low = mouth;
  for (const Vec2& p : obstacles_spot.points) {
    if (std::abs(p.x) <= kLaneWindowX && p.y > mouth + kStripEps &&
        p.y < mouth + kProtrusionCeiling) {
      y_low = std::max(y_low, p.y);
    }
  }
  const double w_lane = y_top - y_low;

  // Lateral blocking structure along the lane: measured in the central band
  // of the corridor so that neither curb protrusions nor far-side vehicles
  // register as a dead end.
  const double band_lo = mouth + (y_top - mouth) / 3.0;
  const double band_hi = mouth + 2.0 * (y_top - mouth) / 3.0;
  double d_deadend = kInf;
  for (const Vec2& p : obstacles_spot.points) {
    if (p.y > band_lo && p.y < band_hi) d_deadend = std::min(d_deadend, std::abs(p.x));
  }
  if (!std::isfinite(d_deadend)) d_deadend = geom.local_extent;

  // Spot width: clear span between the bottom-left and bottom-right groups
  // across the spot depth, up to the mouth line.
  double right = geom.local_extent;
  double left = -geom.local_extent;
  for (const Vec2& p : obstacles_spot.points) {
    if (p.y < strip_lo || p.y > mouth + kStripEps) continue;
    if (p.x > 0.05) right = std::min(right, p.x);
    if (p.x < -0.05) left = std::max(left, p.x);
  }
  const double w_spot = std::max(0.0, right - left);

  result.env = EnvAbstraction{w_lane, w_spot, d_deadend, type};
  return result;
}

std::optional<EnvAbstraction> quantize(const EnvAbstraction& e, const QuantizationGrid& grid) {
  const auto snap = [](double v, const GridAxis& axis) -> std::optional<double> {
    const double q = std::min(std::floor((v + 1e-9) / axis.step) * axis.step, axis.max);
    if (q < axis.min - 1e-9) return std::nullopt;
    return q;
  };
  const auto wl = snap(e.w_lane, grid.w_lane);
  const auto ws = snap(e.w_spot, grid.w_spot);
  const auto dd = snap(e.d_deadend, grid.d_deadend);
  if (!wl || !ws || !dd) return std::nullopt;
  return EnvAbstraction{*wl, *ws, *dd, e.type};
}

void synth_abstract_obstacles(const EnvAbstraction& e, const VehicleSpec& spec,
                              const EnvGeometry& geom, ObstacleCloud* cloud, GoalSpec* goal) {
  (void)spec;
  const double mouth = geom.mouth_y(e.type);
  const double bottom = -mouth;
  const double top = mouth + e.w_lane;
  const double half = 0.5 * e.w_spot;
  const double ext = geom.local_extent;
  const double ds = geom.wall_spacing;

  cloud->points.clear();
  add_wall(cloud, -ext, mouth, -half, mouth, ds);
  add_wall(cloud, half, mouth, ext, mouth, ds);
  add_wall(cloud, -half, bottom, -half, mouth, ds);
  add_wall(cloud, half, bottom, half, mouth, ds);
  add_wall(cloud, -half, bottom, half, bottom, ds);
  add_wall(cloud, -ext, top, ext, top, ds);
  add_wall(cloud, e.d_deadend, mouth, e.d_deadend, top, ds);

  if (goal != nullptr) *goal = goal_spec_for(e.type, spec, geom);
}

Pose Scenario::goal_world(const VehicleSpec& spec, const EnvGeometry& geom) const {
  return from_spot_frame(goal_spec_for(type, spec, geom).goal, spot_pose);
}

namespace {

struct DifficultyRanges {
  double ws_lo, ws_hi;
  bool always_deadend;
  double d_lo, d_hi;
};

DifficultyRanges ranges_for(Difficulty d, ParkingType type) {
  const bool parallel = type == ParkingType::parallel;
  switch (d) {
    case Difficulty::easy:
      return {parallel ? 7.0 : 3.2, parallel ? 8.0 : 4.2, false, 8.0, 12.0};
    case Difficulty::complex:
      return {parallel ? 6.5 : 2.8, parallel ? 7.5 : 3.7, true, 8.0, 12.0};
    case Difficulty::extreme:
    default:
      return {parallel ? 6.0 : 2.3, parallel ? 7.0 : 3.2, true, 4.0, 8.0};
  }
}

// One candidate scene in the spot frame. Returns the cloud; start sampling
// happens afterwards against it.
ObstacleCloud build_scene(Rng& rng, ParkingType type, double w_spot, bool has_deadend, double d,
                          const VehicleSpec& spec, const EnvGeometry& geom) {
  ObstacleCloud cloud;
  const double mouth = geom.mouth_y(type);
  const double bottom = -mouth;
  const double top = mouth + 6.0;
  const double half = 0.5 * w_spot;
  const double ext = geom.local_extent;
  const double ds = geom.wall_spacing;

  add_wall(&cloud, -ext - 2.0, mouth, -half, mouth, ds);
  add_wall(&cloud, half, mouth, ext + 2.0, mouth, ds);
  add_wall(&cloud, -half, bottom, -half, mouth, ds);
  add_wall(&cloud, half, bottom, half, mouth, ds);
  add_wall(&cloud, -half, bottom, half, bottom, ds);
  add_wall(&cloud, -ext - 2.0, top, ext + 2.0, top, ds);
  if (has_deadend) add_wall(&cloud, d, mouth, d, top, ds);

  const double acc_half = 0.5 * spec.body_width + spec.safety_margin + 0.15;
  const bool parallel = type == ParkingType::parallel;

  // Occupied slots in the same row as the target spot.
  const double pitch = w_spot;
  const int n_side = static_cast<int>(std::floor((ext - half) / pitch));
  for (int side : {-1, 1}) {
    for (int i = 1; i <= n_side; ++i) {
      const double slot_cx = side * (half + (i - 0.5) * pitch);
      const bool present = rng.bernoulli(0.6);
      const double len = spec.body_length + rng.uniform(-0.2, 0.2);
      const double wid = spec.body_width + rng.uniform(-0.2, 0.2);
      const double heading_jitter = rng.uniform(-3.0, 3.0) * kPi / 180.0;
      const double span = parallel ? len : wid;
      const double lat_max = std::max(0.0, 0.5 * (pitch - span) - 0.18);
      const double lat = rng.uniform(-lat_max, lat_max);
      const double depth = parallel ? rng.uniform(-0.15, 0.45) : rng.uniform(-0.2, 0.75);
      if (!present) continue;
      if (has_deadend && slot_cx + 0.5 * pitch > d - 0.2) continue;
      double heading = parallel ? heading_jitter
                                : (rng.bernoulli(0.5) ? 0.5 * kPi : -0.5 * kPi) + heading_jitter;
      add_vehicle_outline(&cloud, Pose(slot_cx + lat, depth, heading), len, wid, ds);
    }
  }

  // Vehicles parked along the far side of the drive lane.
  const double top_pitch = 6.0;
  const int n_top = static_cast<int>(std::floor(2.0 * ext / top_pitch));
  for (int i = 0; i < n_top; ++i) {
    const double cx = -ext + (i + 0.5) * top_pitch;
    const bool present = rng.bernoulli(0.35);
    const double len = spec.body_length + rng.uniform(-0.2, 0.2);
    const double wid = spec.body_width + rng.uniform(-0.2, 0.2);
    const double heading = rng.uniform(-3.0, 3.0) * kPi / 180.0;
    const double cy = top - 0.5 * wid - 0.05 - rng.uniform(0.0, 0.25);
    if (!present) continue;
    if (cx + 0.5 * len + 0.3 > -acc_half && cx - 0.5 * len - 0.3 < acc_half) continue;
    if (has_deadend && cx + 0.5 * len > d - 0.3) continue;
    add_vehicle_outline(&cloud, Pose(cx, cy, heading), len, wid, ds);
  }
  return cloud;
}

}  // namespace

Scenario generate_scenario(Difficulty difficulty, ParkingType type, uint64_t seed,
                           const VehicleSpec& spec, const EnvGeometry& geom) {
  Rng rng(mix_seed(seed, static_cast<uint64_t>(type) * 3 + static_cast<uint64_t>(difficulty) + 1));
  const DifficultyRanges r = ranges_for(difficulty, type);
  const double mouth = geom.mouth_y(type);
  const double top = mouth + 6.0;

  Scenario scenario;
  scenario.type = type;
  scenario.difficulty = difficulty;
  scenario.seed = seed;

  const GoalSpec goal = goal_spec_for(type, spec, geom);

  constexpr int kSceneAttempts = 25;
  for (int attempt = 0; attempt < kSceneAttempts; ++attempt) {
    const double w_spot = rng.uniform(r.ws_lo, r.ws_hi);
    const bool has_deadend = r.always_deadend || rng.bernoulli(0.5);
    const double d = has_deadend ? rng.uniform(r.d_lo, r.d_hi) : geom.local_extent;
    ObstacleCloud cloud = build_scene(rng, type, w_spot, has_deadend, d, spec, geom);
    const Pose spot_pose(rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0), rng.uniform(-kPi, kPi));

    const AbstractionResult abs = abstract_environment(cloud, type, spec, geom);
    if (abs.spot_blocked) continue;
    CollisionChecker checker(cloud, spec);
    if (checker.pose_in_collision(goal.goal)) continue;

    bool start_found = false;
    Pose start;
    const double x_hi = has_deadend ? d - 2.0 : geom.local_extent - 1.5;
    for (int tries = 0; tries < 40 && !start_found; ++tries) {
      start = Pose(rng.uniform(-geom.local_extent + 1.5, x_hi),
                   rng.uniform(mouth + 1.0, top - 1.0), rng.uniform(-kPi / 6.0, kPi / 6.0));
      start_found = !checker.pose_in_collision(start);
    }
    if (!start_found) continue;

    scenario.obstacles = cloud_from_frame(cloud, spot_pose);
    scenario.spot_pose = spot_pose;
    scenario.start = from_spot_frame(start, spot_pose);
    scenario.true_params =
        EnvAbstraction{6.0, w_spot, std::min(d, geom.local_extent), type};
    return scenario;
  }

  // Deterministic minimal scene after bounded retries: walls only.
  const double w_spot = 0.5 * (r.ws_lo + r.ws_hi);
  const bool has_deadend = r.always_deadend;
  const double d = has_deadend ? 0.5 * (r.d_lo + r.d_hi) : geom.local_extent;
  EnvAbstraction e{6.0, w_spot, d, type};
  ObstacleCloud cloud;
  synth_abstract_obstacles(e, spec, geom, &cloud, nullptr);
  scenario.obstacles = cloud;
  scenario.spot_pose = Pose();
  scenario.start = Pose(-8.0, mouth + 3.0, 0.0);
  scenario.true_params = e;
  return scenario;
}

std::string scenario_to_string(const Scenario& s) {
  std::string out;
  out.reserve(64 + s.obstacles.size() * 24);
  out += "n3p-scenario v1\n";
  out += "type ";
  out += to_string(s.type);
  out += "\ndifficulty ";
  out += to_string(s.difficulty);
  out += "\nseed " + std::to_string(s.seed) + "\n";
  const auto pose_line = [&](const char* name, const Pose& p) {
    out += name;
    out += ' ';
    format_double(out, p.x);
    out += ' ';
    format_double(out, p.y);
    out += ' ';
    format_double(out, p.theta);
    out += '\n';
  };
  pose_line("spot_pose", s.spot_pose);
  pose_line("start", s.start);
  out += "true_params ";
  format_double(out, s.true_params.w_lane);
  out += ' ';
  format_double(out, s.true_params.w_spot);
  out += ' ';
  format_double(out, s.true_params.d_deadend);
  out += '\n';
  out += "points " + std::to_string(s.obstacles.size()) + "\n";
  for (const Vec2& p : s.obstacles.points) {
    format_double(out, p.x);
    out += ' ';
    format_double(out, p.y);
    out += '\n';
  }
  return out;
}

Scenario scenario_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  const auto next_line = [&]() -> std::string {
    if (!std::getline(in, line)) throw FormatError("unexpected end of file", line_no);
    ++line_no;
    return line;
  };

  std::string header = next_line();
  if (header != "n3p-scenario v1") {
    throw FormatError("expected header 'n3p-scenario v1', found '" + header + "'", line_no);
  }
  Scenario s;
  const auto expect_key = [&](const std::string& text_line, const std::string& key) {
    if (text_line.rfind(key + " ", 0) != 0) {
      throw FormatError("expected '" + key + "', found '" + text_line + "'", line_no);
    }
    return text_line.substr(key.size() + 1);
  };

  {
    const std::string v = expect_key(next_line(), "type");
    const auto t = parse_parking_type(v);
    if (!t) throw FormatError("unknown parking type '" + v + "'", line_no);
    s.type = *t;
  }
  {
    const std::string v = expect_key(next_line(), "difficulty");
    const auto d = parse_difficulty(v);
    if (!d) throw FormatError("unknown difficulty '" + v + "'", line_no);
    s.difficulty = *d;
  }
  s.seed = std::stoull(expect_key(next_line(), "seed"));

  const auto parse_triple = [&](const std::string& body, double& a, double& b, double& c) {
    std::istringstream ls(body);
    std::string ta, tb, tc;
    if (!(ls >> ta >> tb >> tc)) throw FormatError("expected three numbers", line_no);
    a = parse_double(ta, line_no);
    b = parse_double(tb, line_no);
    c = parse_double(tc, line_no);
  };
  double a, b, c;
  parse_triple(expect_key(next_line(), "spot_pose"), a, b, c);
  s.spot_pose = Pose(a, b, c);
  parse_triple(expect_key(next_line(), "start"), a, b, c);
  s.start = Pose(a, b, c);
  parse_triple(expect_key(next_line(), "true_params"), a, b, c);
  s.true_params = EnvAbstraction{a, b, c, s.type};

  const std::string count_line = expect_key(next_line(), "points");
  const std::size_t n = std::stoull(count_line);
  s.obstacles.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::istringstream ls(next_line());
    std::string tx, ty;
    if (!(ls >> tx >> ty)) throw FormatError("expected point 'x y'", line_no);
    s.obstacles.points.push_back(Vec2{parse_double(tx, line_no), parse_double(ty, line_no)});
  }
  return s;
}

void save_scenario(const Scenario& s, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open for writing: " + file);
  out << scenario_to_string(s);
  if (!out) throw std::runtime_error("write failed: " + file);
}

Scenario load_scenario(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open: " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return scenario_from_string(buf.str());
}

}  // namespace n3p
