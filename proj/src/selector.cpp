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

#include "n3p/selector.hpp"

#include <atomic>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "n3p/rng.hpp"

namespace n3p {

namespace {

uint64_t fnv1a(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fmt9(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

double parse_num(const std::string& tok, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw FormatError("bad number '" + tok + "'", line);
  }
}

std::string axis_to_string(const GridAxis& a) {
  return fmt9(a.min) + "," + fmt9(a.max) + "," + fmt9(a.step);
}

GridAxis axis_from_string(const std::string& s, int line) {
  std::string parts[3];
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    const std::size_t comma = s.find(',', pos);
    if (i < 2 && comma == std::string::npos) throw FormatError("bad grid axis '" + s + "'", line);
    parts[i] = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    pos = comma + 1;
  }
  return GridAxis{parse_num(parts[0], line), parse_num(parts[1], line), parse_num(parts[2], line)};
}

}  // namespace

std::string planner_config_hash(const VehicleSpec& spec, const PlannerConfig& cfg) {
  std::string blob;
  const auto add = [&](double v) { blob += fmt9(v) + ";"; };
  add(spec.body_length);
  add(spec.body_width);
  add(spec.wheelbase);
  add(spec.max_steer);
  add(spec.rear_overhang);
  add(spec.safety_margin);
  add(cfg.grid_resolution);
  add(cfg.heading_bins);
  add(cfg.primitive_arc);
  add(cfg.steer_levels);
  add(cfg.reverse_cost_mult);
  add(cfg.gear_switch_penalty);
  add(cfg.steer_change_penalty);
  add(cfg.rs_shot_period);
  add(cfg.goal_tol_xy);
  add(cfg.goal_tol_theta);
  add(cfg.ds_check);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(blob)));
  return buf;
}

SelectorDataset collect_offline(ParkingType type, const QuantizationGrid& grid, int n_per_env,
                                const VehicleSpec& spec, const PlannerConfig& cfg,
                                const EnvGeometry& geom, uint64_t seed, int workers) {
  if (n_per_env < 1) throw std::invalid_argument("n_per_env must be >= 1");

  PlannerConfig collect_cfg = cfg;
  collect_cfg.require_exact_terminal = true;  // every sample needs an analytic tail

  struct EnvResult {
    std::vector<Sample> samples;
    int failures = 0;
    bool empty = false;
  };
  const int n_envs = grid.count();
  std::vector<EnvResult> results(n_envs);

  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_envs) return;
      const EnvAbstraction env = grid.env_at(i, type);
      ObstacleCloud cloud;
      GoalSpec goal;
      synth_abstract_obstacles(env, spec, geom, &cloud, &goal);
      Planner planner(cloud, goal.goal, spec, collect_cfg);

      EnvResult& res = results[i];
      Rng rng(mix_seed(seed, static_cast<uint64_t>(i) * 3 + static_cast<uint64_t>(type)));
      const double mouth = geom.mouth_y(type);
      const double x_hi = env.d_deadend - 1.8;
      const double x_lo = -geom.local_extent + 1.5;
      const int max_draws = 6 * n_per_env + 20;
      int free_starts = 0;
      for (int draw = 0; draw < max_draws && static_cast<int>(res.samples.size()) < n_per_env;
           ++draw) {
        const Pose start(rng.uniform(x_lo, x_hi), rng.uniform(mouth + 1.0, mouth + env.w_lane - 1.0),
                         rng.uniform(-0.5 * kPi, 0.5 * kPi));
        if (planner.checker().pose_in_collision(start)) continue;
        ++free_starts;
        PlanOutcome outcome = planner.plan(start, Variant::with_rs);
        if (!outcome.ok() || !outcome.path->rs_start_index) {
          ++res.failures;
          continue;
        }
        const Pose rs_start = outcome.path->states[*outcome.path->rs_start_index].pose;
        res.samples.push_back(Sample{start, env.w_lane, env.w_spot, env.d_deadend, rs_start});
      }
      res.empty = free_starts == 0;
    }
  };

  const int n_threads = std::max(1, std::min(workers, n_envs));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SelectorDataset dataset;
  dataset.type = type;
  dataset.grid = grid;
  dataset.meta.seed = seed;
  dataset.meta.n_per_env = n_per_env;
  dataset.meta.config_hash = planner_config_hash(spec, cfg);
  for (const EnvResult& res : results) {
    dataset.meta.skipped_failures += res.failures;
    dataset.meta.empty_envs += res.empty ? 1 : 0;
    dataset.samples.insert(dataset.samples.end(), res.samples.begin(), res.samples.end());
  }
  return dataset;
}

std::string dataset_to_string(const SelectorDataset& d) {
  std::string out = "n3p-dataset v1 ";
  out += to_string(d.type);
  out += " grid=" + axis_to_string(d.grid.w_lane) + ";" + axis_to_string(d.grid.w_spot) + ";" +
         axis_to_string(d.grid.d_deadend);
  out += " seed=" + std::to_string(d.meta.seed);
  out += " n_per_env=" + std::to_string(d.meta.n_per_env);
  out += " cfg=" + d.meta.config_hash;
  out += " skipped=" + std::to_string(d.meta.skipped_failures);
  out += " empty_envs=" + std::to_string(d.meta.empty_envs);
  out += "\n";
  for (const Sample& s : d.samples) {
    out += fmt9(s.x0.x) + " " + fmt9(s.x0.y) + " " + fmt9(s.x0.theta) + " " + fmt9(s.w_lane) +
           " " + fmt9(s.w_spot) + " " + fmt9(s.d_deadend) + " " + fmt9(s.rs_start.x) + " " +
           fmt9(s.rs_start.y) + " " + fmt9(s.rs_start.theta) + "\n";
  }
  return out;
}

SelectorDataset dataset_from_string(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw FormatError("empty dataset", 1);
  ++line_no;

  std::istringstream header(line);
  std::string tag, version, type_str;
  header >> tag >> version >> type_str;
  if (tag != "n3p-dataset") throw FormatError("expected 'n3p-dataset', found '" + tag + "'", 1);
  if (version != "v1") throw FormatError("expected version 'v1', found '" + version + "'", 1);
  SelectorDataset d;
  const auto type = parse_parking_type(type_str);
  if (!type) throw FormatError("unknown parking type '" + type_str + "'", 1);
  d.type = *type;

  std::string field;
  while (header >> field) {
    const std::size_t eq = field.find('=');
    if (eq == std::string::npos) throw FormatError("bad header field '" + field + "'", 1);
    const std::string key = field.substr(0, eq);
    const std::string value = field.substr(eq + 1);
    if (key == "grid") {
      const std::size_t s1 = value.find(';');
      const std::size_t s2 = value.find(';', s1 + 1);
      if (s1 == std::string::npos || s2 == std::string::npos) {
        throw FormatError("bad grid spec '" + value + "'", 1);
      }
      d.grid.w_lane = axis_from_string(value.substr(0, s1), 1);
      d.grid.w_spot = axis_from_string(value.substr(s1 + 1, s2 - s1 - 1), 1);
      d.grid.d_deadend = axis_from_string(value.substr(s2 + 1), 1);
    } else if (key == "seed") {
      d.meta.seed = std::stoull(value);
    } else if (key == "n_per_env") {
      d.meta.n_per_env = std::stoi(value);
    } else if (key == "cfg") {
      d.meta.config_hash = value;
    } else if (key == "skipped") {
      d.meta.skipped_failures = std::stoi(value);
    } else if (key == "empty_envs") {
      d.meta.empty_envs = std::stoi(value);
    } else {
      throw FormatError("unknown header field '" + key + "'", 1);
    }
  }

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok[9];
    for (int i = 0; i < 9; ++i) {
      if (!(ls >> tok[i])) throw FormatError("expected 9 numbers per sample", line_no);
    }
    std::string extra;
    if (ls >> extra) throw FormatError("trailing data '" + extra + "'", line_no);
    Sample s;
    s.x0 = Pose(parse_num(tok[0], line_no), parse_num(tok[1], line_no), parse_num(tok[2], line_no));
    s.w_lane = parse_num(tok[3], line_no);
    s.w_spot = parse_num(tok[4], line_no);
    s.d_deadend = parse_num(tok[5], line_no);
    s.rs_start =
        Pose(parse_num(tok[6], line_no), parse_num(tok[7], line_no), parse_num(tok[8], line_no));
    if (!d.grid.contains(EnvAbstraction{s.w_lane, s.w_spot, s.d_deadend, d.type})) {
      throw FormatError("sample environment off the declared grid", line_no);
    }
    d.samples.push_back(s);
  }
  return d;
}

void save_dataset(const SelectorDataset& d, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open for writing: " + file);
  out << dataset_to_string(d);
  if (!out) throw std::runtime_error("write failed: " + file);
}

SelectorDataset load_dataset(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open: " + file);
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_string(buf.str());
}

KnnIndex::KnnIndex(SelectorDataset dataset, const FeatureScales& scales)
    : dataset_(std::move(dataset)), scales_(scales) {
  if (dataset_.samples.empty()) throw std::invalid_argument("empty selector dataset");
  for (double s : scales_.values) {
    if (!(s > 0.0)) throw std::invalid_argument("feature scales must be positive");
  }
}

std::size_t KnnIndex::nearest_row(const Pose& x0, const EnvAbstraction& e_train) const {
  const std::array<double, 6>& w = scales_.values;
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_i = 0;
  for (std::size_t i = 0; i < dataset_.samples.size(); ++i) {
    const Sample& s = dataset_.samples[i];
    const double d0 = (x0.x - s.x0.x) * w[0];
    const double d1 = (x0.y - s.x0.y) * w[1];
    const double d2 = angle_diff(x0.theta, s.x0.theta) * w[2];
    const double d3 = (e_train.w_lane - s.w_lane) * w[3];
    const double d4 = (e_train.w_spot - s.w_spot) * w[4];
    const double d5 = (e_train.d_deadend - s.d_deadend) * w[5];
    const double dist = d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4 + d5 * d5;
    if (dist < best) {
      best = dist;
      best_i = i;
    }
  }
  return best_i;
}

Pose KnnIndex::predict(const Pose& x0, const EnvAbstraction& e_train) const {
  return dataset_.samples[nearest_row(x0, e_train)].rs_start;
}

void save_index(const KnnIndex& index, const std::string& file) {
  std::ofstream out(file);
  if (!out) throw std::runtime_error("cannot open for writing: " + file);
  out << "n3p-index v1";
  for (double s : index.scales().values) out << " " << fmt9(s);
  out << "\n" << dataset_to_string(index.dataset());
  if (!out) throw std::runtime_error("write failed: " + file);
}

KnnIndex load_index(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open: " + file);
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty index file", 1);
  std::istringstream header(line);
  std::string tag, version;
  header >> tag >> version;
  if (tag != "n3p-index" || version != "v1") {
    throw FormatError("expected header 'n3p-index v1', found '" + line + "'", 1);
  }
  FeatureScales scales;
  for (double& s : scales.values) {
    if (!(header >> s)) throw FormatError("expected 6 feature scales", 1);
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return KnnIndex(dataset_from_string(buf.str()), scales);
}

}  // namespace n3p
