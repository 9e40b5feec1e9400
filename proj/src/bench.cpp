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

#include "n3p/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "n3p/svg_render.hpp"

namespace n3p {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

Variant variant_for_method(const std::string& method) {
  if (method == "ha") return Variant::plain;
  if (method == "ha-rs") return Variant::with_rs;
  if (method == "ha-hold") return Variant::hold;
  throw std::runtime_error("unknown method '" + method + "'");
}

}  // namespace

int direction_changes(const PlannedPath& path) { return count_direction_changes(path.states); }

double steering_variation(const PlannedPath& path, const VehicleSpec& spec, double dt) {
  if (path.states.size() < 2) throw PathTooShort();
  // Piecewise-constant steering over time, using the per-gear speeds.
  std::vector<double> end_time;
  std::vector<double> steer;
  double t = 0.0;
  for (std::size_t i = 1; i < path.states.size(); ++i) {
    const PathState& s = path.states[i];
    if (s.seg_len <= 0.0) continue;
    t += s.seg_len / (s.gear == Gear::forward ? spec.v_forward : spec.v_reverse);
    end_time.push_back(t);
    steer.push_back(s.steer);
  }
  if (end_time.empty()) throw PathTooShort();

  const int samples = static_cast<int>(std::floor(t / dt)) + 1;
  double sum = 0.0;
  double prev = 0.0;
  std::size_t seg = 0;
  for (int k = 0; k < samples; ++k) {
    const double tk = k * dt;
    while (seg + 1 < end_time.size() && tk > end_time[seg]) ++seg;
    const double dk = steer[seg];
    if (k > 0) sum += std::abs(dk - prev);
    prev = dk;
  }
  return sum / samples;
}

double percentile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double rank = q * (static_cast<double>(values.size()) - 1.0);
  const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

MetricsRow compute_metrics(const std::string& method, const std::vector<RunRecord>& records) {
  MetricsRow row;
  row.method = method;
  std::vector<double> times;
  double sum_dsteer = 0.0, sum_len = 0.0, sum_ndc = 0.0, sum_nodes = 0.0;
  for (const RunRecord& r : records) {
    ++row.runs;
    if (!r.success) continue;
    ++row.successes;
    times.push_back(r.planning_time_s);
    sum_dsteer += r.mean_abs_dsteer;
    sum_len += r.length_m;
    sum_ndc += r.direction_changes;
    sum_nodes += r.nodes_expanded;
    row.max_ndc = std::max(row.max_ndc, r.direction_changes);
  }
  row.fail_pct = row.runs == 0 ? 0.0 : 100.0 * (row.runs - row.successes) / row.runs;
  if (row.successes > 0) {
    row.min_t = *std::min_element(times.begin(), times.end());
    double sum_t = 0.0;
    for (double t : times) sum_t += t;
    row.mean_t = sum_t / row.successes;
    row.median_t = percentile(times, 0.5);
    row.p95_t = percentile(times, 0.95);
    row.mean_dsteer = sum_dsteer / row.successes;
    row.mean_length = sum_len / row.successes;
    row.mean_ndc = sum_ndc / row.successes;
    row.mean_nnode = sum_nodes / row.successes;
  }
  return row;
}

ExperimentResult run_experiment(const AppConfig& config, const KnnIndex* index,
                                const ExperimentSpec& spec) {
  if (spec.n < 1) throw std::runtime_error("experiment needs n >= 1");
  if (spec.methods.empty()) throw std::runtime_error("experiment needs at least one method");
  for (const std::string& m : spec.methods) {
    if (m == "knn-n3p") {
      if (index == nullptr) throw std::runtime_error("method knn-n3p requires a selector index");
      if (index->dataset().type != spec.type) {
        throw std::runtime_error("selector index parking type does not match the experiment");
      }
    } else {
      (void)variant_for_method(m);  // validates the name
    }
  }

  // Every method sees the identical scenario list.
  std::vector<Scenario> scenarios;
  scenarios.reserve(spec.n);
  for (int i = 0; i < spec.n; ++i) {
    scenarios.push_back(generate_scenario(spec.difficulty, spec.type, spec.seed + i,
                                          config.vehicle, config.env));
  }

  const int n_tasks = static_cast<int>(spec.methods.size()) * spec.n;
  std::vector<RunRecord> records(n_tasks);
  std::atomic<int> next{0};
  const auto worker = [&]() {
    for (;;) {
      const int task = next.fetch_add(1);
      if (task >= n_tasks) return;
      const int mi = task / spec.n;
      const int si = task % spec.n;
      const std::string& method = spec.methods[mi];
      const Scenario& scenario = scenarios[si];

      RunRecord rec;
      rec.method = method;
      rec.scenario_index = si;
      rec.scenario_seed = scenario.seed;

      std::optional<PlannedPath> path;
      if (method == "knn-n3p") {
        N3POutcome outcome = plan_n3p(scenario.start, scenario, *index, config.vehicle,
                                      config.planner, config.env);
        if (outcome.ok()) {
          rec.used_fallback = outcome.result->used_fallback;
          path = std::move(outcome.result->path);
        } else {
          rec.fail_cause = failure_name(outcome.failure);
        }
      } else {
        PlanOutcome outcome =
            plan(scenario.start, scenario.goal_world(config.vehicle, config.env),
                 scenario.obstacles, config.vehicle, config.planner, variant_for_method(method));
        if (outcome.ok()) {
          path = std::move(outcome.path);
        } else {
          rec.fail_cause = failure_name(outcome.failure);
        }
      }

      if (path) {
        rec.success = true;
        rec.planning_time_s = path->stats.planning_time_s;
        rec.length_m = path->stats.total_length;
        rec.direction_changes = path->stats.direction_changes;
        rec.nodes_expanded = path->stats.nodes_expanded;
        rec.mean_abs_dsteer =
            path->states.size() >= 2 ? steering_variation(*path, config.vehicle) : 0.0;
        if (!spec.out_dir.empty() && si < spec.render_count) {
          const std::string file =
              spec.out_dir + "/render_" + method + "_" + std::to_string(si) + ".svg";
          render_trajectory(scenario, *path, config.vehicle, config.env, file, nullptr);
        }
      }
      records[task] = std::move(rec);
    }
  };

  if (!spec.out_dir.empty()) std::filesystem::create_directories(spec.out_dir);
  const int n_threads = std::max(1, std::min(spec.workers, n_tasks));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  ExperimentResult result;
  result.records = std::move(records);
  for (std::size_t mi = 0; mi < spec.methods.size(); ++mi) {
    const auto begin = result.records.begin() + static_cast<long>(mi) * spec.n;
    result.rows.push_back(compute_metrics(
        spec.methods[mi], std::vector<RunRecord>(begin, begin + spec.n)));
  }

  if (!spec.out_dir.empty()) {
    const auto write = [&](const std::string& name, const std::string& text) {
      const std::string file = spec.out_dir + "/" + name;
      std::ofstream out(file);
      if (!out) throw std::runtime_error("cannot open for writing: " + file);
      out << text;
      if (!out) throw std::runtime_error("write failed: " + file);
    };
    write("metrics.csv", metrics_csv(result.rows));
    write("runs.csv", runs_csv(result.records));
    write("metrics.txt", metrics_table(result.rows));
  }
  return result;
}

std::string metrics_csv(const std::vector<MetricsRow>& rows) {
  std::string out =
      "method,min_t,mean_t,median_t,p95_t,mean_abs_dsteer,mean_length,fail_pct,mean_ndc,max_ndc,"
      "mean_nnode\n";
  for (const MetricsRow& r : rows) {
    out += r.method + ",";
    if (r.successes > 0) {
      out += fmt(r.min_t) + "," + fmt(r.mean_t) + "," + fmt(r.median_t) + "," + fmt(r.p95_t) +
             "," + fmt(r.mean_dsteer) + "," + fmt(r.mean_length) + ",";
    } else {
      out += ",,,,,,";
    }
    out += fmt(r.fail_pct);
    if (r.successes > 0) {
      out += "," + fmt(r.mean_ndc) + "," + std::to_string(r.max_ndc) + "," + fmt(r.mean_nnode);
    } else {
      out += ",,,";
    }
    out += "\n";
  }
  return out;
}

std::string runs_csv(const std::vector<RunRecord>& records) {
  std::string out =
      "method,scenario_index,scenario_seed,outcome,fail_cause,used_fallback,time_s,length_m,"
      "direction_changes,mean_abs_dsteer,nodes_expanded\n";
  for (const RunRecord& r : records) {
    out += r.method + "," + std::to_string(r.scenario_index) + "," +
           std::to_string(r.scenario_seed) + "," + (r.success ? "success" : "fail") + "," +
           r.fail_cause + "," + (r.used_fallback ? "1" : "0") + "," + fmt(r.planning_time_s);
    if (r.success) {
      out += "," + fmt(r.length_m, "%.9g") + "," + std::to_string(r.direction_changes) + "," +
             fmt(r.mean_abs_dsteer, "%.9g") + "," + std::to_string(r.nodes_expanded);
    } else {
      out += ",,,,";
    }
    out += "\n";
  }
  return out;
}

std::string metrics_table(const std::vector<MetricsRow>& rows) {
  std::ostringstream out;
  char line[256];
  std::snprintf(line, sizeof(line), "%-10s %9s %9s %9s %9s %8s %8s %7s %7s %7s %9s\n", "method",
                "min(T)", "mean(T)", "med(T)", "P95(T)", "dsteer", "length", "fail%", "ndc",
                "maxndc", "nodes");
  out << line;
  for (const MetricsRow& r : rows) {
    if (r.successes > 0) {
      std::snprintf(line, sizeof(line),
                    "%-10s %9.4f %9.4f %9.4f %9.4f %8.3f %8.2f %7.1f %7.2f %7d %9.1f\n",
                    r.method.c_str(), r.min_t, r.mean_t, r.median_t, r.p95_t, r.mean_dsteer,
                    r.mean_length, r.fail_pct, r.mean_ndc, r.max_ndc, r.mean_nnode);
    } else {
      std::snprintf(line, sizeof(line), "%-10s %9s %9s %9s %9s %8s %8s %7.1f %7s %7s %9s\n",
                    r.method.c_str(), "-", "-", "-", "-", "-", "-", r.fail_pct, "-", "-", "-");
    }
    out << line;
  }
  return out.str();
}

std::string runs_csv_without_timing(const std::string& csv_text) {
  std::istringstream in(csv_text);
  std::string out, line;
  while (std::getline(in, line)) {
    // Blank the 7th column (time_s).
    std::size_t pos = 0;
    int commas = 0;
    std::size_t begin = std::string::npos, end = std::string::npos;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] != ',') continue;
      ++commas;
      if (commas == 6) begin = i + 1;
      if (commas == 7) {
        end = i;
        break;
      }
    }
    (void)pos;
    if (begin != std::string::npos) {
      out += line.substr(0, begin) + (end == std::string::npos ? "" : line.substr(end));
    } else {
      out += line;
    }
    out += "\n";
  }
  return out;
}

}  // namespace n3p
