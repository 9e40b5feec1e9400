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

#include "n3p/environment.hpp"
#include "n3p/hybrid_astar.hpp"
#include "n3p/selector.hpp"

namespace n3p {

struct StageBreakdown {
  double abstraction_s = 0.0;
  double predict_s = 0.0;
  int approach_nodes = 0;
  double approach_s = 0.0;
  int parking_nodes = 0;
  double parking_s = 0.0;
};

struct N3PResult {
  PlannedPath path;  // world frame
  StageBreakdown stages;
  bool used_fallback = false;
  std::optional<Pose> g_pre_world;
  std::optional<EnvAbstraction> measured;
  std::optional<EnvAbstraction> matched;  // quantized configuration fed to the selector
};

struct N3POutcome {
  std::optional<N3PResult> result;
  PlanFailure failure = PlanFailure::none;

  bool ok() const { return result.has_value(); }
};

class JunctionMismatch : public std::runtime_error {
 public:
  JunctionMismatch() : std::runtime_error("path junction poses disagree") {}
};

/// Merge an approach path with a parking path whose first pose coincides
/// with the approach's final pose (within 1e-6); the duplicate junction
/// state is dropped and direction changes are recounted across it.
PlannedPath concatenate(const PlannedPath& approach, const PlannedPath& parking);

/// Three-stage online planning: abstract the local scene, match it to the
/// nearest trained configuration, predict the preparatory pose, plan the
/// approach to it and connect it to the goal with the RS-augmented search.
/// Both stages plan against the full obstacle cloud. Any stage failure
/// reverts to direct RS-augmented planning (used_fallback set).
N3POutcome plan_n3p(const Pose& start_world, const Scenario& scenario, const KnnIndex& index,
                    const VehicleSpec& spec, const PlannerConfig& cfg, const EnvGeometry& geom);

}  // namespace n3p
