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
#include <utility>
#include <vector>

#include "n3p/geometry.hpp"
#include "n3p/motion.hpp"

namespace n3p {

enum class SegKind : int8_t { straight = 0, left = 1, right = 2 };

/// One Reeds-Shepp segment: a straight or a maximum-curvature arc, driven
/// forward or in reverse. `length` is arc length in meters, always >= 0.
struct RSSegment {
  SegKind kind;
  double length;
  Gear direction;

  double signed_length() const { return gear_sign(direction) * length; }
  double curvature(double kappa) const {
    switch (kind) {
      case SegKind::left: return kappa;
      case SegKind::right: return -kappa;
      default: return 0.0;
    }
  }
};

/// A typed Reeds-Shepp word with at most five segments.
struct RSPath {
  std::vector<RSSegment> segments;
  double kappa = 0.0;
  double total_length = 0.0;

  bool empty() const { return segments.empty(); }

  /// Number of forward/reverse flips between consecutive segments.
  int direction_changes() const;

  /// Endpoint reached by replaying the segments from `start`.
  Pose endpoint(const Pose& start) const;
};

/// Shortest bounded-curvature bidirectional path between two poses.
///
/// Enumerates the full classical word families (base forms under time-flip,
/// reflection and reversal) in the start-centered canonical frame and returns
/// the minimum-total-length candidate; ties break by enumeration order.
RSPath rs_shortest(const Pose& start, const Pose& goal, double kappa);

/// All valid candidate words sorted ascending by total length (stable).
std::vector<RSPath> rs_candidates(const Pose& start, const Pose& goal, double kappa);

/// Poses sampled every `ds` of arc length, endpoints of each segment
/// included, each carrying the gear of the segment it lies on.
std::vector<std::pair<Pose, Gear>> rs_sample(const RSPath& path, const Pose& start, double ds);

/// Shortest collision-free candidate, or nullopt when every candidate's
/// sampled trajectory collides. Candidates are checked in ascending length
/// order at the `ds_check` sampling resolution.
std::optional<RSPath> rs_connect(const Pose& start, const Pose& goal, double kappa,
                                 const CollisionChecker& checker, double ds_check);

/// Convenience overload building a transient checker over `obstacles`.
std::optional<RSPath> rs_connect(const Pose& start, const Pose& goal, double kappa,
                                 const VehicleSpec& spec, const ObstacleCloud& obstacles,
                                 double ds_check = 0.1);

}  // namespace n3p
