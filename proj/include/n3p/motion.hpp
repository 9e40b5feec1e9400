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

#include "n3p/geometry.hpp"

namespace n3p {

enum class Gear : int8_t { forward = 1, reverse = -1 };

inline double gear_sign(Gear g) { return g == Gear::forward ? 1.0 : -1.0; }

/// Exact kinematic-bicycle step at constant curvature.
///
/// Integrates dx = v cos(theta), dy = v sin(theta), dtheta = v * curvature
/// over signed arc length `s` (negative s drives in reverse). The curvature
/// for a steering angle delta is tan(delta) / wheelbase.
inline Pose integrate_constant_curvature(const Pose& p, double curvature, double s) {
  if (std::abs(curvature) < 1e-12) {
    return Pose(p.x + s * std::cos(p.theta), p.y + s * std::sin(p.theta), p.theta);
  }
  const double theta1 = p.theta + s * curvature;
  return Pose(p.x + (std::sin(theta1) - std::sin(p.theta)) / curvature,
              p.y - (std::cos(theta1) - std::cos(p.theta)) / curvature, theta1);
}

inline double curvature_for_steer(const VehicleSpec& spec, double steer) {
  return std::tan(steer) / spec.wheelbase;
}

/// One motion step of a vehicle: constant steering over a signed arc length.
inline Pose integrate_steer(const VehicleSpec& spec, const Pose& p, double steer, Gear gear,
                            double arc_length) {
  return integrate_constant_curvature(p, curvature_for_steer(spec, steer),
                                      gear_sign(gear) * arc_length);
}

}  // namespace n3p
