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
//
// Shortest-path word solvers for a bidirectional bounded-curvature vehicle.
// All base forms are solved in a normalized frame (unit turning radius,
// start at the origin); the remaining candidates follow from time-flip,
// reflection and word-reversal symmetries. Every candidate is re-integrated
// before it is accepted, so words whose solved parameters violate their
// domain constraints are discarded rather than repaired.

#include "n3p/reeds_shepp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace n3p {

namespace {

constexpr double kZero = 1e-10;
constexpr double kVerifyTol = 1e-6;

struct Word {
  std::array<SegKind, 5> letters{};
  std::array<double, 5> params{};
  int n = 0;

  double length() const {
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += std::abs(params[i]);
    return sum;
  }
};

Word make_word(std::initializer_list<SegKind> letters, std::initializer_list<double> params) {
  Word w;
  w.n = static_cast<int>(letters.size());
  std::copy(letters.begin(), letters.end(), w.letters.begin());
  std::copy(params.begin(), params.end(), w.params.begin());
  return w;
}

Word negated(Word w) {
  for (int i = 0; i < w.n; ++i) w.params[i] = -w.params[i];
  return w;
}

Word mirrored(Word w) {
  for (int i = 0; i < w.n; ++i) {
    if (w.letters[i] == SegKind::left) {
      w.letters[i] = SegKind::right;
    } else if (w.letters[i] == SegKind::right) {
      w.letters[i] = SegKind::left;
    }
  }
  return w;
}

Word reversed(Word w) {
  Word out = w;
  for (int i = 0; i < w.n; ++i) {
    out.letters[i] = w.letters[w.n - 1 - i];
    out.params[i] = w.params[w.n - 1 - i];
  }
  return out;
}

void polar(double x, double y, double& r, double& theta) {
  r = std::hypot(x, y);
  theta = std::atan2(y, x);
}

// --- base form solvers, unit turning radius -------------------------------

bool lp_sp_lp(double x, double y, double phi, double& t, double& u, double& v) {
  polar(x - std::sin(phi), y - 1.0 + std::cos(phi), u, t);
  if (t >= -kZero) {
    v = wrap_angle(phi - t);
    if (v >= -kZero) return true;
  }
  return false;
}

bool lp_sp_rp(double x, double y, double phi, double& t, double& u, double& v) {
  double u1, t1;
  polar(x + std::sin(phi), y - 1.0 - std::cos(phi), u1, t1);
  if (u1 * u1 < 4.0) return false;
  u = std::sqrt(u1 * u1 - 4.0);
  t = wrap_angle(t1 + std::atan2(2.0, u));
  v = wrap_angle(t - phi);
  return t >= -kZero && v >= -kZero;
}

bool lp_rm_l(double x, double y, double phi, double& t, double& u, double& v) {
  double u1, theta;
  polar(x - std::sin(phi), y - 1.0 + std::cos(phi), u1, theta);
  if (u1 > 4.0) return false;
  u = -2.0 * std::asin(std::clamp(0.25 * u1, -1.0, 1.0));
  t = wrap_angle(theta + 0.5 * u + kPi);
  v = wrap_angle(phi - t + u);
  return t >= -kZero && u <= kZero;
}

void tau_omega(double u, double v, double xi, double eta, double phi, double& tau,
               double& omega) {
  const double delta = wrap_angle(u - v);
  const double a = std::sin(u) - std::sin(delta);
  const double b = std::cos(u) - std::cos(delta) - 1.0;
  const double t1 = std::atan2(eta * a - xi * b, xi * a + eta * b);
  const double t2 = 2.0 * (std::cos(delta) - std::cos(v) - std::cos(u)) + 3.0;
  tau = (t2 < 0.0) ? wrap_angle(t1 + kPi) : wrap_angle(t1);
  omega = wrap_angle(tau - u + v - phi);
}

bool lp_rup_lum_rm(double x, double y, double phi, double& t, double& u, double& v) {
  const double xi = x + std::sin(phi);
  const double eta = y - 1.0 - std::cos(phi);
  const double rho = 0.25 * (2.0 + std::hypot(xi, eta));
  if (rho > 1.0) return false;
  u = std::acos(std::clamp(rho, -1.0, 1.0));
  tau_omega(u, -u, xi, eta, phi, t, v);
  return t >= -kZero && v <= kZero;
}

bool lp_rum_lum_rp(double x, double y, double phi, double& t, double& u, double& v) {
  const double xi = x + std::sin(phi);
  const double eta = y - 1.0 - std::cos(phi);
  const double rho = (20.0 - xi * xi - eta * eta) / 16.0;
  if (rho < 0.0 || rho > 1.0) return false;
  u = -std::acos(std::clamp(rho, -1.0, 1.0));
  if (u < -0.5 * kPi) return false;
  tau_omega(u, u, xi, eta, phi, t, v);
  return t >= -kZero && v >= -kZero;
}

bool lp_rm_sm_lm(double x, double y, double phi, double& t, double& u, double& v) {
  double rho, theta;
  polar(x - std::sin(phi), y - 1.0 + std::cos(phi), rho, theta);
  if (rho < 2.0) return false;
  const double r = std::sqrt(rho * rho - 4.0);
  u = 2.0 - r;
  t = wrap_angle(theta + std::atan2(r, -2.0));
  v = wrap_angle(phi - 0.5 * kPi - t);
  return t >= -kZero && u <= kZero && v <= kZero;
}

bool lp_rm_sm_rm(double x, double y, double phi, double& t, double& u, double& v) {
  const double xi = x + std::sin(phi);
  const double eta = y - 1.0 - std::cos(phi);
  double rho, theta;
  polar(-eta, xi, rho, theta);
  if (rho < 2.0) return false;
  t = theta;
  u = 2.0 - rho;
  v = wrap_angle(t + 0.5 * kPi - phi);
  return t >= -kZero && u <= kZero && v <= kZero;
}

bool lp_rm_s_lm_rp(double x, double y, double phi, double& t, double& u, double& v) {
  const double xi = x + std::sin(phi);
  const double eta = y - 1.0 - std::cos(phi);
  double rho, theta;
  polar(xi, eta, rho, theta);
  if (rho < 2.0) return false;
  u = 4.0 - std::sqrt(rho * rho - 4.0);
  if (u > kZero) return false;
  t = wrap_angle(std::atan2((4.0 - u) * xi - 2.0 * eta, -2.0 * xi + (u - 4.0) * eta));
  v = wrap_angle(t - phi);
  return t >= -kZero && v >= -kZero;
}

// --- candidate enumeration -------------------------------------------------

using SolveFn = bool (*)(double, double, double, double&, double&, double&);
using BuildFn = Word (*)(double, double, double);

struct Enumerator {
  double x, y, phi;
  std::vector<Word>& out;

  void family(SolveFn solve, BuildFn build, bool with_backwards) {
    double t, u, v;
    if (solve(x, y, phi, t, u, v)) out.push_back(build(t, u, v));
    if (solve(-x, y, -phi, t, u, v)) out.push_back(negated(build(t, u, v)));
    if (solve(x, -y, -phi, t, u, v)) out.push_back(mirrored(build(t, u, v)));
    if (solve(-x, -y, phi, t, u, v)) out.push_back(mirrored(negated(build(t, u, v))));
    if (!with_backwards) return;
    const double xb = x * std::cos(phi) + y * std::sin(phi);
    const double yb = x * std::sin(phi) - y * std::cos(phi);
    if (solve(xb, yb, phi, t, u, v)) out.push_back(reversed(build(t, u, v)));
    if (solve(-xb, yb, -phi, t, u, v)) out.push_back(reversed(negated(build(t, u, v))));
    if (solve(xb, -yb, -phi, t, u, v)) out.push_back(reversed(mirrored(build(t, u, v))));
    if (solve(-xb, -yb, phi, t, u, v))
      out.push_back(reversed(mirrored(negated(build(t, u, v)))));
  }
};

constexpr SegKind L = SegKind::left;
constexpr SegKind R = SegKind::right;
constexpr SegKind S = SegKind::straight;

std::vector<Word> enumerate_words(double x, double y, double phi) {
  std::vector<Word> words;
  words.reserve(48);
  Enumerator e{x, y, phi, words};
  e.family(lp_sp_lp, [](double t, double u, double v) { return make_word({L, S, L}, {t, u, v}); },
           false);
  e.family(lp_sp_rp, [](double t, double u, double v) { return make_word({L, S, R}, {t, u, v}); },
           false);
  e.family(lp_rm_l, [](double t, double u, double v) { return make_word({L, R, L}, {t, u, v}); },
           true);
  e.family(lp_rup_lum_rm,
           [](double t, double u, double v) { return make_word({L, R, L, R}, {t, u, -u, v}); },
           false);
  e.family(lp_rum_lum_rp,
           [](double t, double u, double v) { return make_word({L, R, L, R}, {t, u, u, v}); },
           false);
  e.family(lp_rm_sm_lm,
           [](double t, double u, double v) {
             return make_word({L, R, S, L}, {t, -0.5 * kPi, u, v});
           },
           true);
  e.family(lp_rm_sm_rm,
           [](double t, double u, double v) {
             return make_word({L, R, S, R}, {t, -0.5 * kPi, u, v});
           },
           true);
  e.family(lp_rm_s_lm_rp,
           [](double t, double u, double v) {
             return make_word({L, R, S, L, R}, {t, -0.5 * kPi, u, -0.5 * kPi, v});
           },
           false);
  return words;
}

Pose replay_word(const Word& w) {
  Pose p(0.0, 0.0, 0.0);
  for (int i = 0; i < w.n; ++i) {
    double curv = 0.0;
    if (w.letters[i] == SegKind::left) curv = 1.0;
    if (w.letters[i] == SegKind::right) curv = -1.0;
    p = integrate_constant_curvature(p, curv, w.params[i]);
  }
  return p;
}

bool word_reaches(const Word& w, double x, double y, double phi) {
  const Pose end = replay_word(w);
  return std::abs(end.x - x) < kVerifyTol && std::abs(end.y - y) < kVerifyTol &&
         std::abs(angle_diff(end.theta, phi)) < kVerifyTol;
}

RSPath word_to_path(const Word& w, double kappa) {
  RSPath path;
  path.kappa = kappa;
  for (int i = 0; i < w.n; ++i) {
    const double p = w.params[i];
    if (std::abs(p) < kZero) continue;
    path.segments.push_back(RSSegment{w.letters[i], std::abs(p) / kappa,
                                      p > 0.0 ? Gear::forward : Gear::reverse});
    path.total_length += std::abs(p) / kappa;
  }
  return path;
}

}  // namespace

int RSPath::direction_changes() const {
  int flips = 0;
  for (std::size_t i = 1; i < segments.size(); ++i) {
    if (segments[i].direction != segments[i - 1].direction) ++flips;
  }
  return flips;
}

Pose RSPath::endpoint(const Pose& start) const {
  Pose p = start;
  for (const RSSegment& seg : segments) {
    p = integrate_constant_curvature(p, seg.curvature(kappa), seg.signed_length());
  }
  return p;
}

std::vector<RSPath> rs_candidates(const Pose& start, const Pose& goal, double kappa) {
  const Pose rel = to_frame(goal, start);
  const double x = rel.x * kappa;
  const double y = rel.y * kappa;
  const double phi = rel.theta;

  std::vector<RSPath> candidates;
  if (std::abs(x) < kZero && std::abs(y) < kZero && std::abs(phi) < kZero) {
    RSPath zero;
    zero.kappa = kappa;
    candidates.push_back(zero);
    return candidates;
  }
  for (const Word& w : enumerate_words(x, y, phi)) {
    if (!word_reaches(w, x, y, phi)) continue;
    candidates.push_back(word_to_path(w, kappa));
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const RSPath& a, const RSPath& b) { return a.total_length < b.total_length; });
  return candidates;
}

RSPath rs_shortest(const Pose& start, const Pose& goal, double kappa) {
  std::vector<RSPath> candidates = rs_candidates(start, goal, kappa);
  // A valid word always exists in the obstacle-free plane.
  return candidates.front();
}

std::vector<std::pair<Pose, Gear>> rs_sample(const RSPath& path, const Pose& start, double ds) {
  std::vector<std::pair<Pose, Gear>> out;
  Gear first = path.segments.empty() ? Gear::forward : path.segments.front().direction;
  out.emplace_back(start, first);
  Pose p = start;
  for (const RSSegment& seg : path.segments) {
    if (seg.length < kZero) continue;
    const int steps = std::max(1, static_cast<int>(std::ceil(seg.length / ds - 1e-9)));
    const double step = seg.length / steps;
    const double curv = seg.curvature(path.kappa);
    const double sgn = gear_sign(seg.direction);
    for (int i = 0; i < steps; ++i) {
      p = integrate_constant_curvature(p, curv, sgn * step);
      out.emplace_back(p, seg.direction);
    }
  }
  return out;
}

std::optional<RSPath> rs_connect(const Pose& start, const Pose& goal, double kappa,
                                 const CollisionChecker& checker, double ds_check) {
  for (const RSPath& cand : rs_candidates(start, goal, kappa)) {
    bool clear = true;
    for (const auto& [pose, gear] : rs_sample(cand, start, ds_check)) {
      (void)gear;
      if (checker.pose_in_collision(pose)) {
        clear = false;
        break;
      }
    }
    if (clear) return cand;
  }
  return std::nullopt;
}

std::optional<RSPath> rs_connect(const Pose& start, const Pose& goal, double kappa,
                                 const VehicleSpec& spec, const ObstacleCloud& obstacles,
                                 double ds_check) {
  CollisionChecker checker(obstacles, spec);
  return rs_connect(start, goal, kappa, checker, ds_check);
}

}  // namespace n3p
