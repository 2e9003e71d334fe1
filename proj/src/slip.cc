// Copyright 2026 The Assembly Robustness Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "robustness/slip.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robustness/contact_graph.h"
#include "robustness/errors.h"

namespace robustness {
namespace {

double s_star_of(const Vec3& f, double mu, const Vec3& e) {
  const double E = e.x() * e.x() + e.y() * e.y();
  const double k = mu * mu * e.z() * e.z();
  const double a = e.x() * f.x() + e.y() * f.y();
  const double ft = std::hypot(f.x(), f.y());
  const double projection = ft > 0.0 ? a / ft : std::sqrt(E);
  if (mu * e.z() <= projection) return 0.0;
  if (E < k) return kInfinity;
  if (E - k <= 1e-15 * std::max(1.0, E)) return kInfinity;
  const double cross = e.x() * f.y() - e.y() * f.x();
  const double center = -a / E;
  const double half = mu * std::abs(e.z()) * std::abs(cross) / (E * std::sqrt(E - k));
  double best = kInfinity;
  double best_slope = kInfinity;
  for (double r : {center - half, center + half}) {
    if (r < 0.0) continue;
    const double slope = std::abs(slip_derivative(f, mu, e, r));
    if (slope < best_slope) {
      best_slope = slope;
      best = r;
    }
  }
  return std::isinf(best) ? 0.0 : best;
}

}  // namespace

double contact_condition_at(const Vec3& f, double mu, const Vec3& e, double s) {
  return mu * std::abs(f.z() + s * e.z()) -
         std::hypot(f.x() + s * e.x(), f.y() + s * e.y());
}

double slip_derivative(const Vec3& f, double mu, const Vec3& e, double s) {
  const double gx = f.x() + s * e.x();
  const double gy = f.y() + s * e.y();
  const double g = std::hypot(gx, gy);
  const double fn = f.z() + s * e.z();
  const double normal = mu * e.z() * (fn < 0.0 ? -1.0 : 1.0);
  if (g == 0.0) return normal - std::hypot(e.x(), e.y());
  return normal - (e.x() * gx + e.y() * gy) / g;
}

SlipAnalysis analyze_contact(const Vec3& f, double mu, const Vec3& e) {
  if (std::abs(e.norm() - 1.0) > 1e-9) {
    throw PreconditionError("direction must be a unit vector");
  }
  const double scale = 1.0 + mu * f.norm();
  const double c0 = contact_condition_at(f, mu, e, 0.0);
  if (c0 < -1e-7 * scale) {
    throw PreconditionError("contact force lies outside the friction cone");
  }
  SlipAnalysis out;
  const double E = e.x() * e.x() + e.y() * e.y();
  const double a = e.x() * f.x() + e.y() * f.y();
  out.d = mu * mu * e.z() * e.z() - E;
  const double B = mu * mu * f.z() * e.z() - a;
  const double C = mu * mu * f.z() * f.z() - (f.x() * f.x() + f.y() * f.y());
  const double cross = e.y() * f.x() - e.x() * f.y();
  const double n2 = mu * mu * std::pow(e.z() * f.x() - e.x() * f.z(), 2) +
                    mu * mu * std::pow(e.z() * f.y() - e.y() * f.z(), 2) - cross * cross;
  out.dcds0 = slip_derivative(f, mu, e, 0.0);

  if (std::abs(out.d) < 1e-12) {
    out.n = std::sqrt(std::max(0.0, n2));
    if (B != 0.0) out.s_m = out.s_p = -C / (2.0 * B);
  } else if (n2 >= 0.0) {
    out.n = std::sqrt(n2);
    // Cancellation-free forms of (-B -/+ n) / d.
    if (B < 0.0) {
      out.s_m = C / (out.n - B);
      out.s_p = (out.n - B) / out.d;
    } else {
      out.s_m = (-B - out.n) / out.d;
      out.s_p = out.n + B != 0.0 ? -C / (out.n + B) : (-B + out.n) / out.d;
    }
  } else {
    out.n = std::numeric_limits<double>::quiet_NaN();
  }

  if (C <= 1e-12 * scale * scale) {
    // The point starts on the cone boundary: it slips at once unless the
    // push moves it inwards.
    if (out.dcds0 <= 0.0) {
      out.sr_slip = 0.0;
    } else if (out.d < 0.0 && out.s_m && out.s_p) {
      out.sr_slip = std::max({0.0, *out.s_m, *out.s_p});
    } else {
      out.sr_slip = kInfinity;
    }
  } else {
    out.sr_slip = out.s_m && *out.s_m >= 0.0 ? *out.s_m : kInfinity;
  }
  out.s_star = s_star_of(f, mu, e);
  return out;
}

std::vector<OrientedPoint> oriented_points(const ContactInterface& iface,
                                           std::size_t index,
                                           const ForceSolution& solution,
                                           const Vec3& direction,
                                           bool downstream_is_b) {
  std::vector<OrientedPoint> out;
  const Mat3 flip = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  for (std::size_t k = 0; k < iface.points.size(); ++k) {
    const ContactPoint& cp = iface.points[k];
    const Vec3 f = solution.at(index, k).local();
    OrientedPoint p;
    p.mu = iface.mu;
    if (downstream_is_b) {
      p.force = f;
      p.direction = cp.frame.transpose() * direction;
    } else {
      // Frame of body_a: same tangent u, normal and v reversed.
      p.force = -(flip * f);
      p.direction = (cp.frame * flip).transpose() * direction;
    }
    out.push_back(p);
  }
  return out;
}

double interface_capacity(const ContactInterface& iface, std::size_t index,
                          const ForceSolution& solution, const Vec3& direction,
                          bool downstream_is_b) {
  double total = 0.0;
  for (const OrientedPoint& p :
       oriented_points(iface, index, solution, direction, downstream_is_b)) {
    total += analyze_contact(p.force, p.mu, p.direction).sr_slip;
  }
  return total;
}

SlipMaximizer global_slip_maximizer(
    const std::vector<std::vector<OrientedPoint>>& interfaces) {
  std::vector<double> candidates = {0.0};
  double slope = 0.0;
  for (const auto& iface : interfaces) {
    for (const OrientedPoint& p : iface) {
      const SlipAnalysis a = analyze_contact(p.force, p.mu, p.direction);
      candidates.push_back(std::min(a.sr_slip, a.s_star));
      slope += p.mu * std::abs(p.direction.z()) -
               std::hypot(p.direction.x(), p.direction.y());
    }
  }
  auto total = [&](double s) {
    double sum = 0.0;
    for (const auto& iface : interfaces) {
      for (const OrientedPoint& p : iface) {
        sum += contact_condition_at(p.force, p.mu, p.direction, s);
      }
    }
    return sum;
  };
  SlipMaximizer best{0.0, total(0.0), false};
  for (double s : candidates) {
    if (std::isinf(s)) {
      if (slope > 1e-12) return {kInfinity, kInfinity, true};
      continue;
    }
    const double v = total(s);
    if (v > best.value) best = {s, v, false};
  }
  return best;
}

}  // namespace robustness
