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

#ifndef ROBUSTNESS_SLIP_H_
#define ROBUSTNESS_SLIP_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "robustness/contacts.h"
#include "robustness/equilibrium.h"
#include "robustness/geometry.h"

namespace robustness {

// Slip analysis of one contact point under an added force s * e, with f and e
// expressed in the contact frame of the body receiving them.
struct SlipAnalysis {
  std::optional<double> s_m;  // roots of c(s) = 0, when real
  std::optional<double> s_p;
  double d = 0.0;      // mu^2 e_n^2 - |e_t|^2
  double n = 0.0;      // square root of the discriminant (NaN when complex)
  double dcds0 = 0.0;  // dc/ds at s = 0
  double sr_slip = 0.0;
  double s_star = 0.0;  // magnitude maximizing c
};

// c(s) = mu |f_n + s e_n| - |f_t + s e_t|.
double contact_condition_at(const Vec3& f, double mu, const Vec3& e, double s);

// dc/ds; where the tangential force vanishes the right-hand limit
// mu e_n - |e_t| is returned.
double slip_derivative(const Vec3& f, double mu, const Vec3& e, double s);

// Throws PreconditionError for a non-unit direction or a force that already
// violates the friction cone.
SlipAnalysis analyze_contact(const Vec3& f, double mu, const Vec3& e);
inline SlipAnalysis analyze_contact(const ContactForce& f, double mu, const Vec3& e) {
  return analyze_contact(f.local(), mu, e);
}

inline double slip_improvement(const Vec3& f, double mu, const Vec3& e, double s_eval) {
  return slip_derivative(f, mu, e, s_eval);
}

// Force and direction of one point seen from the body downstream of the
// interface (the one the pushed body leans on is upstream).
struct OrientedPoint {
  Vec3 force = Vec3::Zero();
  Vec3 direction = Vec3::Zero();
  double mu = 0.0;
};

std::vector<OrientedPoint> oriented_points(const ContactInterface& iface,
                                           std::size_t index,
                                           const ForceSolution& solution,
                                           const Vec3& direction,
                                           bool downstream_is_b = true);

// Sum of the per-point slip robustnesses; +inf when any point is unbounded.
double interface_capacity(const ContactInterface& iface, std::size_t index,
                          const ForceSolution& solution, const Vec3& direction,
                          bool downstream_is_b = true);

struct SlipMaximizer {
  double s = 0.0;
  double value = 0.0;  // summed contact condition at s
  bool unbounded = false;
};

// Maximizes the summed contact condition over the candidate magnitudes
// min(sr_slip, s_star) of every point.
SlipMaximizer global_slip_maximizer(
    const std::vector<std::vector<OrientedPoint>>& interfaces);

}  // namespace robustness

#endif  // ROBUSTNESS_SLIP_H_
