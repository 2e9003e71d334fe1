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

#ifndef ROBUSTNESS_EQUILIBRIUM_H_
#define ROBUSTNESS_EQUILIBRIUM_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "robustness/contacts.h"
#include "robustness/geometry.h"
#include "robustness/scene.h"

namespace robustness {

enum class SolveMode { kRelaxed, kFull };
enum class Stability { kStable, kUnstable };

struct SolverConfig {
  int polygon_sides = 8;
  SolveMode mode = SolveMode::kRelaxed;
  int max_iters = 50;
  double tol_force = 1e-7;
  double epsilon = 1e-5;  // admissible interpenetration of loaded contacts
};

// Contact force in the contact frame, exerted by body_a on body_b.
struct ContactForce {
  double fu = 0.0;
  double fv = 0.0;
  double fn = 0.0;
  double contact_condition = 0.0;

  Vec3 local() const { return {fu, fv, fn}; }
};

struct VirtualTwist {
  Vec3 linear = Vec3::Zero();
  Vec3 angular = Vec3::Zero();
};

struct ForceSolution {
  // Indexed like the interfaces and their points.
  std::vector<std::vector<ContactForce>> forces;
  std::vector<std::vector<double>> stiffness;
  std::map<std::string, VirtualTwist> twists;
  double objective = 0.0;
  SolveMode mode = SolveMode::kRelaxed;
  Stability status = Stability::kUnstable;
  int iterations = 0;
  // Smallest L1 equilibrium violation achievable under the friction limits.
  double infeasibility = 0.0;

  bool stable() const { return status == Stability::kStable; }
  // Throws PreconditionError when the entry does not exist.
  const ContactForce& at(std::size_t interface, std::size_t point) const;
};

// Contact condition mu * |f_n| - ||f_t||.
double contact_condition(const Vec3& f, double mu);

// Rows [cos(2 pi k/N), sin(2 pi k/N), -mu cos(pi/N)] of the inscribed polygon.
Eigen::MatrixXd friction_polygon(int sides, double mu);

// Area of the polygon cut out by friction_polygon over the area of the cone
// cross-section.
double polygon_coverage(int sides);

ForceSolution solve_forces(const Scene& scene,
                           const std::vector<ContactInterface>& interfaces,
                           const SolverConfig& config = {});

// Norm of the net wrench (contact forces plus gravity) on every body, in scene
// order. Fixed bodies report 0.
std::vector<double> equilibrium_residuals(
    const Scene& scene, const std::vector<ContactInterface>& interfaces,
    const ForceSolution& solution);

// Relative displacements of all contact points, in their contact frames,
// induced by the given body twists.
std::vector<Vec3> contact_displacements(
    const Scene& scene, const std::vector<ContactInterface>& interfaces,
    const std::map<std::string, VirtualTwist>& twists);

}  // namespace robustness

#endif  // ROBUSTNESS_EQUILIBRIUM_H_
