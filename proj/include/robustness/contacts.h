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

#ifndef ROBUSTNESS_CONTACTS_H_
#define ROBUSTNESS_CONTACTS_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "robustness/geometry.h"
#include "robustness/scene.h"

namespace robustness {

struct ContactPoint {
  Vec3 position = Vec3::Zero();
  // Local-to-world rotation; column 2 is the normal pointing into body_b.
  Mat3 frame = Mat3::Identity();
  std::size_t interface_id = 0;

  Vec3 normal() const { return frame.col(2); }
};

// Contact between body_a and body_b. Forces on the points are exerted by
// body_a on body_b. When one side is fixed it is body_a.
struct ContactInterface {
  std::string body_a;
  std::string body_b;
  std::vector<ContactPoint> points;
  double mu = 0.0;
};

struct DetectionConfig {
  double tol_gap = 1e-4;
  double tol_angle = 1e-3;
};

// Contact manifold between two convex shapes, with the normal pointing from
// `a` into `b`. `separation` is negative when the shapes overlap.
struct Manifold {
  Vec3 normal = Vec3::UnitZ();
  double separation = 0.0;
  std::vector<Vec3> points;
};

// Returns nothing when the shapes are farther apart than tol_gap.
std::optional<Manifold> contact_manifold(const ConvexPolyhedron& a,
                                         const ConvexPolyhedron& b,
                                         double tol_gap, double tol_angle);

// Interfaces ordered by body index pair. Throws ValidationError when two
// bodies overlap by more than 10 * tol_gap.
std::vector<ContactInterface> detect_contacts(const Scene& scene,
                                              const DetectionConfig& config = {});

}  // namespace robustness

#endif  // ROBUSTNESS_CONTACTS_H_
