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

#ifndef ROBUSTNESS_PLACEMENT_H_
#define ROBUSTNESS_PLACEMENT_H_

#include <optional>
#include <string>
#include <vector>

#include "robustness/geometry.h"
#include "robustness/robustness_map.h"
#include "robustness/scene.h"

namespace robustness {

// x -> rotation * x + translation, applied in world coordinates.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 operator()(const Vec3& p) const { return rotation * p + translation; }
  // Pose of an object after moving it by this transform.
  Pose apply(const Pose& pose) const;
};

// Proper rotation and translation minimizing sum |R B_i + t - S_i|^2. Throws
// PreconditionError for mismatched sizes, fewer than three points or a
// collinear B.
RigidTransform kabsch_align(const std::vector<Vec3>& B, const std::vector<Vec3>& S);

struct PlacementConfig {
  double M = 0.1;  // perturbation magnitude, m
  int K = 15;      // nearest map samples considered per contact point
  std::optional<double> D;  // correspondence distance, m; twice the map spacing when unset
  int max_iters = 50;
  double tol_translation = 1e-4;  // m
  double tol_rotation = 1e-3;     // rad
  // Minimum dot product between a scene normal and the opposing object normal
  // for a pair of surface points to correspond.
  double normal_gate = 0.95;
  // Pitch of the object samples used to re-align it to the scene; the map
  // spacing when unset.
  std::optional<double> object_spacing;
};

struct PlacementState {
  RigidBody object;              // the payload, posed in the world
  std::vector<Vec3> contact_set;  // perturbed object contact points, world
  std::vector<Vec3> scene_set;    // matched map points
  int iteration = 0;
  bool converged = false;
};

struct IpaTraceRow {
  int iteration = 0;
  Pose pose;
  std::size_t contacts = 0;
  double mean_sri = 0.0;
  double step_translation = 0.0;  // m
  double step_rotation = 0.0;     // rad
};

struct IpaResult {
  PlacementState state;
  std::vector<IpaTraceRow> trace;
  double initial_mean_sri = 0.0;
  double final_mean_sri = 0.0;
};

// Contact points between the object and the scene bodies, with the scene's
// outward normal at each, for gaps up to `max_gap`.
struct ObjectContact {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
};
std::vector<ObjectContact> object_contacts(const Scene& scene, const RigidBody& object,
                                           double max_gap);

// Index of the sample with the largest SRI among the K nearest samples whose
// normal agrees with `normal`; lowest index on ties. Nothing when no sample
// qualifies.
std::optional<std::size_t> best_nearby_sample(const RobustnessMap& map, const Vec3& point,
                                              const Vec3& normal, int K,
                                              double normal_gate);

// SRI of the nearest compatible map sample, averaged over the object's
// contact points. Throws PreconditionError("placement lost contact") when the
// object has no contact within `max_gap`.
double mean_contact_sri(const Scene& scene, const RobustnessMap& map,
                        const RigidBody& object, double max_gap,
                        double normal_gate = 0.95);

// The scene with the object appended.
Scene with_object(const Scene& scene, const RigidBody& object);

// Iterative Perturb and Align. The map must describe `scene` without the
// object. Throws PreconditionError("placement lost contact") when the object
// has no contact within D at some iteration.
IpaResult ipa_refine(const Scene& scene, const RobustnessMap& map, PlacementState state,
                     const PlacementConfig& config = {});

// Header iteration,x,y,z,qw,qx,qy,qz,contacts,mean_sri,step_translation,step_rotation.
std::string trace_to_csv(const std::vector<IpaTraceRow>& trace);

}  // namespace robustness

#endif  // ROBUSTNESS_PLACEMENT_H_
