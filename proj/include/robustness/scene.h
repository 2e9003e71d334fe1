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

#ifndef ROBUSTNESS_SCENE_H_
#define ROBUSTNESS_SCENE_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "robustness/geometry.h"

namespace robustness {

// Shape as written in the scene document, kept for round-tripping.
struct ShapeSpec {
  enum class Type { kBox, kHull };
  Type type = Type::kBox;
  Vec3 half_extents = Vec3::Zero();
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;
};

struct RigidBody {
  std::string id;
  ShapeSpec shape_spec;
  ConvexPolyhedron shape;  // body frame
  Pose pose;
  double mass = 0.0;
  Vec3 com = Vec3::Zero();  // body frame
  bool fixed = false;
  double mu = 0.5;

  Vec3 world_com() const { return pose * com; }
  ConvexPolyhedron world_shape() const { return shape.transformed(pose); }
};

struct FrictionOverride {
  std::string a;
  std::string b;
  double mu = 0.0;
};

struct Scene {
  std::vector<RigidBody> bodies;
  std::vector<FrictionOverride> friction_overrides;
  Vec3 gravity{0.0, 0.0, -9.81};

  // Index of the body with the given id. Throws PreconditionError if absent.
  std::size_t index_of(std::string_view id) const;
  const RigidBody& body(std::string_view id) const {
    return bodies[index_of(id)];
  }
};

Scene load_scene(std::string_view document);
Scene load_scene_file(const std::string& path);

// Parses one body object. `path` prefixes field names in error messages.
RigidBody parse_body(const nlohmann::json& j, const std::string& path);

nlohmann::json body_to_json(const RigidBody& body);
nlohmann::json scene_to_json(const Scene& scene);
std::string serialize_scene(const Scene& scene);

// Throws ValidationError naming the first violated invariant.
void validate_scene(const Scene& scene);

// Pairwise override if present, else the smaller per-body default.
double friction_for(const Scene& scene, std::string_view a, std::string_view b);

// FNV-1a hash of the serialized scene.
std::uint64_t scene_fingerprint(const Scene& scene);

}  // namespace robustness

#endif  // ROBUSTNESS_SCENE_H_
