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

#include "robustness/scene.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "robustness/errors.h"

namespace robustness {
namespace {

using nlohmann::json;

const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(path + "." + key + ": missing required field");
  }
  return j.at(key);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) throw ParseError(path + ": expected a number");
  return j.get<double>();
}

Vec3 as_vec3(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 3) {
    throw ParseError(path + ": expected an array of 3 numbers");
  }
  return {as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]"),
          as_number(j[2], path + "[2]")};
}

json vec_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

ShapeSpec parse_shape(const json& j, const std::string& path) {
  ShapeSpec spec;
  const json& type = require(j, "type", path);
  if (!type.is_string()) throw ParseError(path + ".type: expected a string");
  const std::string t = type.get<std::string>();
  if (t == "box") {
    spec.type = ShapeSpec::Type::kBox;
    spec.half_extents = as_vec3(require(j, "half_extents", path), path + ".half_extents");
  } else if (t == "hull") {
    spec.type = ShapeSpec::Type::kHull;
    const json& verts = require(j, "vertices", path);
    if (!verts.is_array()) throw ParseError(path + ".vertices: expected an array");
    for (std::size_t i = 0; i < verts.size(); ++i) {
      spec.vertices.push_back(
          as_vec3(verts[i], path + ".vertices[" + std::to_string(i) + "]"));
    }
    if (j.contains("faces")) {
      const json& faces = j.at("faces");
      if (!faces.is_array()) throw ParseError(path + ".faces: expected an array");
      for (std::size_t i = 0; i < faces.size(); ++i) {
        const std::string fp = path + ".faces[" + std::to_string(i) + "]";
        if (!faces[i].is_array()) throw ParseError(fp + ": expected an array");
        std::vector<int> face;
        for (const json& idx : faces[i]) {
          if (!idx.is_number_integer()) throw ParseError(fp + ": expected integers");
          face.push_back(idx.get<int>());
        }
        spec.faces.push_back(std::move(face));
      }
    }
  } else {
    throw ParseError(path + ".type: unknown shape type '" + t + "'");
  }
  return spec;
}

ConvexPolyhedron build_shape(const ShapeSpec& spec, const std::string& path) {
  try {
    if (spec.type == ShapeSpec::Type::kBox) {
      if ((spec.half_extents.array() <= 0.0).any()) {
        throw ValidationError("half extents must be positive");
      }
      return ConvexPolyhedron::box(spec.half_extents);
    }
    if (!spec.faces.empty()) {
      return ConvexPolyhedron::from_mesh(spec.vertices, spec.faces);
    }
    return ConvexPolyhedron::hull(spec.vertices);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

std::size_t line_of(std::string_view doc, std::size_t byte) {
  byte = std::min(byte, doc.size());
  return 1 + static_cast<std::size_t>(
                 std::count(doc.begin(), doc.begin() + static_cast<long>(byte), '\n'));
}

}  // namespace

std::size_t Scene::index_of(std::string_view id) const {
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    if (bodies[i].id == id) return i;
  }
  throw PreconditionError("unknown body id '" + std::string(id) + "'");
}

RigidBody parse_body(const json& j, const std::string& path) {
  if (!j.is_object()) throw ParseError(path + ": expected an object");
  RigidBody body;
  const json& id = require(j, "id", path);
  if (!id.is_string()) throw ParseError(path + ".id: expected a string");
  body.id = id.get<std::string>();
  body.shape_spec = parse_shape(require(j, "shape", path), path + ".shape");
  body.shape = build_shape(body.shape_spec, path + ".shape");

  if (j.contains("pose")) {
    const json& pose = j.at("pose");
    if (pose.contains("translation")) {
      body.pose.translation = as_vec3(pose.at("translation"), path + ".pose.translation");
    }
    if (pose.contains("quaternion")) {
      const json& q = pose.at("quaternion");
      const std::string qp = path + ".pose.quaternion";
      if (!q.is_array() || q.size() != 4) {
        throw ParseError(qp + ": expected [w, x, y, z]");
      }
      Eigen::Quaterniond quat(as_number(q[0], qp), as_number(q[1], qp),
                              as_number(q[2], qp), as_number(q[3], qp));
      if (std::abs(quat.norm() - 1.0) > 1e-6) {
        throw ValidationError(qp + ": quaternion must have unit norm");
      }
      body.pose.rotation = std::abs(quat.norm() - 1.0) > 1e-12 ? quat.normalized() : quat;
    }
  }
  if (j.contains("fixed")) {
    if (!j.at("fixed").is_boolean()) throw ParseError(path + ".fixed: expected a boolean");
    body.fixed = j.at("fixed").get<bool>();
  }
  if (j.contains("mass")) {
    body.mass = as_number(j.at("mass"), path + ".mass");
  } else if (!body.fixed) {
    throw ParseError(path + ".mass: missing required field");
  }
  if (j.contains("mu")) body.mu = as_number(j.at("mu"), path + ".mu");
  body.com = j.contains("com") ? as_vec3(j.at("com"), path + ".com")
                               : body.shape.centroid();
  return body;
}

Scene load_scene(std::string_view document) {
  json j;
  try {
    j = json::parse(document.begin(), document.end());
  } catch (const json::parse_error& e) {
    throw ParseError("line " + std::to_string(line_of(document, e.byte)) + ": " +
                     e.what());
  }
  if (!j.is_object()) throw ParseError("document: expected an object");
  Scene scene;
  const json& bodies = require(j, "bodies", "document");
  if (!bodies.is_array()) throw ParseError("bodies: expected an array");
  for (std::size_t i = 0; i < bodies.size(); ++i) {
    scene.bodies.push_back(parse_body(bodies[i], "bodies[" + std::to_string(i) + "]"));
  }
  if (j.contains("friction_overrides")) {
    const json& overrides = j.at("friction_overrides");
    if (!overrides.is_array()) throw ParseError("friction_overrides: expected an array");
    for (std::size_t i = 0; i < overrides.size(); ++i) {
      const std::string p = "friction_overrides[" + std::to_string(i) + "]";
      FrictionOverride o;
      const json& a = require(overrides[i], "a", p);
      const json& b = require(overrides[i], "b", p);
      if (!a.is_string() || !b.is_string()) throw ParseError(p + ": ids must be strings");
      o.a = a.get<std::string>();
      o.b = b.get<std::string>();
      o.mu = as_number(require(overrides[i], "mu", p), p + ".mu");
      scene.friction_overrides.push_back(o);
    }
  }
  if (j.contains("gravity")) scene.gravity = as_vec3(j.at("gravity"), "gravity");
  validate_scene(scene);
  return scene;
}

Scene load_scene_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_scene(buffer.str());
}

void validate_scene(const Scene& scene) {
  std::set<std::string> ids;
  bool any_fixed = false;
  for (const RigidBody& b : scene.bodies) {
    if (!ids.insert(b.id).second) {
      throw ValidationError("body ids must be unique: '" + b.id + "'");
    }
    any_fixed = any_fixed || b.fixed;
    if (!b.fixed && !(b.mass > 0.0)) {
      throw ValidationError("body '" + b.id + "': mass must be positive");
    }
    if (!(b.mu >= 0.0)) {
      throw ValidationError("body '" + b.id + "': friction must be non-negative");
    }
    if (std::abs(b.pose.rotation.norm() - 1.0) > 1e-9) {
      throw ValidationError("body '" + b.id + "': quaternion must have unit norm");
    }
    if (!b.shape.contains(b.com, 1e-9 * std::max(1.0, b.shape.radius()))) {
      throw ValidationError("body '" + b.id +
                            "': center of mass must lie inside the shape");
    }
  }
  if (!any_fixed) throw ValidationError("scene needs at least one fixed body");
  for (const FrictionOverride& o : scene.friction_overrides) {
    if (!ids.count(o.a) || !ids.count(o.b)) {
      throw ValidationError("friction override references unknown body '" +
                            (ids.count(o.a) ? o.b : o.a) + "'");
    }
    if (!(o.mu >= 0.0)) {
      throw ValidationError("friction override must be non-negative");
    }
  }
}

double friction_for(const Scene& scene, std::string_view a, std::string_view b) {
  const RigidBody& ba = scene.body(a);
  const RigidBody& bb = scene.body(b);
  for (const FrictionOverride& o : scene.friction_overrides) {
    if ((o.a == a && o.b == b) || (o.a == b && o.b == a)) return o.mu;
  }
  return std::min(ba.mu, bb.mu);
}

json body_to_json(const RigidBody& b) {
  json shape;
  if (b.shape_spec.type == ShapeSpec::Type::kBox) {
    shape = {{"type", "box"}, {"half_extents", vec_json(b.shape_spec.half_extents)}};
  } else {
    json verts = json::array();
    for (const Vec3& v : b.shape_spec.vertices) verts.push_back(vec_json(v));
    shape = {{"type", "hull"}, {"vertices", verts}};
    if (!b.shape_spec.faces.empty()) shape["faces"] = b.shape_spec.faces;
  }
  const Eigen::Quaterniond& q = b.pose.rotation;
  json out = {
      {"id", b.id},
      {"shape", shape},
      {"pose",
       {{"translation", vec_json(b.pose.translation)},
        {"quaternion", json::array({q.w(), q.x(), q.y(), q.z()})}}},
      {"mass", b.mass},
      {"com", vec_json(b.com)},
      {"fixed", b.fixed},
      {"mu", b.mu}};
  return out;
}

json scene_to_json(const Scene& scene) {
  json bodies = json::array();
  for (const RigidBody& b : scene.bodies) bodies.push_back(body_to_json(b));
  json overrides = json::array();
  for (const FrictionOverride& o : scene.friction_overrides) {
    overrides.push_back({{"a", o.a}, {"b", o.b}, {"mu", o.mu}});
  }
  return {{"bodies", bodies},
          {"friction_overrides", overrides},
          {"gravity", vec_json(scene.gravity)}};
}

std::string serialize_scene(const Scene& scene) {
  return scene_to_json(scene).dump(2);
}

std::uint64_t scene_fingerprint(const Scene& scene) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : scene_to_json(scene).dump()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace robustness
