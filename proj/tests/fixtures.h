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

// Scene builders shared by the test binaries.
#ifndef ROBUSTNESS_TESTS_FIXTURES_H_
#define ROBUSTNESS_TESTS_FIXTURES_H_

#include <cmath>
#include <numbers>
#include <string>

#include "json.hpp"
#include "robustness/contacts.h"
#include "robustness/equilibrium.h"
#include "robustness/scene.h"

namespace robustness::testing {

using nlohmann::json;

inline json box_body(const std::string& id, const Vec3& half, const Vec3& center,
                     double mass, double mu, bool fixed = false,
                     const Eigen::Quaterniond& q = Eigen::Quaterniond::Identity()) {
  json b = {{"id", id},
            {"shape", {{"type", "box"}, {"half_extents", {half.x(), half.y(), half.z()}}}},
            {"pose",
             {{"translation", {center.x(), center.y(), center.z()}},
              {"quaternion", {q.w(), q.x(), q.y(), q.z()}}}},
            {"fixed", fixed},
            {"mu", mu}};
  if (!fixed) b["mass"] = mass;
  return b;
}

inline json floor_body(double mu = 0.5, double half = 5.0) {
  return box_body("floor", {half, half, 0.5}, {0, 0, -0.5}, 0.0, mu, true);
}

inline Scene make_scene(const json& bodies) {
  return load_scene(json{{"bodies", bodies}}.dump());
}

// Unit cube (edge a) resting on a floor slab.
inline Scene cube_on_floor(double mu = 0.5, double mass = 1.0, double a = 1.0) {
  return make_scene(json::array(
      {floor_body(mu), box_body("cube", Vec3::Constant(a / 2), {0, 0, a / 2}, mass, mu)}));
}

// Block of width w (x and y) and height h.
inline Scene block_on_floor(double w, double h, double mass, double mu) {
  return make_scene(json::array(
      {floor_body(mu), box_body("block", {w / 2, w / 2, h / 2}, {0, 0, h / 2}, mass, mu)}));
}

inline Scene two_cubes_side_by_side(double mu = 0.5) {
  return make_scene(json::array({floor_body(mu),
                                 box_body("c1", Vec3::Constant(0.5), {-0.5, 0, 0.5}, 1.0, mu),
                                 box_body("c2", Vec3::Constant(0.5), {0.5, 0, 0.5}, 1.0, mu)}));
}

inline Scene stacked_cubes(double mu = 0.5) {
  return make_scene(json::array({floor_body(mu),
                                 box_body("lower", Vec3::Constant(0.5), {0, 0, 0.5}, 1.0, mu),
                                 box_body("upper", Vec3::Constant(0.5), {0, 0, 1.5}, 1.0, mu)}));
}

// Fixed slab tilted by `angle` about x (rising towards +y) and a unit cube
// resting on it.
inline Scene cube_on_slant(double angle, double mu) {
  const Eigen::Quaterniond q(Eigen::AngleAxisd(angle, Vec3::UnitX()));
  const Vec3 up = q * Vec3::UnitZ();
  const Vec3 slab_center = -0.5 * up;
  const Vec3 cube_center = 0.5 * up;
  return make_scene(json::array({box_body("slant", {3, 3, 0.5}, slab_center, 0, mu, true, q),
                                 box_body("cube", Vec3::Constant(0.5), cube_center, 1.0, mu,
                                          false, q)}));
}

inline std::vector<ContactInterface> contacts(const Scene& s) { return detect_contacts(s); }

}  // namespace robustness::testing

#endif  // ROBUSTNESS_TESTS_FIXTURES_H_
