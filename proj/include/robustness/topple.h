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

#ifndef ROBUSTNESS_TOPPLE_H_
#define ROBUSTNESS_TOPPLE_H_

#include <cstddef>
#include <optional>
#include <vector>

#include "robustness/contact_graph.h"
#include "robustness/contacts.h"
#include "robustness/geometry.h"
#include "robustness/scene.h"

namespace robustness {

// Contact between a super-object and a body outside it. The frame's third
// column points into the super-object.
struct BoundaryContact {
  Vec3 position = Vec3::Zero();
  Mat3 frame = Mat3::Identity();
  std::size_t interface = 0;
  std::size_t point = 0;
};

// Connected set of free bodies treated as one rigid object.
struct SuperObject {
  std::vector<int> nodes;            // sorted CIG nodes
  std::vector<std::size_t> bodies;   // scene body indices, same order
  double mass = 0.0;
  Vec3 com = Vec3::Zero();
  std::vector<BoundaryContact> boundary;

  bool contains_body(std::size_t body) const;
};

struct TopplingAxis {
  Vec3 source = Vec3::Zero();
  Vec3 direction = Vec3::UnitX();
  Vec3 target = Vec3::Zero();  // other endpoint of the hull edge

  // (source x direction, direction): the rotation twist about the axis.
  Vec6 twist() const;
};

SuperObject make_super_object(const Scene& scene, const ContactInterfaceGraph& graph,
                              const std::vector<ContactInterface>& interfaces,
                              std::vector<int> nodes);

// Every connected set of free nodes. Without a cap, more than 12 free bodies
// is rejected; with a cap, exceeding it is.
std::vector<SuperObject> enumerate_super_objects(
    const Scene& scene, const ContactInterfaceGraph& graph,
    const std::vector<ContactInterface>& interfaces,
    std::optional<std::size_t> cap = std::nullopt);

// Hard-finger grasp matrix, five columns per contact.
Eigen::MatrixXd grasp_matrix(const std::vector<BoundaryContact>& contacts);

bool form_closure(const SuperObject& super);

// Oriented hull edges of the boundary contacts. The matching endpoints
// bracket each edge.
std::vector<TopplingAxis> candidate_axes(const std::vector<Vec3>& points);

// Axes about which a positive rotation lifts every boundary contact off its
// support, except those lying on the axis.
std::vector<TopplingAxis> valid_toppling_axes(const SuperObject& super,
                                              double eps = 1e-9);

double gravity_torque(const SuperObject& super, const TopplingAxis& axis,
                      const Vec3& gravity);
double external_torque(const TopplingAxis& axis, const Vec3& point,
                       const Vec3& direction);

// Force magnitude along `direction` at which the object starts rotating about
// the axis; +inf when the push does not drive that rotation.
double axis_robustness(double tau_g, double tau_e);

// Minimum over the given super-objects and their valid axes.
double sr_top(const Vec3& point, const Vec3& direction,
              const std::vector<const SuperObject*>& supers,
              const std::vector<std::vector<TopplingAxis>>& axes,
              const Vec3& gravity);

struct ToppleImprovement {
  double improvement = 0.0;
  double s_least_squares = 0.0;  // unconstrained minimizer of |A s - b|^2
  double s_star = 0.0;           // the same, clamped to s >= 0
};

// A holds the external torques, b the gravity torques.
ToppleImprovement topple_improvement(const std::vector<double>& tau_e,
                                     const std::vector<double>& tau_g,
                                     double s_eval);

}  // namespace robustness

#endif  // ROBUSTNESS_TOPPLE_H_
