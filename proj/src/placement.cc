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

#include "robustness/placement.h"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "robustness/contacts.h"
#include "robustness/errors.h"

namespace robustness {
namespace {

constexpr char kLostContact[] = "placement lost contact";

Vec3 centroid(const std::vector<Vec3>& points) {
  Vec3 c = Vec3::Zero();
  for (const Vec3& p : points) c += p;
  return c / static_cast<double>(points.size());
}

bool spans_plane(const std::vector<Vec3>& points) {
  if (points.size() < 3) return false;
  const Vec3 c = centroid(points);
  Eigen::Matrix<double, Eigen::Dynamic, 3> X(points.size(), 3);
  for (std::size_t i = 0; i < points.size(); ++i) X.row(i) = (points[i] - c).transpose();
  const Vec3 sv = Eigen::JacobiSVD<Eigen::MatrixXd>(X).singularValues();
  return sv[0] > 1e-12 && sv[1] > 1e-9 * sv[0];
}

// Kabsch when the pairs determine a rotation, otherwise the mean offset.
RigidTransform align(const std::vector<Vec3>& B, const std::vector<Vec3>& S) {
  if (spans_plane(B)) return kabsch_align(B, S);
  RigidTransform t;
  t.translation = centroid(S) - centroid(B);
  return t;
}

double rotation_angle(const Eigen::Quaterniond& a, const Eigen::Quaterniond& b) {
  return a.angularDistance(b);
}

}  // namespace

Pose RigidTransform::apply(const Pose& pose) const {
  Pose out;
  out.rotation = Eigen::Quaterniond(rotation * pose.rotation.toRotationMatrix()).normalized();
  out.translation = rotation * pose.translation + translation;
  return out;
}

RigidTransform kabsch_align(const std::vector<Vec3>& B, const std::vector<Vec3>& S) {
  if (B.size() != S.size()) throw PreconditionError("kabsch point sets differ in size");
  if (B.size() < 3) throw PreconditionError("kabsch needs at least three points");
  if (!spans_plane(B)) throw PreconditionError("kabsch points are collinear or coincident");
  const Vec3 cb = centroid(B);
  const Vec3 cs = centroid(S);
  Mat3 H = Mat3::Zero();
  for (std::size_t i = 0; i < B.size(); ++i) H += (B[i] - cb) * (S[i] - cs).transpose();
  const Eigen::JacobiSVD<Mat3> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 U = svd.matrixU();
  const Mat3 V = svd.matrixV();
  Mat3 D = Mat3::Identity();
  D(2, 2) = (V * U.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  RigidTransform t;
  t.rotation = V * D * U.transpose();
  t.translation = cs - t.rotation * cb;
  return t;
}

std::vector<ObjectContact> object_contacts(const Scene& scene, const RigidBody& object,
                                           double max_gap) {
  const ConvexPolyhedron shape = object.world_shape();
  std::vector<ObjectContact> out;
  for (const RigidBody& body : scene.bodies) {
    const auto m = contact_manifold(body.world_shape(), shape, max_gap, 1e-3);
    if (!m) continue;
    for (const Vec3& p : m->points) out.push_back({p, m->normal});
  }
  return out;
}

std::optional<std::size_t> best_nearby_sample(const RobustnessMap& map, const Vec3& point,
                                              const Vec3& normal, int K,
                                              double normal_gate) {
  if (K < 1) throw PreconditionError("K must be positive");
  std::vector<std::pair<double, std::size_t>> near;
  for (std::size_t i = 0; i < map.samples.size(); ++i) {
    const MapSample& s = map.samples[i];
    if (s.normal.dot(normal) < normal_gate) continue;
    near.emplace_back((s.point - point).squaredNorm(), i);
  }
  if (near.empty()) return std::nullopt;
  const std::size_t k = std::min<std::size_t>(K, near.size());
  std::partial_sort(near.begin(), near.begin() + k, near.end());
  std::optional<std::size_t> best;
  for (std::size_t j = 0; j < k; ++j) {
    const std::size_t i = near[j].second;
    if (!best || map.samples[i].result.sri > map.samples[*best].result.sri ||
        (map.samples[i].result.sri == map.samples[*best].result.sri && i < *best)) {
      best = i;
    }
  }
  return best;
}

double mean_contact_sri(const Scene& scene, const RobustnessMap& map,
                        const RigidBody& object, double max_gap, double normal_gate) {
  const std::vector<ObjectContact> contacts = object_contacts(scene, object, max_gap);
  double total = 0.0;
  std::size_t count = 0;
  for (const ObjectContact& c : contacts) {
    if (const auto i = best_nearby_sample(map, c.point, c.normal, 1, normal_gate)) {
      total += map.samples[*i].result.sri;
      ++count;
    }
  }
  if (count == 0) throw PreconditionError(kLostContact);
  return total / static_cast<double>(count);
}

Scene with_object(const Scene& scene, const RigidBody& object) {
  Scene out = scene;
  out.bodies.push_back(object);
  return out;
}

IpaResult ipa_refine(const Scene& scene, const RobustnessMap& map, PlacementState state,
                     const PlacementConfig& config) {
  if (map.samples.empty()) throw PreconditionError("robustness map is empty");
  if (config.max_iters < 0) throw PreconditionError("max_iters must be nonnegative");
  if (!(config.M >= 0.0)) throw PreconditionError("M must be nonnegative");
  const double D = config.D.value_or(2.0 * map.spacing);
  if (!(D > 0.0)) throw PreconditionError("D must be positive");
  const double spacing = config.object_spacing.value_or(map.spacing);
  const std::vector<SurfacePoint> object_samples = sample_surface(state.object.shape, spacing);

  IpaResult result;
  result.initial_mean_sri = mean_contact_sri(scene, map, state.object, D, config.normal_gate);
  state.converged = false;
  for (int iter = 1; iter <= config.max_iters && !state.converged; ++iter) {
    const Pose before = state.object.pose;

    // Perturb the contact points toward the COM and match them to the best
    // nearby map samples.
    const std::vector<ObjectContact> contacts = object_contacts(scene, state.object, D);
    if (contacts.empty()) throw PreconditionError(kLostContact);
    std::vector<Vec3> B;
    for (const ObjectContact& c : contacts) B.push_back(c.point);
    Vec3 v = state.object.world_com() - centroid(B);
    v.z() = 0.0;
    const Vec3 shift = v.norm() > 1e-12 ? Vec3(config.M * v.normalized()) : Vec3::Zero();
    state.contact_set.clear();
    state.scene_set.clear();
    for (const ObjectContact& c : contacts) {
      const Vec3 b = c.point + shift;
      const auto i = best_nearby_sample(map, b, c.normal, config.K, config.normal_gate);
      if (!i) continue;
      state.contact_set.push_back(b);
      state.scene_set.push_back(map.samples[*i].point);
    }
    if (state.contact_set.empty()) throw PreconditionError(kLostContact);

    // Move the perturbed points onto their matches.
    state.object.pose = align(state.contact_set, state.scene_set).apply(state.object.pose);

    // Pull the object's facing surface back onto the scene.
    std::vector<Vec3> from;
    std::vector<Vec3> to;
    for (const SurfacePoint& sp : object_samples) {
      const Vec3 p = state.object.pose * sp.point;
      const Vec3 n = state.object.pose.rotation * sp.normal;
      double best = D;
      std::optional<Vec3> match;
      for (const RigidBody& body : scene.bodies) {
        const ConvexPolyhedron shape = body.world_shape();
        std::size_t face = 0;
        const Vec3 q = shape.closest_surface_point(p, &face);
        if (shape.normal(face).dot(-n) < config.normal_gate) continue;
        const double d = (q - p).norm();
        if (d <= best) {
          best = d;
          match = q;
        }
      }
      if (match) {
        from.push_back(p);
        to.push_back(*match);
      }
    }
    if (from.empty()) throw PreconditionError(kLostContact);
    state.object.pose = align(from, to).apply(state.object.pose);

    IpaTraceRow row;
    row.iteration = iter;
    row.pose = state.object.pose;
    row.step_translation = (state.object.pose.translation - before.translation).norm();
    row.step_rotation = rotation_angle(state.object.pose.rotation, before.rotation);
    row.mean_sri = mean_contact_sri(scene, map, state.object, D, config.normal_gate);
    row.contacts = object_contacts(scene, state.object, D).size();
    result.trace.push_back(row);
    state.iteration = iter;
    state.converged = row.step_translation < config.tol_translation &&
                      row.step_rotation < config.tol_rotation;
  }
  result.final_mean_sri = result.trace.empty() ? result.initial_mean_sri
                                               : result.trace.back().mean_sri;
  result.state = std::move(state);
  return result;
}

std::string trace_to_csv(const std::vector<IpaTraceRow>& trace) {
  std::ostringstream out;
  out << "iteration,x,y,z,qw,qx,qy,qz,contacts,mean_sri,step_translation,step_rotation\n";
  for (const IpaTraceRow& r : trace) {
    const Vec3& t = r.pose.translation;
    const Eigen::Quaterniond& q = r.pose.rotation;
    out << r.iteration << ',' << format_value(t.x()) << ',' << format_value(t.y()) << ','
        << format_value(t.z()) << ',' << format_value(q.w()) << ',' << format_value(q.x())
        << ',' << format_value(q.y()) << ',' << format_value(q.z()) << ',' << r.contacts
        << ',' << format_value(r.mean_sri) << ',' << format_value(r.step_translation) << ','
        << format_value(r.step_rotation) << '\n';
  }
  return out.str();
}

}  // namespace robustness
