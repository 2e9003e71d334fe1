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

#include "robustness/contacts.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "robustness/errors.h"

namespace robustness {
namespace {

struct Extent {
  double lo;
  double hi;
};

Extent project(const ConvexPolyhedron& shape, const Vec3& n) {
  Extent e{std::numeric_limits<double>::infinity(),
           -std::numeric_limits<double>::infinity()};
  for (const Vec3& v : shape.vertices()) {
    const double d = n.dot(v);
    e.lo = std::min(e.lo, d);
    e.hi = std::max(e.hi, d);
  }
  return e;
}

// Gap between a and b along n (pointing from a towards b).
double gap_along(const ConvexPolyhedron& a, const ConvexPolyhedron& b,
                 const Vec3& n) {
  return project(b, n).lo - project(a, n).hi;
}

// Vertices of `shape` forming its extreme feature along `dir`.
std::vector<Vec3> support_feature(const ConvexPolyhedron& shape, const Vec3& dir,
                                  double tol_gap, double tol_angle) {
  const double top = project(shape, dir).hi;
  const double cos_tol = std::cos(tol_angle);
  for (std::size_t f = 0; f < shape.faces().size(); ++f) {
    if (shape.normal(f).dot(dir) >= cos_tol &&
        std::abs(shape.offset(f) - top) <= tol_gap) {
      return shape.face_points(f);
    }
  }
  std::vector<Vec3> out;
  for (const Vec3& v : shape.vertices()) {
    if (dir.dot(v) >= top - tol_gap) out.push_back(v);
  }
  return out;
}

}  // namespace

std::optional<Manifold> contact_manifold(const ConvexPolyhedron& a,
                                         const ConvexPolyhedron& b,
                                         double tol_gap, double tol_angle) {
  double best_face = -std::numeric_limits<double>::infinity();
  Vec3 face_axis = Vec3::UnitZ();
  for (std::size_t f = 0; f < a.faces().size(); ++f) {
    const double s = gap_along(a, b, a.normal(f));
    if (s > best_face + 1e-12) {
      best_face = s;
      face_axis = a.normal(f);
    }
  }
  for (std::size_t f = 0; f < b.faces().size(); ++f) {
    const double s = gap_along(a, b, -b.normal(f));
    if (s > best_face + 1e-12) {
      best_face = s;
      face_axis = -b.normal(f);
    }
  }

  double best_edge = -std::numeric_limits<double>::infinity();
  Vec3 edge_axis = Vec3::UnitZ();
  for (const auto& [a0, a1] : a.edges()) {
    const Vec3 ea = a.vertices()[a1] - a.vertices()[a0];
    for (const auto& [b0, b1] : b.edges()) {
      const Vec3 eb = b.vertices()[b1] - b.vertices()[b0];
      Vec3 n = ea.cross(eb);
      if (n.norm() <= 1e-9 * ea.norm() * eb.norm()) continue;
      n.normalize();
      for (const Vec3& cand : {n, Vec3(-n)}) {
        const double s = gap_along(a, b, cand);
        if (s > best_edge) {
          best_edge = s;
          edge_axis = cand;
        }
      }
    }
  }

  const double separation = std::max(best_face, best_edge);
  if (separation > tol_gap) return std::nullopt;
  const Vec3 n = best_edge > best_face + tol_gap ? edge_axis : face_axis;

  const std::vector<Vec3> fa = support_feature(a, n, tol_gap, tol_angle);
  const std::vector<Vec3> fb = support_feature(b, -n, tol_gap, tol_angle);
  const double height = 0.5 * (project(a, n).hi + project(b, n).lo);
  const PlaneFrame plane = PlaneFrame::from_normal(n, height * n);
  std::vector<Vec2> pa;
  std::vector<Vec2> pb;
  for (const Vec3& v : fa) pa.push_back(plane.project(v));
  for (const Vec3& v : fb) pb.push_back(plane.project(v));
  const std::vector<Vec2> overlap = intersect_convex_2d(pa, pb, tol_gap);
  if (overlap.empty()) return std::nullopt;

  Manifold m;
  m.normal = n;
  m.separation = separation;
  for (const Vec2& q : overlap) m.points.push_back(plane.lift(q));
  return m;
}

std::vector<ContactInterface> detect_contacts(const Scene& scene,
                                              const DetectionConfig& config) {
  if (!(config.tol_gap > 0.0) || !(config.tol_angle > 0.0)) {
    throw PreconditionError("contact tolerances must be positive");
  }
  std::vector<ConvexPolyhedron> shapes;
  std::vector<Vec3> centers;
  std::vector<double> radii;
  for (const RigidBody& b : scene.bodies) {
    shapes.push_back(b.world_shape());
    centers.push_back(shapes.back().centroid());
    radii.push_back(shapes.back().radius());
  }
  const Vec3 up = -scene.gravity.normalized();

  std::vector<ContactInterface> out;
  for (std::size_t i = 0; i < shapes.size(); ++i) {
    for (std::size_t j = i + 1; j < shapes.size(); ++j) {
      const RigidBody& bi = scene.bodies[i];
      const RigidBody& bj = scene.bodies[j];
      if (bi.fixed && bj.fixed) continue;
      if ((centers[i] - centers[j]).norm() > radii[i] + radii[j] + config.tol_gap) {
        continue;
      }
      const auto m = contact_manifold(shapes[i], shapes[j], config.tol_gap,
                                      config.tol_angle);
      if (!m) continue;
      if (m->separation < -10.0 * config.tol_gap) {
        throw ValidationError("bodies '" + bi.id + "' and '" + bj.id +
                              "' interpenetrate");
      }
      bool swap = false;
      if (bj.fixed) {
        swap = true;
      } else if (!bi.fixed && m->normal.dot(up) < -1e-9) {
        swap = true;
      }
      ContactInterface iface;
      iface.body_a = swap ? bj.id : bi.id;
      iface.body_b = swap ? bi.id : bj.id;
      iface.mu = friction_for(scene, bi.id, bj.id);
      const Mat3 frame = frame_from_normal(swap ? Vec3(-m->normal) : m->normal);
      for (const Vec3& p : m->points) {
        iface.points.push_back({p, frame, out.size()});
      }
      out.push_back(std::move(iface));
    }
  }
  return out;
}

}  // namespace robustness
