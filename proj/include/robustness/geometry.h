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

#ifndef ROBUSTNESS_GEOMETRY_H_
#define ROBUSTNESS_GEOMETRY_H_

#include <cstddef>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Geometry>

namespace robustness {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;

// Rigid transform x_world = rotation * x_body + translation.
struct Pose {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 operator*(const Vec3& p) const { return rotation * p + translation; }
  Pose operator*(const Pose& other) const;
  Pose inverse() const;
};

// Cross-product matrix: skew(a) * b == a.cross(b).
Mat3 skew(const Vec3& a);

// Orthonormal right-handed frame whose third column is `normal`.
Mat3 frame_from_normal(const Vec3& normal);

// Convex polyhedron stored as vertices plus outward, counter-clockwise faces.
class ConvexPolyhedron {
 public:
  ConvexPolyhedron() = default;

  static ConvexPolyhedron box(const Vec3& half_extents);

  // Convex hull of a point cloud. Throws ValidationError when the points do
  // not span a volume.
  static ConvexPolyhedron hull(const std::vector<Vec3>& points);

  // Builds from an explicit mesh and rejects it unless it is convex.
  static ConvexPolyhedron from_mesh(const std::vector<Vec3>& vertices,
                                    const std::vector<std::vector<int>>& faces);

  const std::vector<Vec3>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& faces() const { return faces_; }
  const Vec3& normal(std::size_t face) const { return normals_[face]; }
  double offset(std::size_t face) const { return offsets_[face]; }
  std::vector<Vec3> face_points(std::size_t face) const;
  std::vector<std::pair<int, int>> edges() const;

  double volume() const;
  Vec3 centroid() const;
  double radius() const;

  // Largest signed distance to a face plane; negative strictly inside.
  double plane_distance(const Vec3& p) const;
  bool contains(const Vec3& p, double tol) const;

  // Closest point on the boundary; `face` receives the face it lies on.
  Vec3 closest_surface_point(const Vec3& p, std::size_t* face = nullptr) const;

  ConvexPolyhedron transformed(const Pose& pose) const;

 private:
  void compute_planes();

  std::vector<Vec3> vertices_;
  std::vector<std::vector<int>> faces_;
  std::vector<Vec3> normals_;
  std::vector<double> offsets_;
};

// Orthonormal 2-D coordinates on a plane.
struct PlaneFrame {
  Vec3 origin;
  Vec3 u;
  Vec3 v;
  Vec3 n;

  static PlaneFrame from_normal(const Vec3& normal, const Vec3& origin);
  Vec2 project(const Vec3& p) const {
    const Vec3 d = p - origin;
    return {d.dot(u), d.dot(v)};
  }
  Vec3 lift(const Vec2& q) const { return origin + q.x() * u + q.y() * v; }
};

// Counter-clockwise hull without collinear points. One or two points are
// returned as-is after deduplication.
std::vector<Vec2> convex_hull_2d(std::vector<Vec2> points, double tol);

// Intersection of two convex regions; degenerate regions such as segments are allowed.
std::vector<Vec2> intersect_convex_2d(const std::vector<Vec2>& a,
                                      const std::vector<Vec2>& b, double tol);

bool point_in_convex_2d(const Vec2& p, const std::vector<Vec2>& polygon,
                        double tol);
double polygon_area_2d(const std::vector<Vec2>& polygon);

Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b);

// Closest points between segments [p1, q1] and [p2, q2].
std::pair<Vec3, Vec3> closest_points_between_segments(const Vec3& p1,
                                                      const Vec3& q1,
                                                      const Vec3& p2,
                                                      const Vec3& q2);

}  // namespace robustness

#endif  // ROBUSTNESS_GEOMETRY_H_
