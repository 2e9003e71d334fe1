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

#include "robustness/geometry.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "robustness/errors.h"

namespace robustness {
namespace {

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Signed distance of p to the left of the directed line a->b.
double left_distance(const Vec2& a, const Vec2& b, const Vec2& p) {
  const Vec2 d = b - a;
  const double len = d.norm();
  if (len == 0.0) return 0.0;
  return cross2(d, p - a) / len;
}

std::vector<Vec2> dedupe(std::vector<Vec2> pts, double tol) {
  std::vector<Vec2> out;
  for (const Vec2& p : pts) {
    bool seen = false;
    for (const Vec2& q : out) {
      if ((p - q).norm() <= tol) {
        seen = true;
        break;
      }
    }
    if (!seen) out.push_back(p);
  }
  return out;
}

std::vector<Vec2> clip_polygon(const std::vector<Vec2>& subject,
                               const std::vector<Vec2>& clip, double tol) {
  std::vector<Vec2> out = subject;
  for (std::size_t i = 0; i < clip.size() && !out.empty(); ++i) {
    const Vec2& a = clip[i];
    const Vec2& b = clip[(i + 1) % clip.size()];
    std::vector<Vec2> in = std::move(out);
    out.clear();
    for (std::size_t j = 0; j < in.size(); ++j) {
      const Vec2& p = in[j];
      const Vec2& q = in[(j + 1) % in.size()];
      const double dp = left_distance(a, b, p);
      const double dq = left_distance(a, b, q);
      const bool p_in = dp >= -tol;
      const bool q_in = dq >= -tol;
      if (p_in) out.push_back(p);
      if (p_in != q_in) {
        const double t = dp / (dp - dq);
        out.push_back(p + t * (q - p));
      }
    }
  }
  return out;
}

std::vector<Vec2> clip_segment(const Vec2& p, const Vec2& q,
                               const std::vector<Vec2>& clip, double tol) {
  double t0 = 0.0;
  double t1 = 1.0;
  for (std::size_t i = 0; i < clip.size(); ++i) {
    const Vec2& a = clip[i];
    const Vec2& b = clip[(i + 1) % clip.size()];
    const double dp = left_distance(a, b, p) + tol;
    const double dq = left_distance(a, b, q) + tol;
    if (dp < 0.0 && dq < 0.0) return {};
    if (dp >= 0.0 && dq >= 0.0) continue;
    const double t = dp / (dp - dq);
    if (dp < 0.0) {
      t0 = std::max(t0, t);
    } else {
      t1 = std::min(t1, t);
    }
    if (t0 > t1) return {};
  }
  return dedupe({p + t0 * (q - p), p + t1 * (q - p)}, tol);
}

bool point_on_segment(const Vec2& p, const Vec2& a, const Vec2& b, double tol) {
  const Vec2 d = b - a;
  const double len2 = d.squaredNorm();
  double t = len2 > 0.0 ? (p - a).dot(d) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return (a + t * d - p).norm() <= tol;
}

std::vector<Vec2> intersect_segments(const Vec2& a0, const Vec2& a1,
                                     const Vec2& b0, const Vec2& b1,
                                     double tol) {
  const Vec2 da = a1 - a0;
  const double la = da.norm();
  const bool collinear = std::abs(left_distance(a0, a1, b0)) <= tol &&
                         std::abs(left_distance(a0, a1, b1)) <= tol;
  if (collinear) {
    const Vec2 dir = da / la;
    const double s0 = (b0 - a0).dot(dir);
    const double s1 = (b1 - a0).dot(dir);
    const double lo = std::max(0.0, std::min(s0, s1));
    const double hi = std::min(la, std::max(s0, s1));
    if (lo > hi + tol) return {};
    return dedupe({a0 + lo * dir, a0 + std::max(lo, hi) * dir}, tol);
  }
  const Vec2 db = b1 - b0;
  const double den = cross2(da, db);
  if (std::abs(den) < 1e-300) return {};
  const double t = cross2(b0 - a0, db) / den;
  const Vec2 x = a0 + t * da;
  if (point_on_segment(x, a0, a1, tol) && point_on_segment(x, b0, b1, tol)) {
    return {x};
  }
  return {};
}

}  // namespace

Pose Pose::operator*(const Pose& other) const {
  Pose out;
  out.rotation = (rotation * other.rotation).normalized();
  out.translation = rotation * other.translation + translation;
  return out;
}

Pose Pose::inverse() const {
  Pose out;
  out.rotation = rotation.conjugate();
  out.translation = -(out.rotation * translation);
  return out;
}

Mat3 skew(const Vec3& a) {
  Mat3 m;
  m << 0.0, -a.z(), a.y(), a.z(), 0.0, -a.x(), -a.y(), a.x(), 0.0;
  return m;
}

Mat3 frame_from_normal(const Vec3& normal) {
  const Vec3 n = normal.normalized();
  Vec3 seed = Vec3::UnitX();
  if (std::abs(n.x()) > 0.9) seed = Vec3::UnitY();
  const Vec3 u = (seed - seed.dot(n) * n).normalized();
  const Vec3 v = n.cross(u);
  Mat3 r;
  r.col(0) = u;
  r.col(1) = v;
  r.col(2) = n;
  return r;
}

PlaneFrame PlaneFrame::from_normal(const Vec3& normal, const Vec3& origin) {
  const Mat3 r = frame_from_normal(normal);
  return {origin, r.col(0), r.col(1), r.col(2)};
}

ConvexPolyhedron ConvexPolyhedron::box(const Vec3& h) {
  std::vector<Vec3> pts;
  for (int i = 0; i < 8; ++i) {
    pts.emplace_back((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(),
                     (i & 4) ? h.z() : -h.z());
  }
  return hull(pts);
}

ConvexPolyhedron ConvexPolyhedron::hull(const std::vector<Vec3>& points) {
  if (points.size() < 4) {
    throw ValidationError("shape needs at least 4 non-coplanar vertices");
  }
  double extent = 0.0;
  for (const Vec3& p : points) extent = std::max(extent, (p - points[0]).norm());
  const double tol = 1e-9 * std::max(1.0, extent);

  std::vector<Vec3> pts;
  for (const Vec3& p : points) {
    bool dup = false;
    for (const Vec3& q : pts) dup = dup || (p - q).norm() <= tol;
    if (!dup) pts.push_back(p);
  }

  const int n = static_cast<int>(pts.size());
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> faces;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      for (int k = j + 1; k < n; ++k) {
        Vec3 normal = (pts[j] - pts[i]).cross(pts[k] - pts[i]);
        const double len = normal.norm();
        if (len <= tol * std::max(1.0, extent)) continue;
        normal /= len;
        double lo = 0.0;
        double hi = 0.0;
        for (const Vec3& p : pts) {
          const double d = normal.dot(p - pts[i]);
          lo = std::min(lo, d);
          hi = std::max(hi, d);
        }
        if (hi > tol && lo < -tol) continue;
        if (hi > tol) normal = -normal;
        std::vector<int> on_plane;
        for (int m = 0; m < n; ++m) {
          if (std::abs(normal.dot(pts[m] - pts[i])) <= tol) on_plane.push_back(m);
        }
        if (!seen.insert(on_plane).second) continue;
        const PlaneFrame frame = PlaneFrame::from_normal(normal, pts[i]);
        std::vector<Vec2> projected;
        for (int m : on_plane) projected.push_back(frame.project(pts[m]));
        const std::vector<Vec2> ring = convex_hull_2d(projected, tol);
        std::vector<int> face;
        for (const Vec2& q : ring) {
          for (std::size_t m = 0; m < on_plane.size(); ++m) {
            if ((projected[m] - q).norm() <= tol) {
              face.push_back(on_plane[m]);
              break;
            }
          }
        }
        if (face.size() >= 3) faces.push_back(face);
      }
    }
  }
  if (faces.size() < 4) {
    throw ValidationError("shape needs at least 4 non-coplanar vertices");
  }

  std::map<int, int> remap;
  ConvexPolyhedron out;
  for (auto& face : faces) {
    for (int& idx : face) {
      auto it = remap.find(idx);
      if (it == remap.end()) {
        it = remap.emplace(idx, static_cast<int>(out.vertices_.size())).first;
        out.vertices_.push_back(pts[idx]);
      }
      idx = it->second;
    }
  }
  out.faces_ = std::move(faces);
  out.compute_planes();
  return out;
}

ConvexPolyhedron ConvexPolyhedron::from_mesh(
    const std::vector<Vec3>& vertices,
    const std::vector<std::vector<int>>& faces) {
  double extent = 0.0;
  for (const Vec3& p : vertices) extent = std::max(extent, p.norm());
  const double tol = 1e-9 * std::max(1.0, extent);
  for (const auto& face : faces) {
    if (face.size() < 3) throw ValidationError("face needs at least 3 vertices");
    for (int idx : face) {
      if (idx < 0 || idx >= static_cast<int>(vertices.size())) {
        throw ValidationError("face references a missing vertex");
      }
    }
    Vec3 normal = Vec3::Zero();
    for (std::size_t i = 0; i < face.size(); ++i) {
      normal += vertices[face[i]].cross(vertices[face[(i + 1) % face.size()]]);
    }
    if (normal.norm() <= tol) throw ValidationError("degenerate face");
    normal.normalize();
    const Vec3& origin = vertices[face[0]];
    for (int idx : face) {
      if (std::abs(normal.dot(vertices[idx] - origin)) > 1e3 * tol) {
        throw ValidationError("shape is not convex: non-planar face");
      }
    }
    double lo = 0.0;
    double hi = 0.0;
    for (const Vec3& p : vertices) {
      const double d = normal.dot(p - origin);
      lo = std::min(lo, d);
      hi = std::max(hi, d);
    }
    if (hi > 1e3 * tol && lo < -1e3 * tol) {
      throw ValidationError("shape is not convex");
    }
  }
  return hull(vertices);
}

void ConvexPolyhedron::compute_planes() {
  normals_.clear();
  offsets_.clear();
  for (const auto& face : faces_) {
    Vec3 normal = Vec3::Zero();
    for (std::size_t i = 0; i < face.size(); ++i) {
      normal += vertices_[face[i]].cross(vertices_[face[(i + 1) % face.size()]]);
    }
    normal.normalize();
    normals_.push_back(normal);
    double offset = 0.0;
    for (int idx : face) offset += normal.dot(vertices_[idx]);
    offsets_.push_back(offset / static_cast<double>(face.size()));
  }
}

std::vector<Vec3> ConvexPolyhedron::face_points(std::size_t face) const {
  std::vector<Vec3> out;
  for (int idx : faces_[face]) out.push_back(vertices_[idx]);
  return out;
}

std::vector<std::pair<int, int>> ConvexPolyhedron::edges() const {
  std::set<std::pair<int, int>> out;
  for (const auto& face : faces_) {
    for (std::size_t i = 0; i < face.size(); ++i) {
      const int a = face[i];
      const int b = face[(i + 1) % face.size()];
      out.emplace(std::min(a, b), std::max(a, b));
    }
  }
  return {out.begin(), out.end()};
}

double ConvexPolyhedron::volume() const {
  const Vec3& o = vertices_[0];
  double v = 0.0;
  for (const auto& face : faces_) {
    for (std::size_t i = 1; i + 1 < face.size(); ++i) {
      v += (vertices_[face[0]] - o)
               .dot((vertices_[face[i]] - o).cross(vertices_[face[i + 1]] - o));
    }
  }
  return v / 6.0;
}

Vec3 ConvexPolyhedron::centroid() const {
  const Vec3& o = vertices_[0];
  double total = 0.0;
  Vec3 acc = Vec3::Zero();
  for (const auto& face : faces_) {
    for (std::size_t i = 1; i + 1 < face.size(); ++i) {
      const Vec3& a = vertices_[face[0]];
      const Vec3& b = vertices_[face[i]];
      const Vec3& c = vertices_[face[i + 1]];
      const double v = (a - o).dot((b - o).cross(c - o));
      total += v;
      acc += v * (o + a + b + c) / 4.0;
    }
  }
  return acc / total;
}

double ConvexPolyhedron::radius() const {
  const Vec3 c = centroid();
  double r = 0.0;
  for (const Vec3& p : vertices_) r = std::max(r, (p - c).norm());
  return r;
}

double ConvexPolyhedron::plane_distance(const Vec3& p) const {
  double d = -std::numeric_limits<double>::infinity();
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    d = std::max(d, normals_[f].dot(p) - offsets_[f]);
  }
  return d;
}

bool ConvexPolyhedron::contains(const Vec3& p, double tol) const {
  return plane_distance(p) <= tol;
}

Vec3 ConvexPolyhedron::closest_surface_point(const Vec3& p,
                                             std::size_t* face) const {
  double best = std::numeric_limits<double>::infinity();
  Vec3 best_point = vertices_[0];
  for (std::size_t f = 0; f < faces_.size(); ++f) {
    const Vec3 proj = p - (normals_[f].dot(p) - offsets_[f]) * normals_[f];
    const auto& idx = faces_[f];
    bool inside = true;
    for (std::size_t i = 0; i < idx.size() && inside; ++i) {
      const Vec3& a = vertices_[idx[i]];
      const Vec3& b = vertices_[idx[(i + 1) % idx.size()]];
      inside = (b - a).cross(proj - a).dot(normals_[f]) >= 0.0;
    }
    Vec3 candidate = proj;
    if (!inside) {
      double edge_best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < idx.size(); ++i) {
        const Vec3 q = closest_point_on_segment(
            p, vertices_[idx[i]], vertices_[idx[(i + 1) % idx.size()]]);
        const double d = (q - p).squaredNorm();
        if (d < edge_best) {
          edge_best = d;
          candidate = q;
        }
      }
    }
    const double d = (candidate - p).squaredNorm();
    if (d < best) {
      best = d;
      best_point = candidate;
      if (face != nullptr) *face = f;
    }
  }
  return best_point;
}

ConvexPolyhedron ConvexPolyhedron::transformed(const Pose& pose) const {
  ConvexPolyhedron out = *this;
  for (Vec3& v : out.vertices_) v = pose * v;
  out.compute_planes();
  return out;
}

std::vector<Vec2> convex_hull_2d(std::vector<Vec2> points, double tol) {
  points = dedupe(std::move(points), tol);
  if (points.size() <= 2) return points;
  std::sort(points.begin(), points.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  std::vector<Vec2> hull(2 * points.size());
  std::size_t k = 0;
  auto turn = [&](const Vec2& o, const Vec2& a, const Vec2& b) {
    return left_distance(o, a, b);
  };
  for (std::size_t i = 0; i < points.size(); ++i) {
    while (k >= 2 && turn(hull[k - 2], hull[k - 1], points[i]) <= tol) --k;
    hull[k++] = points[i];
  }
  for (std::size_t i = points.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && turn(hull[k - 2], hull[k - 1], points[i]) <= tol) --k;
    hull[k++] = points[i];
  }
  hull.resize(k - 1);
  if (hull.size() < 3) {
    // Collinear input: keep the two extreme points.
    return dedupe({points.front(), points.back()}, tol);
  }
  return hull;
}

bool point_in_convex_2d(const Vec2& p, const std::vector<Vec2>& polygon,
                        double tol) {
  if (polygon.empty()) return false;
  if (polygon.size() == 1) return (p - polygon[0]).norm() <= tol;
  if (polygon.size() == 2) return point_on_segment(p, polygon[0], polygon[1], tol);
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    if (left_distance(polygon[i], polygon[(i + 1) % polygon.size()], p) < -tol) {
      return false;
    }
  }
  return true;
}

double polygon_area_2d(const std::vector<Vec2>& polygon) {
  double a = 0.0;
  for (std::size_t i = 0; i < polygon.size(); ++i) {
    a += cross2(polygon[i], polygon[(i + 1) % polygon.size()]);
  }
  return 0.5 * a;
}

std::vector<Vec2> intersect_convex_2d(const std::vector<Vec2>& a_in,
                                      const std::vector<Vec2>& b_in,
                                      double tol) {
  std::vector<Vec2> a = convex_hull_2d(a_in, tol);
  std::vector<Vec2> b = convex_hull_2d(b_in, tol);
  if (a.empty() || b.empty()) return {};
  if (a.size() > b.size()) std::swap(a, b);
  if (a.size() == 1) {
    return point_in_convex_2d(a[0], b, tol) ? a : std::vector<Vec2>{};
  }
  if (a.size() == 2 && b.size() == 2) {
    return intersect_segments(a[0], a[1], b[0], b[1], tol);
  }
  if (a.size() == 2) return clip_segment(a[0], a[1], b, tol);
  return convex_hull_2d(clip_polygon(a, b, tol), tol);
}

Vec3 closest_point_on_segment(const Vec3& p, const Vec3& a, const Vec3& b) {
  const Vec3 d = b - a;
  const double len2 = d.squaredNorm();
  if (len2 == 0.0) return a;
  const double t = std::clamp((p - a).dot(d) / len2, 0.0, 1.0);
  return a + t * d;
}

std::pair<Vec3, Vec3> closest_points_between_segments(const Vec3& p1,
                                                      const Vec3& q1,
                                                      const Vec3& p2,
                                                      const Vec3& q2) {
  const Vec3 d1 = q1 - p1;
  const Vec3 d2 = q2 - p2;
  const Vec3 r = p1 - p2;
  const double a = d1.squaredNorm();
  const double e = d2.squaredNorm();
  const double f = d2.dot(r);
  double s = 0.0;
  double t = 0.0;
  if (a <= 1e-300 && e <= 1e-300) return {p1, p2};
  if (a <= 1e-300) {
    t = std::clamp(f / e, 0.0, 1.0);
  } else {
    const double c = d1.dot(r);
    if (e <= 1e-300) {
      s = std::clamp(-c / a, 0.0, 1.0);
    } else {
      const double b = d1.dot(d2);
      const double denom = a * e - b * b;
      s = denom > 1e-300 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
      t = (b * s + f) / e;
      if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
      } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
      }
    }
  }
  return {p1 + s * d1, p2 + t * d2};
}

}  // namespace robustness
