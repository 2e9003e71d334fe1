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

#include "robustness/topple.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "robustness/errors.h"
#include "robustness/qp.h"

namespace robustness {
namespace {

constexpr std::size_t kDefaultFreeBodyLimit = 12;

std::vector<Vec3> deduplicate(const std::vector<Vec3>& points, double tol) {
  std::vector<Vec3> out;
  for (const Vec3& p : points) {
    bool seen = false;
    for (const Vec3& q : out) seen = seen || (p - q).norm() <= tol;
    if (!seen) out.push_back(p);
  }
  return out;
}

void add_edge(std::vector<TopplingAxis>& axes, const Vec3& s, const Vec3& t) {
  const Vec3 d = (t - s).normalized();
  axes.push_back({s, d, t});
  axes.push_back({s, -d, t});
}

}  // namespace

bool SuperObject::contains_body(std::size_t body) const {
  return std::find(bodies.begin(), bodies.end(), body) != bodies.end();
}

Vec6 TopplingAxis::twist() const {
  Vec6 t;
  t << source.cross(direction), direction;
  return t;
}

SuperObject make_super_object(const Scene& scene, const ContactInterfaceGraph& graph,
                              const std::vector<ContactInterface>& interfaces,
                              std::vector<int> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  SuperObject so;
  so.nodes = nodes;
  Vec3 moment = Vec3::Zero();
  for (int node : nodes) {
    if (node == ContactInterfaceGraph::kFixedNode) {
      throw PreconditionError("a super-object cannot contain a fixed body");
    }
    const std::size_t body = graph.body_of(node);
    so.bodies.push_back(body);
    so.mass += scene.bodies[body].mass;
    moment += scene.bodies[body].mass * scene.bodies[body].world_com();
  }
  so.com = moment / so.mass;
  auto inside = [&](int node) {
    return std::binary_search(nodes.begin(), nodes.end(), node);
  };
  const Mat3 flip = Eigen::Vector3d(1.0, -1.0, -1.0).asDiagonal();
  for (const CigEdge& e : graph.edges) {
    const bool in_a = inside(e.u);
    const bool in_b = inside(e.v);
    if (in_a == in_b) continue;
    const ContactInterface& iface = interfaces[e.interface];
    for (std::size_t k = 0; k < iface.points.size(); ++k) {
      const ContactPoint& cp = iface.points[k];
      so.boundary.push_back(
          {cp.position, in_b ? cp.frame : Mat3(cp.frame * flip), e.interface, k});
    }
  }
  return so;
}

std::vector<SuperObject> enumerate_super_objects(
    const Scene& scene, const ContactInterfaceGraph& graph,
    const std::vector<ContactInterface>& interfaces, std::optional<std::size_t> cap) {
  const int n = graph.node_count();
  const std::size_t free_count = static_cast<std::size_t>(n - 1);
  if (!cap && free_count > kDefaultFreeBodyLimit) {
    throw PreconditionError("scene has " + std::to_string(free_count) +
                            " free bodies; super-object enumeration needs an explicit cap");
  }
  if (cap && *cap == 0) throw PreconditionError("super-object cap must be at least 1");
  std::vector<std::vector<int>> adjacent(n);
  for (const CigEdge& e : graph.edges) {
    if (e.u == ContactInterfaceGraph::kFixedNode || e.v == ContactInterfaceGraph::kFixedNode ||
        e.u == e.v) {
      continue;
    }
    adjacent[e.u].push_back(e.v);
    adjacent[e.v].push_back(e.u);
  }
  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> queue;
  auto push = [&](std::vector<int> nodes) {
    std::sort(nodes.begin(), nodes.end());
    if (!seen.insert(nodes).second) return;
    if (cap && seen.size() > *cap) {
      throw PreconditionError("super-object count exceeds the cap of " +
                              std::to_string(*cap) + "; raise the cap");
    }
    queue.push_back(std::move(nodes));
  };
  for (int v = 1; v < n; ++v) push({v});
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::vector<int> current = queue[head];
    for (int v : current) {
      for (int w : adjacent[v]) {
        if (std::binary_search(current.begin(), current.end(), w)) continue;
        std::vector<int> grown = current;
        grown.push_back(w);
        push(std::move(grown));
      }
    }
  }
  std::vector<SuperObject> out;
  for (const auto& nodes : seen) {
    out.push_back(make_super_object(scene, graph, interfaces, nodes));
  }
  return out;
}

Eigen::MatrixXd grasp_matrix(const std::vector<BoundaryContact>& contacts) {
  Eigen::MatrixXd G(6, 5 * contacts.size());
  for (std::size_t i = 0; i < contacts.size(); ++i) {
    const Mat3& R = contacts[i].frame;
    const Mat3 PR = skew(contacts[i].position) * R;
    auto block = G.middleCols(5 * i, 5);
    block.topLeftCorner(3, 3) = R;
    block.topRightCorner(3, 2) = -R.leftCols(2);
    block.bottomLeftCorner(3, 3) = PR;
    block.bottomRightCorner(3, 2) = -PR.leftCols(2);
  }
  return G;
}

bool form_closure(const SuperObject& super) {
  if (super.boundary.empty()) return false;
  const Eigen::MatrixXd G = grasp_matrix(super.boundary);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(G);
  lu.setThreshold(1e-10);
  if (lu.rank() < 6) return false;
  // Gx = 0 with x >= 1 is feasible iff min |Gx|^2 over x >= 1 vanishes.
  const Eigen::Index m = G.cols();
  QpProblem qp;
  qp.H = G.transpose() * G;
  qp.H.diagonal().array() += 1e-12;
  qp.c = Eigen::VectorXd::Zero(m);
  qp.A = Eigen::MatrixXd(0, m);
  qp.b = Eigen::VectorXd(0);
  qp.G = -Eigen::MatrixXd::Identity(m, m);
  qp.h = -Eigen::VectorXd::Ones(m);
  const QpResult r = solve_qp(qp);
  if (r.status == QpStatus::kNumericalError) return false;
  const double residual = (G * r.x).cwiseAbs().maxCoeff();
  return residual <= 1e-7 * (1.0 + r.x.cwiseAbs().maxCoeff());
}

std::vector<TopplingAxis> candidate_axes(const std::vector<Vec3>& points) {
  std::vector<TopplingAxis> axes;
  if (points.empty()) return axes;
  double extent = 0.0;
  for (const Vec3& p : points) extent = std::max(extent, (p - points[0]).norm());
  const double tol = 1e-9 * (1.0 + extent);
  const std::vector<Vec3> pts = deduplicate(points, tol);
  if (pts.size() < 2) return axes;

  Vec3 mean = Vec3::Zero();
  for (const Vec3& p : pts) mean += p;
  mean /= static_cast<double>(pts.size());
  Eigen::MatrixXd centered(pts.size(), 3);
  for (std::size_t i = 0; i < pts.size(); ++i) centered.row(i) = (pts[i] - mean).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered, Eigen::ComputeFullV);
  const Eigen::Vector3d sv = svd.singularValues();

  if (sv[1] <= tol) {
    // Collinear: the extreme points form the only edge.
    const Vec3 d = svd.matrixV().col(0);
    auto [lo, hi] = std::minmax_element(pts.begin(), pts.end(), [&](const Vec3& a, const Vec3& b) {
      return a.dot(d) < b.dot(d);
    });
    add_edge(axes, *lo, *hi);
    return axes;
  }
  if (sv[2] <= tol) {
    const PlaneFrame plane = PlaneFrame::from_normal(svd.matrixV().col(2), mean);
    std::vector<Vec2> flat;
    for (const Vec3& p : pts) flat.push_back(plane.project(p));
    const std::vector<Vec2> hull = convex_hull_2d(flat, tol);
    auto lift = [&](const Vec2& q) {
      for (std::size_t i = 0; i < flat.size(); ++i) {
        if ((flat[i] - q).norm() <= tol) return pts[i];
      }
      return plane.lift(q);
    };
    if (hull.size() == 2) {
      add_edge(axes, lift(hull[0]), lift(hull[1]));
      return axes;
    }
    for (std::size_t i = 0; i < hull.size(); ++i) {
      add_edge(axes, lift(hull[i]), lift(hull[(i + 1) % hull.size()]));
    }
    return axes;
  }
  const ConvexPolyhedron hull = ConvexPolyhedron::hull(pts);
  for (const auto& [i, j] : hull.edges()) {
    add_edge(axes, hull.vertices()[i], hull.vertices()[j]);
  }
  return axes;
}

std::vector<TopplingAxis> valid_toppling_axes(const SuperObject& super, double eps) {
  if (form_closure(super)) return {};
  std::vector<Vec3> points;
  for (const BoundaryContact& c : super.boundary) points.push_back(c.position);
  std::vector<TopplingAxis> valid;
  for (const TopplingAxis& axis : candidate_axes(points)) {
    bool ok = true;
    for (const BoundaryContact& c : super.boundary) {
      const Vec3 r = c.position - axis.source;
      const Vec3 off_axis = r - r.dot(axis.direction) * axis.direction;
      if (off_axis.norm() < 1e-9) continue;
      const double normal_motion = c.frame.col(2).dot(axis.direction.cross(r));
      if (!(normal_motion > eps)) {
        ok = false;
        break;
      }
    }
    if (ok) valid.push_back(axis);
  }
  return valid;
}

double gravity_torque(const SuperObject& super, const TopplingAxis& axis,
                      const Vec3& gravity) {
  return (super.com - axis.source).cross(super.mass * gravity).dot(axis.direction);
}

double external_torque(const TopplingAxis& axis, const Vec3& point, const Vec3& direction) {
  return (point - axis.source).cross(direction).dot(axis.direction);
}

double axis_robustness(double tau_g, double tau_e) {
  if (tau_g >= 0.0) return 0.0;
  if (tau_e < 1e-12) return kInfinity;
  return -tau_g / tau_e;
}

double sr_top(const Vec3& point, const Vec3& direction,
              const std::vector<const SuperObject*>& supers,
              const std::vector<std::vector<TopplingAxis>>& axes, const Vec3& gravity) {
  if (supers.size() != axes.size()) {
    throw PreconditionError("one axis list is required per super-object");
  }
  double best = kInfinity;
  for (std::size_t i = 0; i < supers.size(); ++i) {
    for (const TopplingAxis& a : axes[i]) {
      best = std::min(best, axis_robustness(gravity_torque(*supers[i], a, gravity),
                                            external_torque(a, point, direction)));
    }
  }
  return best;
}

ToppleImprovement topple_improvement(const std::vector<double>& tau_e,
                                     const std::vector<double>& tau_g, double s_eval) {
  if (tau_e.size() != tau_g.size()) {
    throw PreconditionError("torque lists differ in length");
  }
  double ee = 0.0;
  double ge = 0.0;
  for (std::size_t i = 0; i < tau_e.size(); ++i) {
    ee += tau_e[i] * tau_e[i];
    ge += tau_g[i] * tau_e[i];
  }
  ToppleImprovement out;
  if (ee == 0.0) return out;
  out.improvement = 2.0 * ge - 2.0 * s_eval * ee;
  out.s_least_squares = ge / ee;
  out.s_star = std::max(0.0, out.s_least_squares);
  return out;
}

}  // namespace robustness
