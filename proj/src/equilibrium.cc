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

#include "robustness/equilibrium.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "robustness/errors.h"
#include "robustness/qp.h"

namespace robustness {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct PointIndex {
  std::size_t interface;
  std::size_t point;
  int slot_a;  // -1 when the body is fixed
  int slot_b;
};

struct Layout {
  std::vector<int> body_slot;
  int free_count = 0;
  std::vector<PointIndex> points;
};

Layout make_layout(const Scene& scene,
                   const std::vector<ContactInterface>& interfaces) {
  Layout layout;
  for (const RigidBody& b : scene.bodies) {
    layout.body_slot.push_back(b.fixed ? -1 : layout.free_count++);
  }
  for (std::size_t i = 0; i < interfaces.size(); ++i) {
    const int a = layout.body_slot[scene.index_of(interfaces[i].body_a)];
    const int b = layout.body_slot[scene.index_of(interfaces[i].body_b)];
    for (std::size_t k = 0; k < interfaces[i].points.size(); ++k) {
      layout.points.push_back({i, k, a, b});
    }
  }
  return layout;
}

const ContactPoint& point_of(const std::vector<ContactInterface>& interfaces,
                             const PointIndex& idx) {
  return interfaces[idx.interface].points[idx.point];
}

// Equilibrium rows: A f = b with f the stacked local contact forces.
void equilibrium_system(const Scene& scene,
                        const std::vector<ContactInterface>& interfaces,
                        const Layout& layout, MatrixXd& A, VectorXd& b) {
  const Eigen::Index P = static_cast<Eigen::Index>(layout.points.size());
  A = MatrixXd::Zero(6 * layout.free_count, 3 * P);
  b = VectorXd::Zero(6 * layout.free_count);
  for (Eigen::Index k = 0; k < P; ++k) {
    const ContactPoint& cp = point_of(interfaces, layout.points[k]);
    Eigen::Matrix<double, 6, 3> w;
    w.topRows<3>() = cp.frame;
    w.bottomRows<3>() = skew(cp.position) * cp.frame;
    if (layout.points[k].slot_b >= 0) {
      A.block<6, 3>(6 * layout.points[k].slot_b, 3 * k) += w;
    }
    if (layout.points[k].slot_a >= 0) {
      A.block<6, 3>(6 * layout.points[k].slot_a, 3 * k) -= w;
    }
  }
  for (std::size_t i = 0; i < scene.bodies.size(); ++i) {
    const int slot = layout.body_slot[i];
    if (slot < 0) continue;
    const RigidBody& body = scene.bodies[i];
    const Vec3 force = body.mass * scene.gravity;
    b.segment<3>(6 * slot) = -force;
    b.segment<3>(6 * slot + 3) = -body.world_com().cross(force);
  }
}

// Friction polygon and unilateral rows for the force block of every point.
void friction_system(const std::vector<ContactInterface>& interfaces,
                     const Layout& layout, int sides, Eigen::Index columns,
                     MatrixXd& G, VectorXd& h) {
  const Eigen::Index P = static_cast<Eigen::Index>(layout.points.size());
  G = MatrixXd::Zero((sides + 1) * P, columns);
  h = VectorXd::Zero((sides + 1) * P);
  for (Eigen::Index k = 0; k < P; ++k) {
    const double mu = interfaces[layout.points[k].interface].mu;
    G.block(k * (sides + 1), 3 * k, sides, 3) = friction_polygon(sides, mu);
    G(k * (sides + 1) + sides, 3 * k + 2) = -1.0;
  }
}

// Smallest L1 norm of A x - b over {G x <= h}.
double min_violation(const MatrixXd& A, const VectorXd& b, const MatrixXd& G,
                     const VectorXd& h, double force_scale) {
  const Eigen::Index n = A.cols();
  const Eigen::Index m = A.rows();
  if (m == 0) return 0.0;
  QpProblem p;
  p.H = MatrixXd::Zero(n + 2 * m, n + 2 * m);
  p.H.topLeftCorner(n, n).diagonal().setConstant(1e-9 / force_scale);
  p.c = VectorXd::Zero(n + 2 * m);
  p.c.tail(2 * m).setOnes();
  p.A = MatrixXd::Zero(m, n + 2 * m);
  p.A.leftCols(n) = A;
  p.A.middleCols(n, m) = MatrixXd::Identity(m, m);
  p.A.rightCols(m) = -MatrixXd::Identity(m, m);
  p.b = b;
  p.G = MatrixXd::Zero(G.rows() + 2 * m, n + 2 * m);
  p.G.topLeftCorner(G.rows(), n) = G;
  p.G.bottomRightCorner(2 * m, 2 * m) = -MatrixXd::Identity(2 * m, 2 * m);
  p.h = VectorXd::Zero(G.rows() + 2 * m);
  p.h.head(G.rows()) = h;
  const QpResult r = solve_qp(p);
  if (r.status == QpStatus::kNumericalError) {
    throw IndeterminateError("feasibility program failed numerically");
  }
  return r.x.tail(2 * m).sum();
}

// Minimizes x' diag(weights) x over {A x = b, G x <= h}.
std::optional<VectorXd> min_norm(const MatrixXd& A, const VectorXd& b,
                                 const MatrixXd& G, const VectorXd& h,
                                 const VectorXd& weights, double tol_force) {
  const std::vector<int> rows = independent_rows(A);
  QpProblem p;
  p.H = (2.0 * weights).asDiagonal();
  p.c = VectorXd::Zero(A.cols());
  p.A.resize(static_cast<Eigen::Index>(rows.size()), A.cols());
  p.b.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p.A.row(static_cast<Eigen::Index>(i)) = A.row(rows[i]);
    p.b[static_cast<Eigen::Index>(i)] = b[rows[i]];
  }
  p.G = G;
  p.h = h;
  const QpResult r = solve_qp(p);
  if (r.status == QpStatus::kNumericalError) return std::nullopt;
  const double eq = A.rows() ? (A * r.x - b).cwiseAbs().maxCoeff() : 0.0;
  const double ineq = G.rows() ? (G * r.x - h).maxCoeff() : 0.0;
  const double scale = 1.0 + (b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
  if (eq > 1e-8 * scale || ineq > tol_force) return std::nullopt;
  return r.x;
}

// Maps stacked body twists to stacked relative contact displacements.
MatrixXd displacement_map(const std::vector<ContactInterface>& interfaces,
                          const Layout& layout) {
  const Eigen::Index P = static_cast<Eigen::Index>(layout.points.size());
  MatrixXd D = MatrixXd::Zero(3 * P, 6 * layout.free_count);
  for (Eigen::Index k = 0; k < P; ++k) {
    const ContactPoint& cp = point_of(interfaces, layout.points[k]);
    Eigen::Matrix<double, 3, 6> m;
    m.leftCols<3>() = cp.frame.transpose();
    m.rightCols<3>() = -cp.frame.transpose() * skew(cp.position);
    if (layout.points[k].slot_b >= 0) D.block<3, 6>(3 * k, 6 * layout.points[k].slot_b) += m;
    if (layout.points[k].slot_a >= 0) D.block<3, 6>(3 * k, 6 * layout.points[k].slot_a) -= m;
  }
  return D;
}

VectorXd fit_twists(const MatrixXd& D, const VectorXd& f, double epsilon,
                    double tol_force) {
  const Eigen::Index P = f.size() / 3;
  const double f_scale = std::max(tol_force, f.cwiseAbs().maxCoeff());
  VectorXd target = VectorXd::Zero(3 * P);
  VectorXd weight = VectorXd::Zero(3 * P);
  for (Eigen::Index k = 0; k < P; ++k) {
    if (f[3 * k + 2] <= 10.0 * tol_force) continue;
    target.segment<2>(3 * k) = -1e-4 * f.segment<2>(3 * k) / f_scale;
    target[3 * k + 2] = -epsilon;
    weight.segment<3>(3 * k).setOnes();
  }
  const Eigen::Index n = D.cols();
  MatrixXd lhs(3 * P + n, n);
  lhs.topRows(3 * P) = weight.asDiagonal() * D;
  lhs.bottomRows(n) = 1e-6 * MatrixXd::Identity(n, n);
  VectorXd rhs = VectorXd::Zero(3 * P + n);
  rhs.head(3 * P) = weight.cwiseProduct(target);
  VectorXd xi = lhs.colPivHouseholderQr().solve(rhs);

  const VectorXd delta = D * xi;
  double factor = 1.0;
  for (Eigen::Index k = 0; k < P; ++k) {
    for (int c = 0; c < 2; ++c) {
      const double d = std::abs(delta[3 * k + c]);
      if (d > 1e-3) factor = std::min(factor, 1e-3 / d);
    }
    const double dn = delta[3 * k + 2];
    if (dn > 1e-5) factor = std::min(factor, 1e-5 / dn);
    if (dn < -1e-3) factor = std::min(factor, -1e-3 / dn);
  }
  return factor * xi;
}

ForceSolution package(const std::vector<ContactInterface>& interfaces,
                      const Layout& layout, const VectorXd& f,
                      const VectorXd& kappa) {
  ForceSolution s;
  s.forces.resize(interfaces.size());
  s.stiffness.resize(interfaces.size());
  for (std::size_t i = 0; i < interfaces.size(); ++i) {
    s.forces[i].resize(interfaces[i].points.size());
    s.stiffness[i].assign(interfaces[i].points.size(), 0.0);
  }
  for (std::size_t k = 0; k < layout.points.size(); ++k) {
    const PointIndex& idx = layout.points[k];
    const Vec3 local = f.segment<3>(3 * static_cast<Eigen::Index>(k));
    ContactForce& cf = s.forces[idx.interface][idx.point];
    cf.fu = local.x();
    cf.fv = local.y();
    cf.fn = local.z();
    cf.contact_condition = contact_condition(local, interfaces[idx.interface].mu);
    if (kappa.size()) s.stiffness[idx.interface][idx.point] = kappa[static_cast<Eigen::Index>(k)];
  }
  s.objective = f.squaredNorm();
  s.status = Stability::kStable;
  return s;
}

}  // namespace

const ContactForce& ForceSolution::at(std::size_t interface, std::size_t point) const {
  if (interface >= forces.size() || point >= forces[interface].size()) {
    throw PreconditionError("missing force entry");
  }
  return forces[interface][point];
}

double contact_condition(const Vec3& f, double mu) {
  return mu * std::abs(f.z()) - std::hypot(f.x(), f.y());
}

MatrixXd friction_polygon(int sides, double mu) {
  MatrixXd C(sides, 3);
  const double apothem = std::cos(std::numbers::pi / sides);
  for (int k = 0; k < sides; ++k) {
    const double theta = 2.0 * std::numbers::pi * k / sides;
    C(k, 0) = std::cos(theta);
    C(k, 1) = std::sin(theta);
    C(k, 2) = -mu * apothem;
  }
  return C;
}

double polygon_coverage(int sides) {
  // Unit normal force and unit friction: row k reads a_k . t <= r_k.
  const MatrixXd C = friction_polygon(sides, 1.0);
  std::vector<Vec2> corners;
  for (int k = 0; k < sides; ++k) {
    const int j = (k + 1) % sides;
    Eigen::Matrix2d m;
    m << C(k, 0), C(k, 1), C(j, 0), C(j, 1);
    corners.push_back(m.partialPivLu().solve(Vec2(-C(k, 2), -C(j, 2))));
  }
  return polygon_area_2d(corners) / std::numbers::pi;
}

ForceSolution solve_forces(const Scene& scene,
                           const std::vector<ContactInterface>& interfaces,
                           const SolverConfig& config) {
  if (config.polygon_sides < 3) {
    throw PreconditionError("friction polygon needs at least 3 sides");
  }
  if (!(config.tol_force > 0.0) || !(config.epsilon > 0.0) || config.max_iters < 1) {
    throw PreconditionError("solver tolerances must be positive");
  }
  const Layout layout = make_layout(scene, interfaces);
  const Eigen::Index P = static_cast<Eigen::Index>(layout.points.size());
  MatrixXd A;
  VectorXd b;
  equilibrium_system(scene, interfaces, layout, A, b);
  MatrixXd G;
  VectorXd h;
  friction_system(interfaces, layout, config.polygon_sides, 3 * P, G, h);

  const double force_scale = std::max(1.0, b.size() ? b.cwiseAbs().maxCoeff() : 1.0);
  const double violation = min_violation(A, b, G, h, force_scale);
  if (violation > 1e-6 * force_scale) {
    ForceSolution s;
    s.mode = config.mode;
    s.status = Stability::kUnstable;
    s.infeasibility = violation;
    return s;
  }

  const auto relaxed = min_norm(A, b, G, h, VectorXd::Ones(3 * P), config.tol_force);
  if (!relaxed) throw IndeterminateError("force program did not converge");
  if (config.mode == SolveMode::kRelaxed) {
    ForceSolution s = package(interfaces, layout, *relaxed, VectorXd());
    s.infeasibility = violation;
    s.mode = SolveMode::kRelaxed;
    s.iterations = 1;
    for (const RigidBody& body : scene.bodies) {
      if (!body.fixed) s.twists[body.id] = VirtualTwist{};
    }
    return s;
  }

  // Successive convexification: freeze displacements, solve for forces and
  // stiffnesses, refit twists, repeat.
  const MatrixXd D = displacement_map(interfaces, layout);
  VectorXd f = *relaxed;
  VectorXd kappa = VectorXd::Zero(P);
  VectorXd xi = VectorXd::Zero(6 * layout.free_count);
  for (int iter = 1; iter <= config.max_iters; ++iter) {
    xi = fit_twists(D, f, config.epsilon, config.tol_force);
    const VectorXd delta = D * xi;

    const Eigen::Index n = 4 * P;
    std::vector<Eigen::VectorXd> extra_rows;
    // Lifted contacts carry no force and non-sliding contacts no stiffness;
    // those variables are dropped from the program.
    std::vector<bool> pinned(n, false);
    for (Eigen::Index k = 0; k < P; ++k) {
      const Vec3 d = delta.segment<3>(3 * k);
      const double dt = std::hypot(d.x(), d.y());
      if (d.z() > 0.0) {
        for (int c = 0; c < 3; ++c) pinned[3 * k + c] = true;
        pinned[3 * P + k] = true;
        continue;
      }
      if (dt <= 1e-12) pinned[3 * P + k] = true;
      for (int c = 0; c < 2; ++c) {
        VectorXd row = VectorXd::Zero(n);
        row[3 * k + c] = 1.0;
        if (dt > 1e-12) row[3 * P + k] = d[c];
        extra_rows.push_back(row);
      }
    }
    std::vector<Eigen::Index> keep;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!pinned[j]) keep.push_back(j);
    }
    const Eigen::Index nk = static_cast<Eigen::Index>(keep.size());
    auto reduce = [&](const MatrixXd& M) {
      MatrixXd out(M.rows(), nk);
      for (Eigen::Index j = 0; j < nk; ++j) out.col(j) = M.col(keep[j]);
      return out;
    };
    auto nonzero_rows = [](const MatrixXd& M) {
      std::vector<Eigen::Index> rows;
      for (Eigen::Index r = 0; r < M.rows(); ++r) {
        if (M.row(r).cwiseAbs().maxCoeff() > 0.0) rows.push_back(r);
      }
      return rows;
    };

    MatrixXd Afull = MatrixXd::Zero(A.rows() + static_cast<Eigen::Index>(extra_rows.size()), n);
    VectorXd bfull = VectorXd::Zero(Afull.rows());
    Afull.topLeftCorner(A.rows(), 3 * P) = A;
    bfull.head(A.rows()) = b;
    for (std::size_t r = 0; r < extra_rows.size(); ++r) {
      Afull.row(A.rows() + static_cast<Eigen::Index>(r)) = extra_rows[r];
    }
    MatrixXd Gfull = MatrixXd::Zero(G.rows() + P, n);
    VectorXd hfull = VectorXd::Zero(G.rows() + P);
    Gfull.topLeftCorner(G.rows(), 3 * P) = G;
    hfull.head(G.rows()) = h;
    Gfull.bottomRightCorner(P, P) = -MatrixXd::Identity(P, P);

    const MatrixXd Ar = reduce(Afull);
    const MatrixXd Gr = reduce(Gfull);
    const std::vector<Eigen::Index> eq_rows = nonzero_rows(Ar);
    const std::vector<Eigen::Index> in_rows = nonzero_rows(Gr);
    MatrixXd Af(static_cast<Eigen::Index>(eq_rows.size()), nk);
    VectorXd bf(Af.rows());
    for (std::size_t r = 0; r < eq_rows.size(); ++r) {
      Af.row(static_cast<Eigen::Index>(r)) = Ar.row(eq_rows[r]);
      bf[static_cast<Eigen::Index>(r)] = bfull[eq_rows[r]];
    }
    MatrixXd Gf(static_cast<Eigen::Index>(in_rows.size()), nk);
    VectorXd hf(Gf.rows());
    for (std::size_t r = 0; r < in_rows.size(); ++r) {
      Gf.row(static_cast<Eigen::Index>(r)) = Gr.row(in_rows[r]);
      hf[static_cast<Eigen::Index>(r)] = hfull[in_rows[r]];
    }

    if (min_violation(Af, bf, Gf, hf, force_scale) > 1e-6 * force_scale) {
      throw IndeterminateError("full-mode iterate became infeasible");
    }
    VectorXd weights = VectorXd::Ones(nk);
    for (Eigen::Index j = 0; j < nk; ++j) {
      if (keep[j] >= 3 * P) weights[j] = 1e-12;
    }
    const auto reduced = min_norm(Af, bf, Gf, hf, weights, config.tol_force);
    if (!reduced) throw IndeterminateError("full-mode force program did not converge");
    auto sol = std::optional<VectorXd>(VectorXd::Zero(n));
    for (Eigen::Index j = 0; j < nk; ++j) (*sol)[keep[j]] = (*reduced)[j];
    const VectorXd f_next = sol->head(3 * P);
    kappa = sol->tail(P).cwiseMax(0.0);
    const double change = P ? (f_next - f).cwiseAbs().maxCoeff() : 0.0;
    f = f_next;
    if (change < 1e-6) {
      ForceSolution s = package(interfaces, layout, f, kappa);
      s.infeasibility = violation;
      s.mode = SolveMode::kFull;
      s.iterations = iter;
      for (std::size_t i = 0; i < scene.bodies.size(); ++i) {
        const int slot = layout.body_slot[i];
        if (slot < 0) continue;
        s.twists[scene.bodies[i].id] = {xi.segment<3>(6 * slot), xi.segment<3>(6 * slot + 3)};
      }
      return s;
    }
  }
  throw IndeterminateError("full-mode iteration did not converge within " +
                           std::to_string(config.max_iters) + " iterations");
}

std::vector<double> equilibrium_residuals(
    const Scene& scene, const std::vector<ContactInterface>& interfaces,
    const ForceSolution& solution) {
  std::vector<Vec6> net(scene.bodies.size(), Vec6::Zero());
  for (std::size_t i = 0; i < scene.bodies.size(); ++i) {
    const RigidBody& body = scene.bodies[i];
    const Vec3 force = body.mass * scene.gravity;
    net[i].head<3>() = force;
    net[i].tail<3>() = body.world_com().cross(force);
  }
  for (std::size_t i = 0; i < interfaces.size(); ++i) {
    const std::size_t a = scene.index_of(interfaces[i].body_a);
    const std::size_t b = scene.index_of(interfaces[i].body_b);
    for (std::size_t k = 0; k < interfaces[i].points.size(); ++k) {
      const ContactPoint& cp = interfaces[i].points[k];
      const Vec3 force = cp.frame * solution.at(i, k).local();
      Vec6 w;
      w << force, cp.position.cross(force);
      net[b] += w;
      net[a] -= w;
    }
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < scene.bodies.size(); ++i) {
    out.push_back(scene.bodies[i].fixed ? 0.0 : net[i].norm());
  }
  return out;
}

std::vector<Vec3> contact_displacements(
    const Scene& scene, const std::vector<ContactInterface>& interfaces,
    const std::map<std::string, VirtualTwist>& twists) {
  auto motion = [&](const std::string& id, const Vec3& p) -> Vec3 {
    if (scene.body(id).fixed) return Vec3::Zero();
    const auto it = twists.find(id);
    if (it == twists.end()) return Vec3::Zero();
    return it->second.linear + it->second.angular.cross(p);
  };
  std::vector<Vec3> out;
  for (const ContactInterface& iface : interfaces) {
    for (const ContactPoint& cp : iface.points) {
      const Vec3 rel = motion(iface.body_b, cp.position) - motion(iface.body_a, cp.position);
      out.push_back(cp.frame.transpose() * rel);
    }
  }
  return out;
}

}  // namespace robustness
