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

#include "robustness/qp.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace robustness {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double inf_norm(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

double max_step(const VectorXd& v, const VectorXd& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

}  // namespace

QpResult solve_qp(const QpProblem& p, const QpSettings& settings) {
  const Eigen::Index n = p.c.size();
  const Eigen::Index me = p.A.rows();
  const Eigen::Index mi = p.G.rows();
  const MatrixXd H = p.H.size() ? p.H : MatrixXd::Zero(n, n);
  const double delta = settings.regularization;

  QpResult result;
  auto objective = [&](const VectorXd& x) { return 0.5 * x.dot(H * x) + p.c.dot(x); };

  const Eigen::Index dim = n + me;
  MatrixXd K(dim, dim);
  auto factor = [&](const VectorXd& w) {
    K.setZero();
    K.topLeftCorner(n, n) = H + p.G.transpose() * w.asDiagonal() * p.G;
    K.topLeftCorner(n, n).diagonal().array() += delta;
    K.topRightCorner(n, me) = p.A.transpose();
    K.bottomLeftCorner(me, n) = p.A;
    K.bottomRightCorner(me, me).diagonal().setConstant(-delta);
    return Eigen::PartialPivLU<MatrixXd>(K);
  };
  auto solve = [&](const Eigen::PartialPivLU<MatrixXd>& lu, const VectorXd& rhs) {
    MatrixXd K0 = K;
    K0.topLeftCorner(n, n).diagonal().array() -= delta;
    K0.bottomRightCorner(me, me).setZero();
    VectorXd sol = lu.solve(rhs);
    for (int it = 0; it < 2; ++it) sol += lu.solve(rhs - K0 * sol);
    return sol;
  };

  // Initial point from a least-squares fit with unit slack weights.
  VectorXd x = VectorXd::Zero(n);
  VectorXd y = VectorXd::Zero(me);
  VectorXd s = VectorXd::Ones(mi);
  VectorXd z = VectorXd::Ones(mi);
  {
    const auto lu = factor(VectorXd::Ones(mi));
    VectorXd rhs(dim);
    rhs << -p.c + p.G.transpose() * p.h, p.b;
    const VectorXd sol = solve(lu, rhs);
    if (sol.allFinite()) x = sol.head(n);
    if (mi > 0) {
      s = p.h - p.G * x;
      const double lo = s.minCoeff();
      if (lo < 1.0) s.array() += 1.0 - lo;
      z = VectorXd::Ones(mi);
    }
  }

  const double scale_b = 1.0 + inf_norm(p.b);
  const double scale_h = 1.0 + inf_norm(p.h);
  const double scale_c = 1.0 + inf_norm(p.c);

  // Keeps the iterate with the smallest scaled KKT violation, since late
  // iterations can lose accuracy once the barrier weights become extreme.
  double best_merit = std::numeric_limits<double>::infinity();
  VectorXd best_x = x, best_y = y, best_z = z;
  int stalled = 0;
  for (int iter = 0; iter < settings.max_iters; ++iter) {
    result.iterations = iter;
    const VectorXd r_d = H * x + p.c + p.A.transpose() * y + p.G.transpose() * z;
    const VectorXd r_p = p.A * x - p.b;
    const VectorXd r_i = p.G * x + s - p.h;
    const double mu = mi > 0 ? s.dot(z) / static_cast<double>(mi) : 0.0;
    if (!x.allFinite() || !std::isfinite(mu)) break;
    const double merit = std::max({inf_norm(r_p) / scale_b, inf_norm(r_i) / scale_h,
                                   inf_norm(r_d) / scale_c, mu});
    if (merit < best_merit) {
      stalled = 0;
      best_merit = merit;
      best_x = x;
      best_y = y;
      best_z = z;
    } else {
      ++stalled;
    }
    if (best_merit <= settings.tol || stalled >= 8 ||
        (best_merit <= settings.accept_tol && stalled >= 2)) {
      break;
    }

    const VectorXd w = (mi > 0) ? VectorXd(z.cwiseQuotient(s)) : VectorXd();
    const auto lu = factor(w);
    auto direction = [&](const VectorXd& r_c, VectorXd& dx, VectorXd& dy,
                         VectorXd& ds, VectorXd& dz) {
      VectorXd rhs(dim);
      const VectorXd t = (z.cwiseProduct(r_i) - r_c).cwiseQuotient(s);
      rhs << -r_d - p.G.transpose() * t, -r_p;
      const VectorXd sol = solve(lu, rhs);
      dx = sol.head(n);
      dy = sol.tail(me);
      ds = -r_i - p.G * dx;
      dz = t + w.cwiseProduct(p.G * dx);
    };

    VectorXd dx, dy, ds, dz;
    direction(s.cwiseProduct(z), dx, dy, ds, dz);
    if (mi > 0) {
      const double alpha_aff = std::min(max_step(s, ds), max_step(z, dz));
      const double mu_aff =
          (s + alpha_aff * ds).dot(z + alpha_aff * dz) / static_cast<double>(mi);
      const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);
      const VectorXd r_c = s.cwiseProduct(z) + ds.cwiseProduct(dz) -
                           VectorXd::Constant(mi, sigma * mu);
      direction(r_c, dx, dy, ds, dz);
    }
    const double alpha =
        mi > 0 ? std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(z, dz)))
               : 1.0;
    x += alpha * dx;
    y += alpha * dy;
    if (mi > 0) {
      s += alpha * ds;
      z += alpha * dz;
    }
  }
  if (!std::isfinite(best_merit)) {
    result.status = QpStatus::kNumericalError;
    return result;
  }
  result.status = best_merit <= settings.accept_tol ? QpStatus::kSolved
                                                     : QpStatus::kMaxIterations;
  result.x = best_x;
  result.y = best_y;
  result.z = best_z;
  result.objective = objective(best_x);
  return result;
}

std::vector<int> independent_rows(const Eigen::MatrixXd& A, double tol) {
  if (A.rows() == 0) return {};
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A.transpose());
  qr.setThreshold(tol);
  std::vector<int> rows;
  for (Eigen::Index i = 0; i < qr.rank(); ++i) {
    rows.push_back(qr.colsPermutation().indices()[i]);
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

}  // namespace robustness
