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

#ifndef ROBUSTNESS_QP_H_
#define ROBUSTNESS_QP_H_

#include <vector>

#include <Eigen/Dense>

namespace robustness {

// minimize 0.5 x'Hx + c'x  subject to  A x = b,  G x <= h.
struct QpProblem {
  Eigen::MatrixXd H;
  Eigen::VectorXd c;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  Eigen::MatrixXd G;
  Eigen::VectorXd h;
};

struct QpSettings {
  int max_iters = 200;
  double tol = 1e-10;         // stop once the scaled KKT violation is below
  double accept_tol = 1e-8;   // report success when the best iterate is below
  double regularization = 1e-11;
};

enum class QpStatus { kSolved, kMaxIterations, kNumericalError };

struct QpResult {
  QpStatus status = QpStatus::kNumericalError;
  Eigen::VectorXd x;
  Eigen::VectorXd y;  // equality multipliers
  Eigen::VectorXd z;  // inequality multipliers
  double objective = 0.0;
  int iterations = 0;
};

// Primal-dual interior point method with Mehrotra predictor-corrector steps.
// H must be positive semidefinite. A must have full row rank.
QpResult solve_qp(const QpProblem& problem, const QpSettings& settings = {});

// Indices of a maximal linearly independent subset of the rows of A.
std::vector<int> independent_rows(const Eigen::MatrixXd& A, double tol = 1e-10);

}  // namespace robustness

#endif  // ROBUSTNESS_QP_H_
