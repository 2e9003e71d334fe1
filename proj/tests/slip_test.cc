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

#include "robustness/slip.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "fixtures.h"
#include "robustness/contact_graph.h"
#include "robustness/errors.h"

namespace robustness {
namespace {

// Contact condition without std::hypot, for fast dense scans.
double c_of(const Vec3& f, double mu, const Vec3& e, double s) {
  const double x = f.x() + s * e.x();
  const double y = f.y() + s * e.y();
  return mu * std::abs(f.z() + s * e.z()) - std::sqrt(x * x + y * y);
}

struct GridResult {
  double first_negative;  // +inf when c stays nonnegative on the grid
  double argmax;
};

// Dense scan of c over [0, 100]; the maximum is taken up to the first
// crossing.
GridResult grid_search(const Vec3& f, double mu, const Vec3& e) {
  constexpr double kStep = 1e-4;
  constexpr int kCount = 1000000;
  GridResult r{kInfinity, 0.0};
  double best = c_of(f, mu, e, 0.0);
  for (int i = 1; i <= kCount; ++i) {
    const double s = i * kStep;
    const double c = c_of(f, mu, e, s);
    if (c < 0.0) {
      r.first_negative = s;
      break;
    }
    if (c > best) {
      best = c;
      r.argmax = s;
    }
  }
  return r;
}

struct Sample {
  Vec3 f;
  double mu;
  Vec3 e;
};

Sample random_sample(std::mt19937& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal;
  Sample s;
  s.mu = 0.1 + 1.1 * unit(rng);
  const double fn = 0.1 + 9.9 * unit(rng);
  const double th = 2 * M_PI * unit(rng);
  const double ft = s.mu * fn * unit(rng);
  s.f = Vec3(ft * std::cos(th), ft * std::sin(th), fn);
  s.e = Vec3(normal(rng), normal(rng), normal(rng)).normalized();
  return s;
}

TEST(AnalyzeContact, TangentialPush) {
  const SlipAnalysis a = analyze_contact(Vec3(0, 0, 10), 0.5, Vec3(1, 0, 0));
  EXPECT_NEAR(a.d, -1.0, 1e-15);
  EXPECT_NEAR(a.n, 5.0, 1e-12);
  ASSERT_TRUE(a.s_m.has_value());
  EXPECT_NEAR(*a.s_m, 5.0, 1e-12);
  EXPECT_NEAR(a.sr_slip, 5.0, 1e-12);
  EXPECT_EQ(a.s_star, 0.0);
}

TEST(AnalyzeContact, NormalPushNeverSlips) {
  const SlipAnalysis a = analyze_contact(Vec3(0, 0, 10), 0.5, Vec3(0, 0, 1));
  ASSERT_TRUE(a.s_m.has_value());
  EXPECT_NEAR(*a.s_m, -10.0, 1e-12);
  EXPECT_TRUE(std::isinf(a.sr_slip));
  EXPECT_TRUE(std::isinf(a.s_star));
  EXPECT_NEAR(a.dcds0, 0.5, 1e-15);
}

TEST(AnalyzeContact, PushAgainstTangentialLoad) {
  const Vec3 f(4, 0, 10);
  const Vec3 e(-1, 0, 0);
  const SlipAnalysis a = analyze_contact(f, 0.5, e);
  EXPECT_GT(a.s_star, 0.0);
  EXPECT_TRUE(std::isfinite(a.s_star));
  EXPECT_NEAR(a.s_star, 4.0, 1e-12);
  EXPECT_NEAR(a.sr_slip, 9.0, 1e-12);
  const GridResult g = grid_search(f, 0.5, e);
  EXPECT_NEAR(a.s_star, g.argmax, 1e-4 + 1e-12);
  EXPECT_NEAR(a.sr_slip, g.first_negative, 1e-4 + 1e-12);
}

TEST(AnalyzeContact, Errors) {
  EXPECT_THROW(analyze_contact(Vec3(0, 0, 10), 0.5, Vec3(2, 0, 0)), PreconditionError);
  EXPECT_THROW(analyze_contact(Vec3(6, 0, 10), 0.5, Vec3(1, 0, 0)), PreconditionError);
}

TEST(AnalyzeContact, LinearCase) {
  // mu e_n = |e_t| makes c linear in s.
  const Vec3 e = Vec3(0.5, 0, 1).normalized();
  const SlipAnalysis a = analyze_contact(Vec3(-1, 0, 10), 0.5, e);
  EXPECT_LT(std::abs(a.d), 1e-12);
  ASSERT_TRUE(a.s_m.has_value());
  EXPECT_NEAR(c_of(Vec3(-1, 0, 10), 0.5, e, *a.s_m), 0.0, 1e-9);
}

TEST(AnalyzeContact, RandomAgainstGrid) {
  std::mt19937 rng(7);
  int branches[2][2] = {{0, 0}, {0, 0}};
  for (int trial = 0; trial < 150; ++trial) {
    const Sample smp = random_sample(rng);
    const SlipAnalysis a = analyze_contact(smp.f, smp.mu, smp.e);
    const double tol = 1e-9 * (1 + smp.mu * smp.f.norm());
    if (a.s_m) EXPECT_LE(std::abs(c_of(smp.f, smp.mu, smp.e, *a.s_m)), tol);
    if (a.s_p) EXPECT_LE(std::abs(c_of(smp.f, smp.mu, smp.e, *a.s_p)), tol);
    EXPECT_GE(a.sr_slip, 0.0);
    EXPECT_GE(a.s_star, 0.0);
    ++branches[a.d > 0][a.dcds0 > 0];

    const GridResult g = grid_search(smp.f, smp.mu, smp.e);
    if (a.sr_slip < 99.0) {
      EXPECT_NEAR(a.sr_slip, g.first_negative, 1e-4 + 1e-9) << trial;
    } else if (a.sr_slip > 101.0) {
      EXPECT_TRUE(std::isinf(g.first_negative)) << trial;
    }
    if (a.s_star < 99.0) {
      EXPECT_NEAR(a.s_star, g.argmax, 1e-4 + 1e-9) << trial;
    } else if (a.s_star > 101.0 && std::isinf(g.first_negative)) {
      EXPECT_GE(g.argmax, 100.0 - 1e-4) << trial;
    }
  }
  for (auto& row : branches) {
    for (int count : row) EXPECT_GT(count, 0);
  }
}

TEST(SlipDerivative, Examples) {
  EXPECT_NEAR(slip_derivative(Vec3(0, 0, 10), 0.5, Vec3(0, 0, 1), 0.0), 0.5, 1e-15);
  EXPECT_NEAR(slip_derivative(Vec3(3, 0, 10), 0.5, Vec3(1, 0, 0), 0.0), -1.0, 1e-15);
  // Vanishing tangential force uses the right-hand limit.
  const Vec3 e = Vec3(1, 0, 1).normalized();
  EXPECT_NEAR(slip_derivative(Vec3(0, 0, 10), 0.5, e, 0.0), (0.5 - 1.0) / std::sqrt(2.0),
              1e-15);
}

TEST(SlipDerivative, MatchesFiniteDifferences) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Sample smp = random_sample(rng);
    const double s = 5.0 * unit(rng);
    const double h = 1e-6;
    const double fd = (contact_condition_at(smp.f, smp.mu, smp.e, s + h) -
                       contact_condition_at(smp.f, smp.mu, smp.e, s - h)) / (2 * h);
    worst = std::max(worst, std::abs(fd - slip_derivative(smp.f, smp.mu, smp.e, s)));
  }
  EXPECT_LE(worst, 1e-4);
}

TEST(SlipDerivative, Concave) {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    const Sample smp = random_sample(rng);
    const double s = 5.0 * unit(rng);
    if (smp.f.z() + s * smp.e.z() < 1e-2) continue;
    const double h = 1e-3;
    const double second = (contact_condition_at(smp.f, smp.mu, smp.e, s + h) -
                           2 * contact_condition_at(smp.f, smp.mu, smp.e, s) +
                           contact_condition_at(smp.f, smp.mu, smp.e, s - h)) / (h * h);
    EXPECT_LE(second, 1e-5);
  }
}

TEST(AnalyzeContact, ScalingCovariance) {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Sample smp = random_sample(rng);
    const SlipAnalysis a = analyze_contact(smp.f, smp.mu, smp.e);
    const SlipAnalysis b = analyze_contact(3.0 * smp.f, smp.mu, smp.e);
    ASSERT_EQ(a.s_m.has_value(), b.s_m.has_value());
    if (a.s_m) EXPECT_NEAR(*b.s_m, 3.0 * *a.s_m, 1e-9 * (1 + std::abs(*b.s_m)));
    if (a.s_p) EXPECT_NEAR(*b.s_p, 3.0 * *a.s_p, 1e-9 * (1 + std::abs(*b.s_p)));
    if (std::isfinite(a.sr_slip)) {
      EXPECT_NEAR(b.sr_slip, 3.0 * a.sr_slip, 1e-9 * (1 + b.sr_slip));
    } else {
      EXPECT_TRUE(std::isinf(b.sr_slip));
    }
  }
}

TEST(InterfaceCapacity, CubeOnFloor) {
  const Scene s = testing::cube_on_floor(0.8);
  const auto ifaces = detect_contacts(s);
  const ForceSolution sol = solve_forces(s, ifaces);
  ASSERT_TRUE(sol.stable());
  EXPECT_NEAR(interface_capacity(ifaces[0], 0, sol, Vec3::UnitX(), false), 7.848, 1e-6);
  EXPECT_NEAR(interface_capacity(ifaces[0], 0, sol, Vec3::UnitY(), true), 7.848, 1e-6);
  // Pressing down never slips.
  EXPECT_TRUE(std::isinf(interface_capacity(ifaces[0], 0, sol, -Vec3::UnitZ(), false)));
}

TEST(InterfaceCapacity, SumOfPoints) {
  const Scene s = testing::cube_on_slant(0.3, 0.8);
  const auto ifaces = detect_contacts(s);
  const ForceSolution sol = solve_forces(s, ifaces);
  ASSERT_TRUE(sol.stable());
  const Vec3 dir = Vec3(1, 1, 0).normalized();
  for (bool downstream_b : {true, false}) {
    double sum = 0.0;
    const auto pts = oriented_points(ifaces[0], 0, sol, dir, downstream_b);
    for (const auto& p : pts) sum += analyze_contact(p.force, p.mu, p.direction).sr_slip;
    EXPECT_NEAR(interface_capacity(ifaces[0], 0, sol, dir, downstream_b), sum, 1e-12);
  }
}

TEST(InterfaceCapacity, OrientationPreservesCondition) {
  const Scene s = testing::cube_on_slant(0.3, 0.8);
  const auto ifaces = detect_contacts(s);
  const ForceSolution sol = solve_forces(s, ifaces);
  const Vec3 dir = Vec3(0.3, -1, 0.2).normalized();
  const auto on_b = oriented_points(ifaces[0], 0, sol, dir, true);
  const auto on_a = oriented_points(ifaces[0], 0, sol, dir, false);
  for (std::size_t k = 0; k < on_b.size(); ++k) {
    EXPECT_NEAR(contact_condition_at(on_a[k].force, 0.8, on_a[k].direction, 0.0),
                contact_condition_at(on_b[k].force, 0.8, on_b[k].direction, 0.0), 1e-12);
    EXPECT_NEAR(on_a[k].direction.z(), -on_b[k].direction.z(), 1e-12);
  }
}

TEST(GlobalSlipMaximizer, SingleInterface) {
  const OrientedPoint p{Vec3(4, 0, 10), Vec3(-1, 0, 0), 0.5};
  const SlipMaximizer m = global_slip_maximizer({{p}});
  EXPECT_NEAR(m.s, 4.0, 1e-12);
  EXPECT_FALSE(m.unbounded);
}

TEST(GlobalSlipMaximizer, TwoInterfacesAgainstGrid) {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::vector<OrientedPoint>> ifaces(2);
    std::vector<double> candidates = {0.0};
    for (auto& iface : ifaces) {
      for (int k = 0; k < 2; ++k) {
        const Sample smp = random_sample(rng);
        iface.push_back(OrientedPoint{smp.f, smp.e, smp.mu});
        const SlipAnalysis a = analyze_contact(smp.f, smp.mu, smp.e);
        candidates.push_back(std::min(a.sr_slip, a.s_star));
      }
    }
    const SlipMaximizer m = global_slip_maximizer(ifaces);
    if (m.unbounded) continue;
    auto total = [&](double s) {
      double sum = 0.0;
      for (const auto& iface : ifaces) {
        for (const auto& p : iface) sum += c_of(p.force, p.mu, p.direction, s);
      }
      return sum;
    };
    bool is_candidate = false;
    for (double c : candidates) {
      if (c == m.s) is_candidate = true;
      if (std::isfinite(c)) EXPECT_GE(m.value, total(c) - 1e-12);
    }
    EXPECT_TRUE(is_candidate);
    EXPECT_NEAR(m.value, total(m.s), 1e-12);
  }
}

TEST(GlobalSlipMaximizer, Unbounded) {
  const OrientedPoint p{Vec3(0, 0, 10), Vec3(0, 0, 1), 0.5};
  const SlipMaximizer m = global_slip_maximizer({{p}, {p}});
  EXPECT_TRUE(m.unbounded);
  EXPECT_TRUE(std::isinf(m.s));
}

}  // namespace
}  // namespace robustness
