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

// Acceptance suite: one PASS or FAIL line per primary criterion. Exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.h"
#include "robustness/assessment.h"
#include "robustness/contact_graph.h"
#include "robustness/contacts.h"
#include "robustness/equilibrium.h"
#include "robustness/msa.h"
#include "robustness/placement.h"
#include "robustness/robustness_map.h"
#include "robustness/slip.h"
#include "robustness/topple.h"

namespace robustness {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), pattern, a, b, c);
  return buf;
}

std::string data_path(const std::string& name) {
  return std::string(ROBUSTNESS_DATA_DIR) + "/scenes/" + name + ".json";
}

RobustnessEngine engine_for(const Scene& s, RobustnessConfig config = {}) {
  auto ifaces = detect_contacts(s);
  ForceSolution sol = solve_forces(s, ifaces);
  return RobustnessEngine(s, std::move(ifaces), std::move(sol), config);
}

// Friction polygon coverage.
Outcome coverage() {
  const double r4 = polygon_coverage(4);
  const double r8 = polygon_coverage(8);
  const double e4 = std::abs(r4 - 2.0 / std::numbers::pi);
  const double e8 = std::abs(r8 - 2.0 * std::numbers::sqrt2 / std::numbers::pi);
  return {e4 <= 1e-12 && e8 <= 1e-12, fmt("N=4 %.12f, N=8 %.12f", r4, r8)};
}

double c_of(const Vec3& f, double mu, const Vec3& e, double s) {
  const double x = f.x() + s * e.x();
  const double y = f.y() + s * e.y();
  return mu * std::abs(f.z() + s * e.z()) - std::sqrt(x * x + y * y);
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
  const double th = 2 * std::numbers::pi * unit(rng);
  const double ft = s.mu * fn * unit(rng);
  s.f = Vec3(ft * std::cos(th), ft * std::sin(th), fn);
  s.e = Vec3(normal(rng), normal(rng), normal(rng)).normalized();
  return s;
}

// Closed-form slip roots against a dense scan of c(s) on [0, 100].
Outcome slip_closed_form() {
  constexpr double kStep = 1e-4;
  constexpr int kCount = 1000000;
  std::mt19937 rng(101);
  int branches[2][2] = {{0, 0}, {0, 0}};
  int failures = 0;
  double worst_root = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Sample smp = random_sample(rng);
    const SlipAnalysis a = analyze_contact(smp.f, smp.mu, smp.e);
    const double tol = 1e-9 * (1 + smp.mu * smp.f.norm());
    for (const auto& root : {a.s_m, a.s_p}) {
      if (!root) continue;
      const double r = std::abs(c_of(smp.f, smp.mu, smp.e, *root));
      worst_root = std::max(worst_root, r / tol);
      if (r > tol) ++failures;
    }
    ++branches[a.d > 0][a.dcds0 > 0];

    double first_negative = kInfinity;
    double argmax = 0.0;
    double best = c_of(smp.f, smp.mu, smp.e, 0.0);
    for (int i = 1; i <= kCount; ++i) {
      const double s = i * kStep;
      const double c = c_of(smp.f, smp.mu, smp.e, s);
      if (c < 0.0) {
        first_negative = s;
        break;
      }
      if (c > best) {
        best = c;
        argmax = s;
      }
    }
    if (a.sr_slip < 99.0) {
      if (std::abs(a.sr_slip - first_negative) > kStep + 1e-9) ++failures;
    } else if (a.sr_slip > 101.0 && std::isfinite(first_negative)) {
      ++failures;
    }
    if (a.s_star < 99.0) {
      if (std::abs(a.s_star - argmax) > kStep + 1e-9) ++failures;
    } else if (a.s_star > 101.0 && std::isinf(first_negative) && argmax < 100.0 - kStep) {
      ++failures;
    }
  }
  int covered = 0;
  for (auto& row : branches) {
    for (int n : row) covered += n > 0;
  }
  return {failures == 0 && covered == 4,
          fmt("%.0f mismatches, %.0f of 4 branches, worst root residual %.3g of tolerance",
              failures, covered, worst_root)};
}

// Slip derivative against central differences.
Outcome slip_derivative_fd() {
  std::mt19937 rng(202);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Sample smp = random_sample(rng);
    const double s = 5.0 * unit(rng);
    const double h = 1e-6;
    const double fd = (contact_condition_at(smp.f, smp.mu, smp.e, s + h) -
                       contact_condition_at(smp.f, smp.mu, smp.e, s - h)) /
                      (2 * h);
    worst = std::max(worst, std::abs(fd - slip_derivative(smp.f, smp.mu, smp.e, s)));
  }
  return {worst <= 1e-4, fmt("max abs error %.3g", worst)};
}

double brute_force_min_cut(const FlowNetwork& n) {
  double best = kInfinity;
  for (unsigned mask = 0; mask < (1u << n.node_count); ++mask) {
    if (!(mask >> n.source & 1u) || (mask >> n.sink & 1u)) continue;
    double cut = 0.0;
    for (const FlowEdge& e : n.edges) {
      if (((mask >> e.u) & 1u) != ((mask >> e.v) & 1u)) cut += e.capacity;
    }
    best = std::min(best, cut);
  }
  return best;
}

// Max-flow and simplification against exhaustive cuts; contraction formula.
Outcome max_flow() {
  std::mt19937_64 rng(303);
  int flow_bad = 0;
  int simplify_bad = 0;
  for (int trial = 0; trial < 200; ++trial) {
    FlowNetwork n;
    n.node_count = std::uniform_int_distribution<int>(2, 6)(rng);
    n.source = 0;
    n.sink = n.node_count - 1;
    std::uniform_int_distribution<int> pick(0, n.node_count - 1);
    std::uniform_int_distribution<int> cap(0, 10);
    const int m = std::uniform_int_distribution<int>(0, 10)(rng);
    for (int i = 0; i < m; ++i) {
      const int u = pick(rng);
      const int v = pick(rng);
      if (u != v) n.edges.push_back({u, v, static_cast<double>(cap(rng))});
    }
    const double cut = brute_force_min_cut(n);
    if (std::abs(slipping_max_flow(n) - cut) > 1e-9) ++flow_bad;
    if (std::abs(slipping_max_flow(simplify(n)) - cut) > 1e-9) ++simplify_bad;
  }
  // Source A feeds branch point B; chains B-C-E and B-D-E reach sink E.
  int formula_bad = 0;
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double ab = u(rng), bc = u(rng), ce = u(rng), bd = u(rng), de = u(rng);
    const FlowNetwork f{5, 0, 4, {{0, 1, ab}, {1, 2, bc}, {2, 4, ce}, {1, 3, bd}, {3, 4, de}}};
    const FlowNetwork s = simplify(f);
    const double expected = std::min(ab, std::min(bc, ce) + std::min(bd, de));
    if (s.edges.size() != 1 || std::abs(s.edges[0].capacity - expected) > 1e-12) ++formula_bad;
  }
  return {flow_bad + simplify_bad + formula_bad == 0,
          fmt("flow mismatches %.0f, simplify mismatches %.0f, contraction mismatches %.0f",
              flow_bad, simplify_bad, formula_bad)};
}

// Unit cube pushed at a top edge midpoint.
Outcome toppling_analytic() {
  const RobustnessEngine grippy = engine_for(testing::cube_on_floor(0.8));
  const RobustnessResult a = grippy.query(Vec3(-0.5, 0, 1), Vec3::UnitX());
  const RobustnessEngine slick = engine_for(testing::cube_on_floor(0.3));
  const RobustnessResult b = slick.query(Vec3(-0.5, 0, 1), Vec3::UnitX());
  const bool ok = std::abs(a.sr - 4.905) <= 1e-6 && std::abs(a.sr_slip - 7.848) <= 1e-6 &&
                  a.governing == Mechanism::kTopple && std::abs(b.sr - 2.943) <= 1e-6 &&
                  b.governing == Mechanism::kSlip;
  return {ok, fmt("mu 0.8: SR %.9f (slip %.9f, topple-governed); mu 0.3: SR %.9f", a.sr,
                  a.sr_slip, b.sr) +
                  " " + to_string(b.governing) + "-governed"};
}

// Closed-form toppling minimizer against a grid search.
Outcome toppling_s_star() {
  std::mt19937 rng(404);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::uniform_int_distribution<int> count(1, 8);
  double worst_arg = 0.0;
  double worst_slope = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<double> A(count(rng)), b(A.size());
    for (std::size_t i = 0; i < A.size(); ++i) {
      A[i] = u(rng);
      b[i] = u(rng);
    }
    const ToppleImprovement t = topple_improvement(A, b, 0.0);
    auto objective = [&](double s) {
      double sum = 0.0;
      for (std::size_t i = 0; i < A.size(); ++i) sum += (A[i] * s - b[i]) * (A[i] * s - b[i]);
      return sum;
    };
    double best = -50.0;
    for (double s = -50.0; s <= 50.0; s += 1e-3) {
      if (objective(s) < objective(best)) best = s;
    }
    double lo = best - 1e-3, hi = best + 1e-3;
    for (int it = 0; it < 100; ++it) {
      const double m1 = lo + (hi - lo) * 0.382, m2 = lo + (hi - lo) * 0.618;
      if (objective(m1) < objective(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    worst_arg = std::max(worst_arg, std::abs(t.s_least_squares - 0.5 * (lo + hi)));
    worst_slope = std::max(worst_slope,
                           std::abs(topple_improvement(A, b, t.s_least_squares).improvement));
  }
  return {worst_arg <= 1e-6 && worst_slope <= 1e-9,
          fmt("max argmin error %.3g, max derivative at minimizer %.3g", worst_arg, worst_slope)};
}

// Flat block accelerated along its horizontal face normals.
Outcome msa_analytic() {
  const MsaResult a = compute_msa(engine_for(testing::block_on_floor(1, 2, 1, 0.9)),
                                  horizontal_directions(4));
  const MsaResult b = compute_msa(engine_for(testing::block_on_floor(1, 2, 1, 0.3)),
                                  horizontal_directions(4));
  double err_a = 0.0;
  double err_b = 0.0;
  bool mech = true;
  for (std::size_t i = 0; i < a.msa.size(); ++i) {
    err_a = std::max(err_a, std::abs(a.msa[i] - 4.905));
    err_b = std::max(err_b, std::abs(b.msa[i] - 2.943));
    mech = mech && a.mechanism[i] == Mechanism::kTopple && b.mechanism[i] == Mechanism::kSlip;
  }
  return {err_a <= 1e-6 && err_b <= 1e-6 && mech,
          fmt("mu 0.9 topple %.9f, mu 0.3 slip %.9f, max error %.3g", a.msa[0], b.msa[0],
              std::max(err_a, err_b))};
}

// Cube on a slant, with and without a rear cube.
Outcome slant_pattern() {
  const std::vector<Vec3> dirs = {Vec3::UnitY(), -Vec3::UnitY(), Vec3::UnitX(), -Vec3::UnitX()};
  const MsaResult a = compute_msa(engine_for(load_scene_file(data_path("slant_single"))), dirs);
  const MsaResult b = compute_msa(engine_for(load_scene_file(data_path("slant_rear"))), dirs);
  const bool ok = a.msa[1] > a.msa[0] && b.msa[0] > a.msa[0] && b.msa[2] < a.msa[2] &&
                  b.msa[3] < a.msa[3];
  std::string d = fmt("single +Y %.3f -Y %.3f +X %.3f; ", a.msa[0], a.msa[1], a.msa[2]);
  d += fmt("with rear cube +Y %.3f -X %.3f +X %.3f", b.msa[0], b.msa[3], b.msa[2]);
  return {ok, d};
}

// Equilibrium forces across the scene suite.
Outcome equilibrium() {
  const Scene cube = testing::cube_on_floor();
  const auto ifaces = detect_contacts(cube);
  const ForceSolution sol = solve_forces(cube, ifaces);
  double corner_err = sol.stable() ? 0.0 : kInfinity;
  for (const ContactForce& f : sol.forces.at(0)) corner_err = std::max(corner_err, std::abs(f.fn - 2.4525));
  const Scene steep = testing::cube_on_slant(std::numbers::pi / 4, 0.5);
  const bool steep_unstable = !solve_forces(steep, detect_contacts(steep)).stable();

  std::vector<Scene> suite = {testing::cube_on_floor(0.8), testing::block_on_floor(1, 2, 1, 0.9),
                              testing::two_cubes_side_by_side(), testing::stacked_cubes(),
                              testing::cube_on_slant(20 * std::numbers::pi / 180, 0.5)};
  for (const char* name : {"cube_on_floor", "flat_block", "stacked_cubes", "slant_single",
                           "slant_rear", "ipa_wedge"}) {
    suite.push_back(load_scene_file(data_path(name)));
  }
  double worst = 0.0;
  int stable = 0;
  for (const Scene& s : suite) {
    const auto fi = detect_contacts(s);
    for (SolveMode mode : {SolveMode::kRelaxed, SolveMode::kFull}) {
      SolverConfig config;
      config.mode = mode;
      const ForceSolution fs = solve_forces(s, fi, config);
      if (!fs.stable()) continue;
      ++stable;
      const auto res = equilibrium_residuals(s, fi, fs);
      for (std::size_t i = 0; i < s.bodies.size(); ++i) {
        if (s.bodies[i].fixed) continue;
        worst = std::max(worst, res[i] / (s.bodies[i].mass * 9.81));
      }
    }
  }
  return {corner_err <= 1e-6 && steep_unstable && worst <= 1e-6 && stable == 2 * static_cast<int>(suite.size()),
          fmt("corner error %.3g, worst relative residual %.3g over %.0f stable solves",
              corner_err, worst, stable) +
              (steep_unstable ? ", 45 degree slant unstable" : ", 45 degree slant NOT unstable")};
}

// Placement refinement of a cube balanced on a slant edge.
Outcome ipa() {
  const Scene scene = load_scene_file(data_path("ipa_wedge"));
  std::ifstream in(data_path("ipa_payload"));
  std::stringstream text;
  text << in.rdbuf();
  PlacementState state;
  state.object = parse_body(nlohmann::json::parse(text.str()), "payload");
  RobustnessConfig config;
  config.s_eval = state.object.mass * 9.81 / 3.0;
  const RobustnessMap map = build_map(engine_for(scene, config));
  const IpaResult r = ipa_refine(scene, map, state);
  const Scene placed = with_object(scene, r.state.object);
  const bool stable = solve_forces(placed, detect_contacts(placed)).stable();
  const bool ok = r.state.converged && r.state.iteration <= 50 && stable &&
                  r.final_mean_sri > r.initial_mean_sri;
  return {ok, fmt("%.0f iterations, mean contact SRI %.4f -> %.4f", r.state.iteration,
                  r.initial_mean_sri, r.final_mean_sri) +
                  (r.state.converged ? ", converged" : ", not converged") +
                  (stable ? ", stable" : ", unstable")};
}

struct Criterion {
  const char* name;
  double limit_seconds;
  std::function<Outcome()> check;
};

}  // namespace
}  // namespace robustness

int main() {
  using robustness::Criterion;
  const std::vector<Criterion> criteria = {
      {"friction-polygon-coverage", 1e-3, robustness::coverage},
      {"slip-closed-form-vs-grid", 10.0, robustness::slip_closed_form},
      {"slip-derivative-vs-finite-differences", 5.0, robustness::slip_derivative_fd},
      {"max-flow-vs-min-cut", 5.0, robustness::max_flow},
      {"toppling-cube-analytic", 1.0, robustness::toppling_analytic},
      {"toppling-minimizer-vs-grid", 5.0, robustness::toppling_s_star},
      {"msa-flat-block-analytic", 1.0, robustness::msa_analytic},
      {"msa-slant-pattern", 60.0, robustness::slant_pattern},
      {"equilibrium-solver", 5.0, robustness::equilibrium},
      {"ipa-convergence", 30.0, robustness::ipa},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    robustness::Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = o.pass && seconds <= c.limit_seconds;
    failed += !pass;
    std::printf("%s %s: %s [%.4f s, limit %g s]\n", pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), seconds, c.limit_seconds);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
