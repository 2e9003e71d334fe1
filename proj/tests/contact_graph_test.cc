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

#include <algorithm>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "robustness/contact_graph.h"
#include "robustness/errors.h"

namespace robustness {
namespace {

using testing::box_body;
using testing::floor_body;
using testing::json;
using testing::make_scene;

// Exhaustive minimum over all source/sink partitions.
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

FlowNetwork random_network(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> nodes(2, 6);
  FlowNetwork n;
  n.node_count = nodes(rng);
  n.source = 0;
  n.sink = n.node_count - 1;
  std::uniform_int_distribution<int> edge_count(0, 10);
  std::uniform_int_distribution<int> pick(0, n.node_count - 1);
  std::uniform_int_distribution<int> cap(0, 10);
  const int m = edge_count(rng);
  for (int i = 0; i < m; ++i) {
    const int u = pick(rng);
    const int v = pick(rng);
    if (u != v) n.edges.push_back({u, v, static_cast<double>(cap(rng))});
  }
  return n;
}

// Source A=0, branch point B=1, chains B-C-E and B-D-E, sink E=4.
FlowNetwork branching(double ab, double bc, double ce, double bd, double de) {
  return {5, 0, 4, {{0, 1, ab}, {1, 2, bc}, {2, 4, ce}, {1, 3, bd}, {3, 4, de}}};
}

TEST(BuildCig, SingleCubeAndStack) {
  const Scene one = testing::cube_on_floor();
  auto g = build_cig(one, detect_contacts(one));
  EXPECT_EQ(g.node_count(), 2);
  EXPECT_EQ(g.edges.size(), 1u);
  const Scene stack = testing::stacked_cubes();
  g = build_cig(stack, detect_contacts(stack));
  EXPECT_EQ(g.node_count(), 3);
  ASSERT_EQ(g.edges.size(), 2u);
  EXPECT_EQ(g.edges[0].u, ContactInterfaceGraph::kFixedNode);
  EXPECT_EQ(g.edges[1].u, 1);
  EXPECT_EQ(g.edges[1].v, 2);
}

TEST(BuildCig, SixBodiesWithFloorAndWallMerged) {
  const Vec3 h = Vec3::Constant(0.5);
  const Scene s = make_scene(json::array({floor_body(),
                                          box_body("wall", {0.5, 2, 2}, {3, 0, 2}, 0, 0.5, true),
                                          box_body("A", h, {0, 0, 0.5}, 1, 0.5),
                                          box_body("B", h, {1, 0, 0.5}, 1, 0.5),
                                          box_body("C", h, {2, 0, 0.5}, 1, 0.5),
                                          box_body("D", h, {0.5, 0, 1.5}, 1, 0.5),
                                          box_body("E", h, {1.5, 0, 1.5}, 1, 0.5),
                                          box_body("F", h, {1, 0, 2.5}, 1, 0.5)}));
  const auto g = build_cig(s, detect_contacts(s));
  EXPECT_EQ(g.node_count(), 7);
  EXPECT_EQ(g.body_node[0], g.body_node[1]);
  const std::string dot = to_dot(g);
  EXPECT_NE(dot.find("graph cig"), std::string::npos);
  EXPECT_NE(dot.find("fixed"), std::string::npos);
}

TEST(MaxFlow, ParallelAndSeries) {
  EXPECT_DOUBLE_EQ(slipping_max_flow({2, 0, 1, {{0, 1, 3}, {0, 1, 2}}}), 5.0);
  EXPECT_DOUBLE_EQ(slipping_max_flow({3, 0, 2, {{0, 1, 3}, {1, 2, 2}}}), 2.0);
  EXPECT_DOUBLE_EQ(slipping_max_flow({3, 0, 2, {{0, 1, 3}}}), 0.0);
}

TEST(MaxFlow, InfiniteCapacities) {
  EXPECT_TRUE(std::isinf(slipping_max_flow({3, 0, 2, {{0, 1, kInfinity}, {1, 2, kInfinity}}})));
  EXPECT_DOUBLE_EQ(slipping_max_flow({3, 0, 2, {{0, 1, kInfinity}, {1, 2, 4}}}), 4.0);
  EXPECT_DOUBLE_EQ(
      slipping_max_flow({3, 0, 2, {{0, 1, kInfinity}, {1, 2, 4}, {0, 2, 1.5}}}), 5.5);
}

TEST(MaxFlow, EqualsBruteForceMinCut) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const FlowNetwork n = random_network(rng);
    const double cut = brute_force_min_cut(n);
    EXPECT_NEAR(slipping_max_flow(n), cut, 1e-9);
    EXPECT_NEAR(slipping_max_flow(simplify(n)), cut, 1e-9);
  }
}

TEST(Simplify, BranchingContraction) {
  const FlowNetwork s = simplify(branching(3, 1, 2, 2, 4));
  ASSERT_EQ(s.edges.size(), 1u);
  EXPECT_EQ(std::min(s.edges[0].u, s.edges[0].v), 0);
  EXPECT_EQ(std::max(s.edges[0].u, s.edges[0].v), 4);
  EXPECT_DOUBLE_EQ(s.edges[0].capacity, 3.0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double ab = u(rng), bc = u(rng), ce = u(rng), bd = u(rng), de = u(rng);
    const FlowNetwork r = simplify(branching(ab, bc, ce, bd, de));
    ASSERT_EQ(r.edges.size(), 1u);
    EXPECT_NEAR(r.edges[0].capacity,
                std::min(ab, std::min(bc, ce) + std::min(bd, de)), 1e-12);
  }
}

TEST(Simplify, TrimsDanglingNodesAndKeepsMinimalGraphs) {
  // Leaf 3 hangs off node 1 and lies on no simple 0-2 path.
  const FlowNetwork with_leaf{4, 0, 2, {{0, 1, 3}, {1, 2, 5}, {1, 3, 7}, {0, 2, 1}}};
  const std::vector<bool> mask =
      nodes_on_simple_paths(4, {{0, 1}, {1, 2}, {1, 3}, {0, 2}}, 0, 2);
  EXPECT_TRUE(mask[0] && mask[1] && mask[2]);
  EXPECT_FALSE(mask[3]);
  const FlowNetwork s = simplify(with_leaf);
  for (const FlowEdge& e : s.edges) EXPECT_TRUE(e.u != 3 && e.v != 3);
  EXPECT_DOUBLE_EQ(slipping_max_flow(s), 4.0);

  const FlowNetwork minimal{2, 0, 1, {{0, 1, 2.5}}};
  const FlowNetwork same = simplify(minimal);
  ASSERT_EQ(same.edges.size(), 1u);
  EXPECT_DOUBLE_EQ(same.edges[0].capacity, 2.5);
}

TEST(Simplify, CycleOffThePathIsTrimmed) {
  // Triangle 1-3-4 attached to the path only through node 1.
  const std::vector<bool> mask =
      nodes_on_simple_paths(5, {{0, 1}, {1, 2}, {1, 3}, {3, 4}, {4, 1}}, 0, 2);
  EXPECT_FALSE(mask[3]);
  EXPECT_FALSE(mask[4]);
}

TEST(Simplify, ContractionOrderDoesNotMatter) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const FlowNetwork n = random_network(rng);
    std::vector<int> perm(n.node_count);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    FlowNetwork relabeled = n;
    relabeled.source = perm[n.source];
    relabeled.sink = perm[n.sink];
    for (FlowEdge& e : relabeled.edges) {
      e.u = perm[e.u];
      e.v = perm[e.v];
    }
    std::shuffle(relabeled.edges.begin(), relabeled.edges.end(), rng);
    EXPECT_NEAR(slipping_max_flow(simplify(n)), slipping_max_flow(simplify(relabeled)), 1e-9);
  }
}

TEST(Simplify, RejectsMissingEndpoints) {
  EXPECT_THROW(simplify({2, 0, 5, {}}), PreconditionError);
  EXPECT_THROW(slipping_max_flow({2, 1, 1, {}}), PreconditionError);
}

}  // namespace
}  // namespace robustness
