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

#include "robustness/msa.h"

#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "fixtures.h"
#include "robustness/errors.h"

namespace robustness {
namespace {

RobustnessEngine engine_for(const Scene& s) {
  auto ifaces = detect_contacts(s);
  ForceSolution sol = solve_forces(s, ifaces);
  return RobustnessEngine(s, std::move(ifaces), std::move(sol));
}

Scene data_scene(const std::string& name) {
  return load_scene_file(std::string(ROBUSTNESS_DATA_DIR) + "/scenes/" + name + ".json");
}

TEST(Msa, FlatBlockToppleLimited) {
  const RobustnessEngine e = engine_for(testing::block_on_floor(1, 2, 1, 0.9));
  const MsaResult r = compute_msa(e, horizontal_directions(4));
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_NEAR(r.msa[i], 4.905, 1e-6);
    EXPECT_EQ(r.mechanism[i], Mechanism::kTopple);
    EXPECT_EQ(r.limiting_super[i], "block");
  }
}

TEST(Msa, FlatBlockSlipLimited) {
  const RobustnessEngine e = engine_for(testing::block_on_floor(1, 2, 1, 0.3));
  const MsaResult r = compute_msa(e, {Vec3::UnitX(), -Vec3::UnitY()});
  for (double x : r.msa) EXPECT_NEAR(x, 2.943, 1e-6);
  EXPECT_EQ(r.mechanism[0], Mechanism::kSlip);
}

TEST(Msa, DownwardAccelerationLiftsOffAtGravity) {
  const RobustnessEngine e = engine_for(testing::block_on_floor(1, 2, 1, 0.9));
  EXPECT_NEAR(compute_msa(e, {-Vec3::UnitZ()}).msa[0], 9.81, 1e-6);
  EXPECT_TRUE(std::isinf(compute_msa(e, {Vec3::UnitZ()}).msa[0]));
}

TEST(Msa, MassScaleInvariant) {
  const RobustnessEngine light = engine_for(testing::stacked_cubes(0.5));
  Scene heavy_scene = testing::stacked_cubes(0.5);
  for (RigidBody& b : heavy_scene.bodies) b.mass *= 3.0;
  const RobustnessEngine heavy = engine_for(heavy_scene);
  const auto dirs = horizontal_directions(12);
  const MsaResult a = compute_msa(light, dirs);
  const MsaResult b = compute_msa(heavy, dirs);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    EXPECT_NEAR(a.msa[i], b.msa[i], 1e-6 * (1 + a.msa[i]));
  }
}

TEST(Msa, AddingDirectionsKeepsEntries) {
  const RobustnessEngine e = engine_for(testing::stacked_cubes(0.5));
  const auto dirs = fibonacci_directions(20);
  const MsaResult all = compute_msa(e, dirs);
  const MsaResult part = compute_msa(e, std::vector<Vec3>(dirs.begin(), dirs.begin() + 7));
  for (std::size_t i = 0; i < 7; ++i) EXPECT_EQ(part.msa[i], all.msa[i]);
  for (const Vec3& d : dirs) EXPECT_NEAR(d.norm(), 1.0, 1e-12);
  EXPECT_THROW(compute_msa(e, {Vec3(1, 1, 0)}), PreconditionError);
}

TEST(Msa, SlantPattern) {
  const RobustnessEngine single = engine_for(data_scene("slant_single"));
  const RobustnessEngine rear = engine_for(data_scene("slant_rear"));
  const std::vector<Vec3> dirs = {Vec3::UnitY(), -Vec3::UnitY(), Vec3::UnitX(), -Vec3::UnitX()};
  const MsaResult a = compute_msa(single, dirs);
  const MsaResult b = compute_msa(rear, dirs);
  EXPECT_GT(a.msa[1], a.msa[0]);
  EXPECT_EQ(a.mechanism[0], Mechanism::kTopple);
  EXPECT_GT(b.msa[0], a.msa[0]);
  EXPECT_LT(b.msa[2], a.msa[2]);
  EXPECT_LT(b.msa[3], a.msa[3]);
}

TEST(Msa, Csv) {
  const RobustnessEngine e = engine_for(testing::cube_on_floor(0.8));
  const std::string csv = msa_to_csv(compute_msa(e, horizontal_directions(100)));
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "dx,dy,dz,msa,limiting_super,mechanism");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 101);
  EXPECT_NE(csv.find(",cube,slip\n"), std::string::npos);
}

}  // namespace
}  // namespace robustness
