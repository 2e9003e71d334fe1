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

#ifndef ROBUSTNESS_ROBUSTNESS_MAP_H_
#define ROBUSTNESS_ROBUSTNESS_MAP_H_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "robustness/assessment.h"
#include "robustness/geometry.h"

namespace robustness {

struct MapSample {
  std::size_t body = 0;
  std::size_t face = 0;
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // outward; queries push along -normal
  RobustnessResult result;
};

struct RobustnessMap {
  std::vector<MapSample> samples;
  double density = 0.0;  // samples per square meter
  double spacing = 0.0;  // grid pitch, m
  std::uint64_t scene_fingerprint = 0;
};

struct MapConfig {
  double density = 100.0;
  double tol_gap = 1e-4;
};

struct SurfacePoint {
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();  // outward
  std::size_t face = 0;
};

// Centered square grid of the given pitch on every face, ordered by face.
std::vector<SurfacePoint> sample_surface(const ConvexPolyhedron& shape, double spacing);

// Grid samples over every exposed face, in scene body order.
RobustnessMap build_map(const RobustnessEngine& engine, const MapConfig& config = {});

// w = max(0, SRI - lambda^k SRI_max), normalized; uniform when all vanish.
std::vector<double> sampling_weights(const RobustnessMap& map, int k, double lambda = 0.995);

// Infinite values print as "inf".
std::string format_value(double v);

// Header x,y,z,nx,ny,nz,sr,sri.
std::string map_to_csv(const RobustnessMap& map);

enum class MapChannel { kSr, kSri };

// ASCII point cloud with an 8-bit channel scaled between the smallest finite
// value and the 99th percentile; infinite values saturate.
std::string map_to_ply(const RobustnessMap& map, MapChannel channel);

}  // namespace robustness

#endif  // ROBUSTNESS_ROBUSTNESS_MAP_H_
