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

#ifndef ROBUSTNESS_MSA_H_
#define ROBUSTNESS_MSA_H_

#include <cstddef>
#include <string>
#include <vector>

#include "robustness/assessment.h"
#include "robustness/geometry.h"

namespace robustness {

struct MsaResult {
  std::vector<Vec3> directions;
  std::vector<double> msa;                 // m/s^2, possibly +inf
  std::vector<std::string> limiting_super;  // member ids joined by '+'
  std::vector<Mechanism> mechanism;
};

// For each acceleration direction d, the smallest SR(com_g, -d) / m_g over
// all super-objects g.
MsaResult compute_msa(const RobustnessEngine& engine, const std::vector<Vec3>& directions);

// n unit vectors evenly spaced in the z = 0 plane, starting at +x.
std::vector<Vec3> horizontal_directions(int n);
// n unit vectors on a spherical Fibonacci lattice.
std::vector<Vec3> fibonacci_directions(int n);

// Header dx,dy,dz,msa,limiting_super,mechanism.
std::string msa_to_csv(const MsaResult& result);

std::string super_object_name(const RobustnessEngine& engine, std::size_t super_index);

}  // namespace robustness

#endif  // ROBUSTNESS_MSA_H_
