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

#include <cmath>
#include <numbers>
#include <sstream>

#include "robustness/errors.h"
#include "robustness/robustness_map.h"

namespace robustness {

std::string super_object_name(const RobustnessEngine& engine, std::size_t super_index) {
  std::string name;
  for (std::size_t body : engine.super_objects()[super_index].bodies) {
    if (!name.empty()) name += '+';
    name += engine.scene().bodies[body].id;
  }
  return name;
}

MsaResult compute_msa(const RobustnessEngine& engine, const std::vector<Vec3>& directions) {
  MsaResult out;
  const auto& supers = engine.super_objects();
  for (const Vec3& d : directions) {
    if (std::abs(d.norm() - 1.0) > 1e-9) {
      throw PreconditionError("acceleration directions must be unit vectors");
    }
    double best = kInfinity;
    std::string limiting;
    Mechanism mechanism = Mechanism::kNone;
    for (std::size_t g = 0; g < supers.size(); ++g) {
      const RobustnessResult r = engine.query_super(g, supers[g].com, -d);
      const double x = r.sr / supers[g].mass;
      if (x < best) {
        best = x;
        limiting = super_object_name(engine, g);
        mechanism = r.governing;
      }
    }
    out.directions.push_back(d);
    out.msa.push_back(best);
    out.limiting_super.push_back(limiting);
    out.mechanism.push_back(mechanism);
  }
  return out;
}

std::vector<Vec3> horizontal_directions(int n) {
  if (n < 1) throw PreconditionError("direction count must be positive");
  std::vector<Vec3> out;
  for (int i = 0; i < n; ++i) {
    const double a = 2.0 * std::numbers::pi * i / n;
    out.emplace_back(std::cos(a), std::sin(a), 0.0);
  }
  return out;
}

std::vector<Vec3> fibonacci_directions(int n) {
  if (n < 1) throw PreconditionError("direction count must be positive");
  std::vector<Vec3> out;
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    out.emplace_back(r * std::cos(golden * i), r * std::sin(golden * i), z);
  }
  return out;
}

std::string msa_to_csv(const MsaResult& result) {
  std::ostringstream out;
  out << "dx,dy,dz,msa,limiting_super,mechanism\n";
  for (std::size_t i = 0; i < result.msa.size(); ++i) {
    const Vec3& d = result.directions[i];
    out << format_value(d.x()) << ',' << format_value(d.y()) << ',' << format_value(d.z())
        << ',' << format_value(result.msa[i]) << ',' << result.limiting_super[i] << ','
        << to_string(result.mechanism[i]) << '\n';
  }
  return out.str();
}

}  // namespace robustness
