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

#ifndef ROBUSTNESS_ASSESSMENT_H_
#define ROBUSTNESS_ASSESSMENT_H_

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "robustness/contact_graph.h"
#include "robustness/contacts.h"
#include "robustness/equilibrium.h"
#include "robustness/scene.h"
#include "robustness/topple.h"

namespace robustness {

enum class Mechanism { kNone, kSlip, kTopple };

std::string to_string(Mechanism m);

struct RobustnessConfig {
  double s_eval = 1.0;  // force magnitude at which improvements are evaluated, N
  double slip_weight = 1.0;
  double topple_weight = 1.0;
  std::optional<std::size_t> super_object_cap;
  double surface_tol = 1e-4;  // how far a query point may sit from a surface
};

struct RobustnessResult {
  double sr = kInfinity;
  double sr_slip = kInfinity;
  double sr_top = kInfinity;
  double sri = 0.0;
  double sri_slip = 0.0;
  double sri_top = 0.0;
  Mechanism governing = Mechanism::kNone;
};

// Static robustness queries over one solved scene.
class RobustnessEngine {
 public:
  // Throws UnstableError when the solution is not stable.
  RobustnessEngine(const Scene& scene, std::vector<ContactInterface> interfaces,
                   ForceSolution solution, RobustnessConfig config = {});

  // Force applied at `point` on the given body along unit `direction`.
  RobustnessResult query(std::size_t body, const Vec3& point, const Vec3& direction) const;
  // Locates the body whose surface holds the point; PreconditionError when
  // none does.
  RobustnessResult query(const Vec3& point, const Vec3& direction) const;
  // Treats the super-object as one body: slipping flows out of all its
  // members and toppling uses only its own axes.
  RobustnessResult query_super(std::size_t super_index, const Vec3& point,
                               const Vec3& direction) const;

  std::size_t body_at(const Vec3& point) const;

  const Scene& scene() const { return scene_; }
  const std::vector<ContactInterface>& interfaces() const { return interfaces_; }
  const ForceSolution& solution() const { return solution_; }
  const ContactInterfaceGraph& graph() const { return graph_; }
  const RobustnessConfig& config() const { return config_; }
  const std::vector<SuperObject>& super_objects() const { return supers_; }
  const std::vector<TopplingAxis>& axes(std::size_t super_index) const {
    return axes_[super_index];
  }

  // Per-interface slip capacities for a push out of `sources`, oriented
  // towards the fixed node. Interfaces off every simple path get 0.
  std::vector<double> capacities(const std::vector<int>& sources, const Vec3& direction) const;

 private:
  RobustnessResult evaluate(const std::vector<int>& sources,
                            const std::vector<std::size_t>& topple_supers,
                            const Vec3& point, const Vec3& direction,
                            bool with_improvement) const;

  Scene scene_;
  std::vector<ContactInterface> interfaces_;
  ForceSolution solution_;
  RobustnessConfig config_;
  ContactInterfaceGraph graph_;
  std::vector<SuperObject> supers_;
  std::vector<std::vector<TopplingAxis>> axes_;
  std::vector<std::size_t> singleton_;  // node -> index of the super-object {node}
};

}  // namespace robustness

#endif  // ROBUSTNESS_ASSESSMENT_H_
