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

#ifndef ROBUSTNESS_CONTACT_GRAPH_H_
#define ROBUSTNESS_CONTACT_GRAPH_H_

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "robustness/contacts.h"
#include "robustness/scene.h"

namespace robustness {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct CigEdge {
  int u = 0;
  int v = 0;
  std::size_t interface = 0;
};

// Bodies as nodes, interfaces as edges. Node 0 stands for every fixed body.
struct ContactInterfaceGraph {
  static constexpr int kFixedNode = 0;

  std::vector<std::string> nodes;
  std::vector<CigEdge> edges;
  std::vector<int> body_node;  // scene body index -> node

  int node_count() const { return static_cast<int>(nodes.size()); }
  // Scene body index of a free node.
  std::size_t body_of(int node) const;
};

ContactInterfaceGraph build_cig(const Scene& scene,
                                const std::vector<ContactInterface>& interfaces);

struct FlowEdge {
  int u = 0;
  int v = 0;
  double capacity = 0.0;
};

// Undirected capacitated multigraph with a designated source and sink.
struct FlowNetwork {
  int node_count = 0;
  int source = 0;
  int sink = 0;
  std::vector<FlowEdge> edges;
};

FlowNetwork make_network(const ContactInterfaceGraph& graph,
                         const std::vector<double>& capacities, int source,
                         int sink);

// mask[v] is true iff v lies on some simple source-sink path.
std::vector<bool> nodes_on_simple_paths(int node_count,
                                        const std::vector<std::pair<int, int>>& edges,
                                        int source, int sink);

// Drops nodes off every simple source-sink path, then merges parallel edges
// by sum and series chains by min until neither rule applies.
FlowNetwork simplify(const FlowNetwork& network);

// Exact maximum flow; +inf iff a source-sink path of infinite edges exists.
double slipping_max_flow(const FlowNetwork& network);

// Graphviz rendering; capacities are printed when given.
std::string to_dot(const ContactInterfaceGraph& graph,
                   const std::vector<double>* capacities = nullptr);

}  // namespace robustness

#endif  // ROBUSTNESS_CONTACT_GRAPH_H_
