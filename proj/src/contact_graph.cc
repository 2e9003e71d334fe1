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

#include "robustness/contact_graph.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

#include "robustness/errors.h"

namespace robustness {
namespace {

void check_endpoints(const FlowNetwork& n) {
  if (n.source < 0 || n.source >= n.node_count || n.sink < 0 || n.sink >= n.node_count) {
    throw PreconditionError("source or sink missing from the network");
  }
  if (n.source == n.sink) throw PreconditionError("source and sink coincide");
  for (const FlowEdge& e : n.edges) {
    if (!(e.capacity >= 0.0)) throw PreconditionError("capacities must be non-negative");
  }
}

bool infinite_path(const FlowNetwork& n) {
  std::vector<std::vector<int>> adj(n.node_count);
  for (const FlowEdge& e : n.edges) {
    if (std::isinf(e.capacity)) {
      adj[e.u].push_back(e.v);
      adj[e.v].push_back(e.u);
    }
  }
  std::vector<bool> seen(n.node_count, false);
  std::queue<int> q;
  q.push(n.source);
  seen[n.source] = true;
  while (!q.empty()) {
    const int u = q.front();
    q.pop();
    if (u == n.sink) return true;
    for (int v : adj[u]) {
      if (!seen[v]) {
        seen[v] = true;
        q.push(v);
      }
    }
  }
  return false;
}

}  // namespace

std::size_t ContactInterfaceGraph::body_of(int node) const {
  for (std::size_t i = 0; i < body_node.size(); ++i) {
    if (body_node[i] == node && node != kFixedNode) return i;
  }
  throw PreconditionError("node is not a free body");
}

ContactInterfaceGraph build_cig(const Scene& scene,
                                const std::vector<ContactInterface>& interfaces) {
  ContactInterfaceGraph g;
  g.nodes.push_back("fixed");
  for (const RigidBody& b : scene.bodies) {
    if (b.fixed) {
      g.body_node.push_back(ContactInterfaceGraph::kFixedNode);
    } else {
      g.body_node.push_back(g.node_count());
      g.nodes.push_back(b.id);
    }
  }
  for (std::size_t i = 0; i < interfaces.size(); ++i) {
    g.edges.push_back({g.body_node[scene.index_of(interfaces[i].body_a)],
                       g.body_node[scene.index_of(interfaces[i].body_b)], i});
  }
  return g;
}

FlowNetwork make_network(const ContactInterfaceGraph& graph,
                         const std::vector<double>& capacities, int source,
                         int sink) {
  FlowNetwork n;
  n.node_count = graph.node_count();
  n.source = source;
  n.sink = sink;
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    n.edges.push_back({graph.edges[e].u, graph.edges[e].v, capacities.at(e)});
  }
  return n;
}

std::vector<bool> nodes_on_simple_paths(int node_count,
                                        const std::vector<std::pair<int, int>>& edges,
                                        int source, int sink) {
  // A node lies on a simple source-sink path iff it shares a biconnected
  // component with a virtual source-sink edge.
  std::vector<std::pair<int, int>> all = edges;
  const int virtual_edge = static_cast<int>(all.size());
  all.emplace_back(source, sink);
  std::vector<std::vector<std::pair<int, int>>> adj(node_count);
  for (int e = 0; e < static_cast<int>(all.size()); ++e) {
    if (all[e].first == all[e].second) continue;
    adj[all[e].first].emplace_back(all[e].second, e);
    adj[all[e].second].emplace_back(all[e].first, e);
  }
  std::vector<int> disc(node_count, -1);
  std::vector<int> low(node_count, 0);
  std::vector<int> stack;
  std::vector<bool> mask(node_count, false);
  int timer = 0;
  std::function<void(int, int)> dfs = [&](int u, int parent_edge) {
    disc[u] = low[u] = timer++;
    for (const auto& [v, e] : adj[u]) {
      if (e == parent_edge) continue;
      if (disc[v] < 0) {
        stack.push_back(e);
        dfs(v, e);
        low[u] = std::min(low[u], low[v]);
        if (low[v] >= disc[u]) {
          std::vector<int> block;
          int top;
          do {
            top = stack.back();
            stack.pop_back();
            block.push_back(top);
          } while (top != e);
          if (std::find(block.begin(), block.end(), virtual_edge) != block.end()) {
            for (int b : block) {
              mask[all[b].first] = true;
              mask[all[b].second] = true;
            }
          }
        }
      } else if (disc[v] < disc[u]) {
        stack.push_back(e);
        low[u] = std::min(low[u], disc[v]);
      }
    }
  };
  dfs(source, -1);
  return mask;
}

FlowNetwork simplify(const FlowNetwork& network) {
  check_endpoints(network);
  std::vector<std::pair<int, int>> pairs;
  for (const FlowEdge& e : network.edges) pairs.emplace_back(e.u, e.v);
  const std::vector<bool> keep =
      nodes_on_simple_paths(network.node_count, pairs, network.source, network.sink);

  FlowNetwork out = network;
  out.edges.clear();
  for (const FlowEdge& e : network.edges) {
    if (e.u != e.v && keep[e.u] && keep[e.v]) out.edges.push_back(e);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    std::map<std::pair<int, int>, double> merged;
    for (const FlowEdge& e : out.edges) {
      merged[{std::min(e.u, e.v), std::max(e.u, e.v)}] += e.capacity;
    }
    if (merged.size() != out.edges.size()) changed = true;
    out.edges.clear();
    for (const auto& [key, cap] : merged) out.edges.push_back({key.first, key.second, cap});

    std::vector<std::vector<int>> incident(out.node_count);
    for (int e = 0; e < static_cast<int>(out.edges.size()); ++e) {
      incident[out.edges[e].u].push_back(e);
      incident[out.edges[e].v].push_back(e);
    }
    for (int x = 0; x < out.node_count; ++x) {
      if (x == out.source || x == out.sink || incident[x].size() != 2) continue;
      const FlowEdge a = out.edges[incident[x][0]];
      const FlowEdge b = out.edges[incident[x][1]];
      const int end_a = a.u == x ? a.v : a.u;
      const int end_b = b.u == x ? b.v : b.u;
      std::vector<FlowEdge> next;
      for (int e = 0; e < static_cast<int>(out.edges.size()); ++e) {
        if (e != incident[x][0] && e != incident[x][1]) next.push_back(out.edges[e]);
      }
      if (end_a != end_b) next.push_back({end_a, end_b, std::min(a.capacity, b.capacity)});
      out.edges = std::move(next);
      changed = true;
      break;
    }
  }
  return out;
}

double slipping_max_flow(const FlowNetwork& network) {
  check_endpoints(network);
  if (infinite_path(network)) return kInfinity;

  double finite_total = 0.0;
  for (const FlowEdge& e : network.edges) {
    if (!std::isinf(e.capacity)) finite_total += e.capacity;
  }
  // With no all-infinite path every cut has a finite edge, so any value above
  // the finite total behaves exactly like infinity.
  const double big = finite_total + 1.0;

  struct Arc {
    int to;
    double residual;
    int reverse;
  };
  std::vector<std::vector<Arc>> arcs(network.node_count);
  for (const FlowEdge& e : network.edges) {
    if (e.u == e.v) continue;
    const double c = std::isinf(e.capacity) ? big : e.capacity;
    arcs[e.u].push_back({e.v, c, static_cast<int>(arcs[e.v].size())});
    arcs[e.v].push_back({e.u, c, static_cast<int>(arcs[e.u].size()) - 1});
  }

  constexpr double kSaturation = 1e-12;
  double flow = 0.0;
  while (true) {
    std::vector<std::pair<int, int>> parent(network.node_count, {-1, -1});
    std::queue<int> q;
    q.push(network.source);
    parent[network.source] = {network.source, -1};
    while (!q.empty() && parent[network.sink].first < 0) {
      const int u = q.front();
      q.pop();
      for (int i = 0; i < static_cast<int>(arcs[u].size()); ++i) {
        const Arc& a = arcs[u][i];
        if (a.residual > kSaturation && parent[a.to].first < 0) {
          parent[a.to] = {u, i};
          q.push(a.to);
        }
      }
    }
    if (parent[network.sink].first < 0) break;
    double push = kInfinity;
    for (int v = network.sink; v != network.source; v = parent[v].first) {
      push = std::min(push, arcs[parent[v].first][parent[v].second].residual);
    }
    for (int v = network.sink; v != network.source; v = parent[v].first) {
      Arc& a = arcs[parent[v].first][parent[v].second];
      a.residual -= push;
      arcs[v][a.reverse].residual += push;
    }
    flow += push;
  }
  return flow;
}

std::string to_dot(const ContactInterfaceGraph& graph,
                   const std::vector<double>* capacities) {
  std::ostringstream out;
  out << "graph cig {\n";
  for (int v = 0; v < graph.node_count(); ++v) {
    out << "  n" << v << " [label=\"" << graph.nodes[v] << "\""
        << (v == ContactInterfaceGraph::kFixedNode ? ", shape=box" : "") << "];\n";
  }
  for (std::size_t e = 0; e < graph.edges.size(); ++e) {
    out << "  n" << graph.edges[e].u << " -- n" << graph.edges[e].v << " [label=\"i"
        << graph.edges[e].interface;
    if (capacities != nullptr) out << " " << (*capacities)[e];
    out << "\"];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace robustness
