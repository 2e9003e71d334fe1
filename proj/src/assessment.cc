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

#include "robustness/assessment.h"

#include <algorithm>
#include <cmath>
#include <deque>

#include "robustness/errors.h"
#include "robustness/slip.h"

namespace robustness {
namespace {

std::vector<int> bfs_distances(int node_count,
                               const std::vector<std::pair<int, int>>& edges, int from) {
  std::vector<std::vector<int>> adj(node_count);
  for (const auto& [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> dist(node_count, -1);
  std::deque<int> queue = {from};
  dist[from] = 0;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    for (int v : adj[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

bool near_any(const Vec3& p, const std::vector<ContactPoint>& points) {
  for (const ContactPoint& c : points) {
    if ((c.position - p).norm() <= 1e-9) return true;
  }
  return false;
}

// Interfaces on simple paths out of the contracted source, with the endpoint
// that receives the push.
struct PathEdges {
  std::vector<std::size_t> edges;  // indices into graph.edges
  std::vector<bool> downstream_is_b;
  std::vector<int> upstream;  // contracted node
  int source = 0;
  std::vector<int> mapped_u;
  std::vector<int> mapped_v;
};

PathEdges path_edges(const ContactInterfaceGraph& graph, const std::vector<int>& sources) {
  PathEdges out;
  out.source = sources.front();
  const int n = graph.node_count();
  auto mapped = [&](int node) {
    return std::find(sources.begin(), sources.end(), node) != sources.end() ? out.source : node;
  };
  std::vector<std::pair<int, int>> pairs;
  for (const CigEdge& e : graph.edges) {
    out.mapped_u.push_back(mapped(e.u));
    out.mapped_v.push_back(mapped(e.v));
    pairs.emplace_back(out.mapped_u.back(), out.mapped_v.back());
  }
  const std::vector<bool> mask =
      nodes_on_simple_paths(n, pairs, out.source, ContactInterfaceGraph::kFixedNode);
  std::vector<std::pair<int, int>> kept;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto [u, v] = pairs[i];
    if (u != v && mask[u] && mask[v]) {
      out.edges.push_back(i);
      kept.push_back(pairs[i]);
    }
  }
  const std::vector<int> to_sink = bfs_distances(n, kept, ContactInterfaceGraph::kFixedNode);
  const std::vector<int> to_source = bfs_distances(n, kept, out.source);
  for (std::size_t i : out.edges) {
    const int u = out.mapped_u[i];
    const int v = out.mapped_v[i];
    bool b_down = false;
    if (to_sink[v] != to_sink[u]) {
      b_down = to_sink[v] < to_sink[u];
    } else if (to_source[v] != to_source[u]) {
      b_down = to_source[v] > to_source[u];
    }
    out.downstream_is_b.push_back(b_down);
    out.upstream.push_back(b_down ? u : v);
  }
  return out;
}

}  // namespace

std::string to_string(Mechanism m) {
  switch (m) {
    case Mechanism::kSlip:
      return "slip";
    case Mechanism::kTopple:
      return "topple";
    case Mechanism::kNone:
      break;
  }
  return "none";
}

RobustnessEngine::RobustnessEngine(const Scene& scene,
                                   std::vector<ContactInterface> interfaces,
                                   ForceSolution solution, RobustnessConfig config)
    : scene_(scene),
      interfaces_(std::move(interfaces)),
      solution_(std::move(solution)),
      config_(config) {
  if (!solution_.stable()) throw UnstableError("assembly unstable, robustness undefined");
  graph_ = build_cig(scene_, interfaces_);
  supers_ = enumerate_super_objects(scene_, graph_, interfaces_, config_.super_object_cap);
  singleton_.assign(graph_.node_count(), supers_.size());
  for (std::size_t i = 0; i < supers_.size(); ++i) {
    axes_.push_back(valid_toppling_axes(supers_[i]));
    if (supers_[i].nodes.size() == 1) singleton_[supers_[i].nodes[0]] = i;
  }
}

std::size_t RobustnessEngine::body_at(const Vec3& point) const {
  std::size_t best = scene_.bodies.size();
  double best_distance = config_.surface_tol;
  for (std::size_t i = 0; i < scene_.bodies.size(); ++i) {
    const double d = std::abs(scene_.bodies[i].world_shape().plane_distance(point));
    const bool better = d < best_distance ||
                        (d == best_distance && best < scene_.bodies.size() &&
                         scene_.bodies[best].fixed && !scene_.bodies[i].fixed);
    if (d <= config_.surface_tol && (best == scene_.bodies.size() || better)) {
      best = i;
      best_distance = d;
    }
  }
  if (best == scene_.bodies.size()) {
    throw PreconditionError("query point does not lie on any body surface");
  }
  return best;
}

std::vector<double> RobustnessEngine::capacities(const std::vector<int>& sources,
                                                 const Vec3& direction) const {
  std::vector<double> caps(interfaces_.size(), 0.0);
  const PathEdges paths = path_edges(graph_, sources);
  for (std::size_t k = 0; k < paths.edges.size(); ++k) {
    const std::size_t iface = graph_.edges[paths.edges[k]].interface;
    caps[iface] = interface_capacity(interfaces_[iface], iface, solution_, direction,
                                     paths.downstream_is_b[k]);
  }
  return caps;
}

RobustnessResult RobustnessEngine::evaluate(const std::vector<int>& sources,
                                            const std::vector<std::size_t>& topple_supers,
                                            const Vec3& point, const Vec3& direction,
                                            bool with_improvement) const {
  if (std::abs(direction.norm() - 1.0) > 1e-9) {
    throw PreconditionError("direction must be a unit vector");
  }
  RobustnessResult r;
  if (std::find(sources.begin(), sources.end(), ContactInterfaceGraph::kFixedNode) !=
      sources.end()) {
    return r;
  }
  const PathEdges paths = path_edges(graph_, sources);
  FlowNetwork network;
  network.node_count = graph_.node_count();
  network.source = paths.source;
  network.sink = ContactInterfaceGraph::kFixedNode;
  for (std::size_t k = 0; k < paths.edges.size(); ++k) {
    const std::size_t e = paths.edges[k];
    const std::size_t iface = graph_.edges[e].interface;
    double capacity = 0.0;
    for (const OrientedPoint& p : oriented_points(interfaces_[iface], iface, solution_,
                                                  direction, paths.downstream_is_b[k])) {
      capacity += analyze_contact(p.force, p.mu, p.direction).sr_slip;
      if (with_improvement) {
        r.sri_slip += slip_derivative(p.force, p.mu, p.direction, config_.s_eval);
      }
    }
    network.edges.push_back({paths.mapped_u[e], paths.mapped_v[e], capacity});
  }
  r.sr_slip = slipping_max_flow(simplify(network));

  std::vector<const SuperObject*> supers;
  std::vector<std::vector<TopplingAxis>> axes;
  for (std::size_t s : topple_supers) {
    supers.push_back(&supers_[s]);
    axes.push_back(axes_[s]);
  }
  r.sr_top = sr_top(point, direction, supers, axes, scene_.gravity);

  if (with_improvement) {
    std::vector<double> tau_e;
    std::vector<double> tau_g;
    for (std::size_t k = 0; k < paths.edges.size(); ++k) {
      const int upstream = paths.upstream[k];
      if (upstream == ContactInterfaceGraph::kFixedNode) continue;
      const std::size_t s = singleton_[upstream];
      if (s == supers_.size()) continue;
      const ContactInterface& iface = interfaces_[graph_.edges[paths.edges[k]].interface];
      for (const TopplingAxis& axis : axes_[s]) {
        if (!near_any(axis.source, iface.points) || !near_any(axis.target, iface.points)) {
          continue;
        }
        tau_e.push_back(external_torque(axis, point, direction));
        tau_g.push_back(gravity_torque(supers_[s], axis, scene_.gravity));
      }
    }
    r.sri_top = topple_improvement(tau_e, tau_g, config_.s_eval).improvement;
    r.sri = config_.slip_weight * r.sri_slip + config_.topple_weight * r.sri_top;
  }

  r.sr = std::min(r.sr_slip, r.sr_top);
  if (std::isinf(r.sr)) {
    r.governing = Mechanism::kNone;
  } else {
    r.governing = r.sr_top < r.sr_slip ? Mechanism::kTopple : Mechanism::kSlip;
  }
  return r;
}

RobustnessResult RobustnessEngine::query(std::size_t body, const Vec3& point,
                                         const Vec3& direction) const {
  if (body >= scene_.bodies.size()) throw PreconditionError("body index out of range");
  const int node = graph_.body_node[body];
  std::vector<std::size_t> containing;
  for (std::size_t i = 0; i < supers_.size(); ++i) {
    if (supers_[i].contains_body(body)) containing.push_back(i);
  }
  return evaluate({node}, containing, point, direction, true);
}

RobustnessResult RobustnessEngine::query(const Vec3& point, const Vec3& direction) const {
  return query(body_at(point), point, direction);
}

RobustnessResult RobustnessEngine::query_super(std::size_t super_index, const Vec3& point,
                                               const Vec3& direction) const {
  if (super_index >= supers_.size()) throw PreconditionError("super-object index out of range");
  return evaluate(supers_[super_index].nodes, {super_index}, point, direction, false);
}

}  // namespace robustness
