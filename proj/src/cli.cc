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

#include "robustness/cli.h"

#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "robustness/assessment.h"
#include "robustness/contact_graph.h"
#include "robustness/contacts.h"
#include "robustness/equilibrium.h"
#include "robustness/errors.h"
#include "robustness/msa.h"
#include "robustness/placement.h"
#include "robustness/robustness_map.h"
#include "robustness/scene.h"

namespace robustness {
namespace {

using nlohmann::json;

struct Options {
  std::string scene;
  std::string out;
  std::string dump_cig;
  int polygon_sides = 8;
  std::string mode = "relaxed";
  int max_iters = 50;
  double tol_force = 1e-7;
  std::uint64_t seed = 0;
  double density = 100.0;
  std::vector<double> sri_weights = {1.0, 1.0};
  double payload_mass = 0.0;
  int directions = 100;
  std::string direction_set = "horizontal";
  std::string payload;
  std::string init_pose;
  std::string trace;
  double lambda = 0.995;
  double M = 0.1;
  int K = 15;
  double D = 0.0;
};

json number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : "-inf";
}

json vec(const Vec3& v) { return json::array({number(v.x()), number(v.y()), number(v.z())}); }

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << v;
  return s.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw PreconditionError(path + ": cannot write file");
  f << content;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

// Emits one JSON line per completed stage.
class StageLog {
 public:
  explicit StageLog(std::ostream& err) : err_(err), start_(Clock::now()) {}
  void done(const std::string& stage) {
    const auto now = Clock::now();
    err_ << json{{"stage", stage},
                 {"seconds", std::chrono::duration<double>(now - start_).count()}}
                .dump()
         << '\n';
    start_ = now;
  }

 private:
  using Clock = std::chrono::steady_clock;
  std::ostream& err_;
  Clock::time_point start_;
};

struct Loaded {
  Scene scene;
  std::vector<ContactInterface> interfaces;
  ForceSolution solution;
};

Loaded load(const Options& o, StageLog& log) {
  Loaded l;
  l.scene = load_scene_file(o.scene);
  log.done("load");
  l.interfaces = detect_contacts(l.scene);
  log.done("contacts");
  SolverConfig config;
  config.polygon_sides = o.polygon_sides;
  config.mode = o.mode == "full" ? SolveMode::kFull : SolveMode::kRelaxed;
  config.max_iters = o.max_iters;
  config.tol_force = o.tol_force;
  l.solution = solve_forces(l.scene, l.interfaces, config);
  log.done("solve");
  if (!o.dump_cig.empty()) write_file(o.dump_cig, to_dot(build_cig(l.scene, l.interfaces)));
  return l;
}

RobustnessConfig robustness_config(const Options& o, const Scene& scene) {
  RobustnessConfig c;
  c.slip_weight = o.sri_weights.at(0);
  c.topple_weight = o.sri_weights.at(1);
  if (o.payload_mass > 0.0) c.s_eval = o.payload_mass * scene.gravity.norm() / 3.0;
  return c;
}

json base_summary(const std::string& command, const Options& o, const Scene& scene) {
  return json{{"command", command},
              {"scene", o.scene},
              {"scene_fingerprint", hex(scene_fingerprint(scene))},
              {"seed", o.seed}};
}

json forces_json(const Loaded& l) {
  json interfaces = json::array();
  for (std::size_t i = 0; i < l.interfaces.size(); ++i) {
    const ContactInterface& iface = l.interfaces[i];
    json points = json::array();
    for (std::size_t k = 0; k < iface.points.size(); ++k) {
      json p{{"position", vec(iface.points[k].position)}, {"normal", vec(iface.points[k].normal())}};
      if (l.solution.stable()) {
        const ContactForce& f = l.solution.at(i, k);
        p["force_local"] = vec(f.local());
        p["force_world"] = vec(iface.points[k].frame * f.local());
        p["contact_condition"] = number(f.contact_condition);
      }
      points.push_back(p);
    }
    interfaces.push_back({{"body_a", iface.body_a},
                          {"body_b", iface.body_b},
                          {"mu", iface.mu},
                          {"points", points}});
  }
  return interfaces;
}

int solve_command(const Options& o, std::ostream& out, StageLog& log) {
  const Loaded l = load(o, log);
  json s = base_summary("solve-forces", o, l.scene);
  s["status"] = l.solution.stable() ? "stable" : "unstable";
  s["mode"] = o.mode;
  s["objective"] = number(l.solution.objective);
  s["infeasibility"] = number(l.solution.infeasibility);
  s["iterations"] = l.solution.iterations;
  s["interfaces"] = forces_json(l);
  if (l.solution.stable()) {
    double worst = 0.0;
    for (double r : equilibrium_residuals(l.scene, l.interfaces, l.solution)) {
      worst = std::max(worst, r);
    }
    s["max_equilibrium_residual"] = worst;
  }
  if (!o.out.empty()) write_file(o.out, s.dump(2) + "\n");
  out << s.dump() << '\n';
  return l.solution.stable() ? kExitOk : kExitUnstable;
}

int map_command(const Options& o, MapChannel channel, std::ostream& out, StageLog& log) {
  Loaded l = load(o, log);
  const RobustnessConfig config = robustness_config(o, l.scene);
  const RobustnessEngine engine(l.scene, std::move(l.interfaces), std::move(l.solution), config);
  log.done("assess");
  MapConfig mc;
  mc.density = o.density;
  const RobustnessMap map = build_map(engine, mc);
  log.done("map");
  double sr_min = kInfinity;
  double sri_min = kInfinity;
  double sri_max = -kInfinity;
  std::size_t infinite = 0;
  for (const MapSample& m : map.samples) {
    sr_min = std::min(sr_min, m.result.sr);
    sri_min = std::min(sri_min, m.result.sri);
    sri_max = std::max(sri_max, m.result.sri);
    if (std::isinf(m.result.sr)) ++infinite;
  }
  if (!o.out.empty()) {
    write_file(o.out, ends_with(o.out, ".ply") ? map_to_ply(map, channel) : map_to_csv(map));
    log.done("write");
  }
  json s = base_summary(channel == MapChannel::kSr ? "sr-map" : "sri-map", o, engine.scene());
  s["status"] = "ok";
  s["samples"] = map.samples.size();
  s["density"] = map.density;
  s["spacing"] = map.spacing;
  s["s_eval"] = config.s_eval;
  s["sr_min"] = number(sr_min);
  s["sr_infinite_samples"] = infinite;
  s["sri_min"] = number(map.samples.empty() ? 0.0 : sri_min);
  s["sri_max"] = number(map.samples.empty() ? 0.0 : sri_max);
  s["out"] = o.out;
  out << s.dump() << '\n';
  return kExitOk;
}

int msa_command(const Options& o, std::ostream& out, StageLog& log) {
  Loaded l = load(o, log);
  const RobustnessConfig config = robustness_config(o, l.scene);
  const RobustnessEngine engine(l.scene, std::move(l.interfaces), std::move(l.solution), config);
  log.done("assess");
  const std::vector<Vec3> dirs = o.direction_set == "sphere"
                                     ? fibonacci_directions(o.directions)
                                     : horizontal_directions(o.directions);
  const MsaResult r = compute_msa(engine, dirs);
  log.done("msa");
  if (!o.out.empty()) write_file(o.out, msa_to_csv(r));
  std::size_t worst = 0;
  for (std::size_t i = 1; i < r.msa.size(); ++i) {
    if (r.msa[i] < r.msa[worst]) worst = i;
  }
  json s = base_summary("msa", o, engine.scene());
  s["status"] = "ok";
  s["directions"] = r.directions.size();
  s["direction_set"] = o.direction_set;
  if (!r.msa.empty()) {
    s["min_msa"] = number(r.msa[worst]);
    s["min_direction"] = vec(r.directions[worst]);
    s["limiting_super"] = r.limiting_super[worst];
    s["mechanism"] = to_string(r.mechanism[worst]);
  }
  s["out"] = o.out;
  out << s.dump() << '\n';
  return kExitOk;
}

RigidBody load_payload(const std::string& path) {
  if (path.empty()) throw PreconditionError("place needs --payload");
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream text;
  text << in.rdbuf();
  json j;
  try {
    j = json::parse(text.str());
  } catch (const json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  return parse_body(j, "payload");
}

std::vector<double> parse_numbers(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw PreconditionError("--init-pose: bad number '" + item + "'");
    }
  }
  return v;
}

// Rests the object on a map sample drawn from the sampling weights.
Pose sampled_pose(const RobustnessMap& map, const RigidBody& object, const Options& o) {
  const std::vector<double> w = sampling_weights(map, 0, o.lambda);
  std::mt19937_64 rng(o.seed);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  const MapSample& s = map.samples[pick(rng)];
  double reach = -kInfinity;
  for (const Vec3& v : object.shape.vertices()) {
    reach = std::max(reach, -s.normal.dot(object.pose.rotation * (v - object.com)));
  }
  Pose p = object.pose;
  p.translation = s.point + reach * s.normal - object.pose.rotation * object.com;
  return p;
}

int place_command(const Options& o, std::ostream& out, StageLog& log) {
  RigidBody payload = load_payload(o.payload);
  Loaded l = load(o, log);
  Options eff = o;
  if (eff.payload_mass <= 0.0) eff.payload_mass = payload.mass;
  const RobustnessConfig config = robustness_config(eff, l.scene);
  const RobustnessEngine engine(l.scene, std::move(l.interfaces), std::move(l.solution), config);
  log.done("assess");
  MapConfig mc;
  mc.density = o.density;
  const RobustnessMap map = build_map(engine, mc);
  log.done("map");

  if (o.init_pose == "sample") {
    payload.pose = sampled_pose(map, payload, o);
  } else if (!o.init_pose.empty()) {
    const std::vector<double> v = parse_numbers(o.init_pose);
    if (v.size() != 3 && v.size() != 7) {
      throw PreconditionError("--init-pose takes x,y,z or x,y,z,qw,qx,qy,qz or 'sample'");
    }
    payload.pose.translation = Vec3(v[0], v[1], v[2]);
    if (v.size() == 7) {
      const Eigen::Quaterniond q(v[3], v[4], v[5], v[6]);
      if (std::abs(q.norm() - 1.0) > 1e-6) throw PreconditionError("--init-pose quaternion is not unit");
      payload.pose.rotation = q.normalized();
    }
  }

  PlacementConfig pc;
  pc.M = o.M;
  pc.K = o.K;
  if (o.D > 0.0) pc.D = o.D;
  pc.max_iters = o.max_iters;
  PlacementState state;
  state.object = payload;
  const IpaResult r = ipa_refine(engine.scene(), map, state, pc);
  log.done("place");
  const Scene placed = with_object(engine.scene(), r.state.object);
  const bool stable = solve_forces(placed, detect_contacts(placed)).stable();
  log.done("verify");

  const json final_body = body_to_json(r.state.object);
  if (!o.out.empty()) write_file(o.out, final_body.dump(2) + "\n");
  if (!o.trace.empty()) write_file(o.trace, trace_to_csv(r.trace));
  json s = base_summary("place", o, engine.scene());
  s["status"] = "ok";
  s["iterations"] = r.state.iteration;
  s["converged"] = r.state.converged;
  s["stable"] = stable;
  s["initial_pose"] = body_to_json(payload)["pose"];
  s["final_pose"] = final_body["pose"];
  s["initial_mean_sri"] = number(r.initial_mean_sri);
  s["final_mean_sri"] = number(r.final_mean_sri);
  s["out"] = o.out;
  out << s.dump() << '\n';
  return kExitOk;
}

int cig_command(const Options& o, std::ostream& out, StageLog& log) {
  const Scene scene = load_scene_file(o.scene);
  const std::vector<ContactInterface> interfaces = detect_contacts(scene);
  log.done("contacts");
  const ContactInterfaceGraph g = build_cig(scene, interfaces);
  const std::string dot = to_dot(g);
  if (!o.out.empty()) write_file(o.out, dot);
  json edges = json::array();
  for (const CigEdge& e : g.edges) {
    edges.push_back({{"u", g.nodes[e.u]}, {"v", g.nodes[e.v]}, {"interface", e.interface}});
  }
  json s = base_summary("dump-cig", o, scene);
  s["status"] = "ok";
  s["nodes"] = g.nodes;
  s["edges"] = edges;
  s["out"] = o.out;
  out << s.dump() << '\n';
  return kExitOk;
}

void add_scene_options(CLI::App* cmd, Options& o) {
  cmd->add_option("scene,--scene", o.scene, "Scene JSON file")->required();
  cmd->add_option("--out", o.out, "Output artifact path");
  cmd->add_option("--seed", o.seed, "Random seed")->capture_default_str();
}

void add_solver_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--polygon-sides", o.polygon_sides, "Friction polygon sides")
      ->check(CLI::Range(3, 1000))
      ->capture_default_str();
  cmd->add_option("--mode", o.mode, "Solver mode")
      ->check(CLI::IsMember({"relaxed", "full"}))
      ->capture_default_str();
  cmd->add_option("--max-iters", o.max_iters, "Iteration limit")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--tol-force", o.tol_force, "Force tolerance, N")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--dump-cig", o.dump_cig, "Also write the contact interface graph as DOT");
}

void add_robustness_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--sri-weights", o.sri_weights, "Slip and topple SRI weights")
      ->expected(2)
      ->delimiter(',')
      ->capture_default_str();
  cmd->add_option("--payload-mass", o.payload_mass,
                  "Mass whose weight / 3 sets the SRI evaluation force; 1 N when 0")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
}

}  // namespace

int exit_code_for(const Error& e) {
  if (dynamic_cast<const UnstableError*>(&e)) return kExitUnstable;
  if (dynamic_cast<const IndeterminateError*>(&e)) return kExitIndeterminate;
  return kExitInvalidInput;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Static robustness of rigid assemblies in frictional contact", "robustness"};
  app.require_subcommand(1);

  CLI::App* solve = app.add_subcommand("solve-forces", "Resolve contact forces");
  add_scene_options(solve, o);
  add_solver_options(solve, o);

  CLI::App* sr_map = app.add_subcommand("sr-map", "Static robustness map (CSV or .ply)");
  CLI::App* sri_map = app.add_subcommand("sri-map", "Static robustness improvement map (CSV or .ply)");
  for (CLI::App* cmd : {sr_map, sri_map}) {
    add_scene_options(cmd, o);
    add_solver_options(cmd, o);
    add_robustness_options(cmd, o);
    cmd->add_option("--density", o.density, "Samples per square meter")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  CLI::App* msa = app.add_subcommand("msa", "Maximal sustainable accelerations (CSV)");
  add_scene_options(msa, o);
  add_solver_options(msa, o);
  add_robustness_options(msa, o);
  msa->add_option("--directions", o.directions, "Number of directions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  msa->add_option("--direction-set", o.direction_set, "Horizontal circle or Fibonacci sphere")
      ->check(CLI::IsMember({"horizontal", "sphere"}))
      ->capture_default_str();

  CLI::App* place = app.add_subcommand("place", "Refine a payload pose (writes the final body JSON)");
  add_scene_options(place, o);
  add_solver_options(place, o);
  add_robustness_options(place, o);
  place->add_option("--density", o.density, "Map samples per square meter")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  place->add_option("--payload", o.payload, "Payload body JSON")->required();
  place->add_option("--init-pose", o.init_pose,
                    "x,y,z or x,y,z,qw,qx,qy,qz, or 'sample' to draw from the SRI weights");
  place->add_option("--trace", o.trace, "Per-iteration trace CSV");
  place->add_option("--lambda", o.lambda, "Sampling weight decay")->capture_default_str();
  place->add_option("--M", o.M, "Perturbation magnitude, m")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  place->add_option("--K", o.K, "Nearest neighbours")->check(CLI::PositiveNumber)->capture_default_str();
  place->add_option("--D", o.D, "Correspondence distance, m; 0 selects twice the map spacing")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();

  CLI::App* cig = app.add_subcommand("dump-cig", "Contact interface graph (DOT)");
  add_scene_options(cig, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalidInput;
  }

  StageLog log(err);
  std::string command = app.get_subcommands().front()->get_name();
  auto fail = [&](const char* status, const std::string& message, int code) {
    out << json{{"command", command}, {"status", status}, {"message", message}}.dump() << '\n';
    err << "error: " << message << '\n';
    return code;
  };
  try {
    if (solve->parsed()) return solve_command(o, out, log);
    if (sr_map->parsed()) return map_command(o, MapChannel::kSr, out, log);
    if (sri_map->parsed()) return map_command(o, MapChannel::kSri, out, log);
    if (msa->parsed()) return msa_command(o, out, log);
    if (place->parsed()) return place_command(o, out, log);
    return cig_command(o, out, log);
  } catch (const Error& e) {
    const int code = exit_code_for(e);
    return fail(code == kExitUnstable        ? "unstable"
                : code == kExitIndeterminate ? "indeterminate"
                                             : "invalid",
                e.what(), code);
  } catch (const nlohmann::json::exception& e) {
    return fail("invalid", e.what(), kExitInvalidInput);
  }
}

}  // namespace robustness
