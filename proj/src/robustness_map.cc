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

#include "robustness/robustness_map.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "robustness/errors.h"

namespace robustness {
namespace {

// Centered grid positions covering [lo, hi] at the given pitch.
std::vector<double> grid_positions(double lo, double hi, double pitch) {
  const double width = hi - lo;
  const int count = std::max(1, static_cast<int>(std::floor(width / pitch + 1e-9)));
  const double start = lo + 0.5 * (width - (count - 1) * pitch);
  std::vector<double> out;
  for (int i = 0; i < count; ++i) out.push_back(start + i * pitch);
  return out;
}

bool exposed(const Scene& scene, std::size_t body, const Vec3& probe) {
  for (std::size_t j = 0; j < scene.bodies.size(); ++j) {
    if (j != body && scene.bodies[j].world_shape().contains(probe, 0.0)) return false;
  }
  return true;
}

}  // namespace

std::vector<SurfacePoint> sample_surface(const ConvexPolyhedron& shape, double spacing) {
  if (!(spacing > 0.0)) throw PreconditionError("sample spacing must be positive");
  std::vector<SurfacePoint> out;
  for (std::size_t f = 0; f < shape.faces().size(); ++f) {
    const std::vector<Vec3> corners = shape.face_points(f);
    const Vec3 normal = shape.normal(f);
    const PlaneFrame plane = PlaneFrame::from_normal(normal, corners[0]);
    std::vector<Vec2> polygon;
    for (const Vec3& c : corners) polygon.push_back(plane.project(c));
    Vec2 lo = polygon[0];
    Vec2 hi = polygon[0];
    for (const Vec2& q : polygon) {
      lo = lo.cwiseMin(q);
      hi = hi.cwiseMax(q);
    }
    for (double x : grid_positions(lo.x(), hi.x(), spacing)) {
      for (double y : grid_positions(lo.y(), hi.y(), spacing)) {
        const Vec2 q(x, y);
        if (!point_in_convex_2d(q, polygon, 1e-12)) continue;
        out.push_back({plane.lift(q), normal, f});
      }
    }
  }
  return out;
}

RobustnessMap build_map(const RobustnessEngine& engine, const MapConfig& config) {
  if (!(config.density > 0.0)) throw PreconditionError("map density must be positive");
  const Scene& scene = engine.scene();
  RobustnessMap map;
  map.density = config.density;
  map.spacing = 1.0 / std::sqrt(config.density);
  map.scene_fingerprint = scene_fingerprint(scene);
  for (std::size_t b = 0; b < scene.bodies.size(); ++b) {
    for (const SurfacePoint& sp : sample_surface(scene.bodies[b].world_shape(), map.spacing)) {
      if (!exposed(scene, b, sp.point + 2.0 * config.tol_gap * sp.normal)) continue;
      MapSample s;
      s.body = b;
      s.face = sp.face;
      s.point = sp.point;
      s.normal = sp.normal;
      s.result = engine.query(b, sp.point, -sp.normal);
      map.samples.push_back(s);
    }
  }
  return map;
}

std::vector<double> sampling_weights(const RobustnessMap& map, int k, double lambda) {
  if (map.samples.empty()) throw PreconditionError("robustness map is empty");
  if (!(lambda > 0.0 && lambda < 1.0)) throw PreconditionError("lambda must lie in (0, 1)");
  if (k < 0) throw PreconditionError("iteration must be nonnegative");
  double best = -kInfinity;
  for (const MapSample& s : map.samples) best = std::max(best, s.result.sri);
  const double threshold = std::pow(lambda, k) * best;
  std::vector<double> w;
  double total = 0.0;
  for (const MapSample& s : map.samples) {
    w.push_back(std::max(0.0, s.result.sri - threshold));
    total += w.back();
  }
  if (total <= 0.0) {
    // At k = 0 the maxima sit exactly on the threshold.
    for (std::size_t i = 0; i < w.size(); ++i) {
      w[i] = (map.samples[i].result.sri == best && best > 0.0) ? 1.0 : 0.0;
      total += w[i];
    }
  }
  if (total <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0);
    total = static_cast<double>(w.size());
  }
  for (double& x : w) x /= total;
  return w;
}

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string map_to_csv(const RobustnessMap& map) {
  std::ostringstream out;
  out << "x,y,z,nx,ny,nz,sr,sri\n";
  for (const MapSample& s : map.samples) {
    out << format_value(s.point.x()) << ',' << format_value(s.point.y()) << ','
        << format_value(s.point.z()) << ',' << format_value(s.normal.x()) << ','
        << format_value(s.normal.y()) << ',' << format_value(s.normal.z()) << ','
        << format_value(s.result.sr) << ',' << format_value(s.result.sri) << '\n';
  }
  return out.str();
}

std::string map_to_ply(const RobustnessMap& map, MapChannel channel) {
  std::vector<double> values;
  std::vector<double> finite;
  for (const MapSample& s : map.samples) {
    values.push_back(channel == MapChannel::kSr ? s.result.sr : s.result.sri);
    if (std::isfinite(values.back())) finite.push_back(values.back());
  }
  double lo = 0.0;
  double hi = 0.0;
  if (!finite.empty()) {
    std::sort(finite.begin(), finite.end());
    lo = finite.front();
    hi = finite[static_cast<std::size_t>(std::floor(0.99 * (finite.size() - 1)))];
  }
  std::ostringstream out;
  out << "ply\nformat ascii 1.0\nelement vertex " << map.samples.size() << '\n'
      << "property float x\nproperty float y\nproperty float z\n"
      << "property float nx\nproperty float ny\nproperty float nz\n"
      << "property uchar value\nend_header\n";
  for (std::size_t i = 0; i < map.samples.size(); ++i) {
    const MapSample& s = map.samples[i];
    int level = 255;
    if (std::isfinite(values[i])) {
      const double t = hi > lo ? std::clamp((values[i] - lo) / (hi - lo), 0.0, 1.0) : 0.0;
      level = static_cast<int>(std::lround(255.0 * t));
    }
    out << format_value(s.point.x()) << ' ' << format_value(s.point.y()) << ' '
        << format_value(s.point.z()) << ' ' << format_value(s.normal.x()) << ' '
        << format_value(s.normal.y()) << ' ' << format_value(s.normal.z()) << ' ' << level
        << '\n';
  }
  return out.str();
}

}  // namespace robustness
