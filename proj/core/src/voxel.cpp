#include "scenekit/voxel.hpp"

#include "scenekit/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>

namespace scenekit {

namespace {

void require_cell(double cell) {
  if (!(cell > 0.0) || !std::isfinite(cell)) {
    throw std::invalid_argument("voxel cell size must be positive, got " + std::to_string(cell));
  }
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

VoxelKey voxel_key(const Vec3& p, const Vec3& origin, double cell) {
  const Vec3 g = (p - origin) / cell;
  return {static_cast<std::int64_t>(std::floor(g.x())), static_cast<std::int64_t>(std::floor(g.y())),
          static_cast<std::int64_t>(std::floor(g.z()))};
}

PointCloud voxel_downsample(const PointCloud& cloud, double cell) {
  require_cell(cell);
  PointCloud out;
  const auto box = bounds(cloud);
  if (!box) return out;

  struct Acc {
    Vec3 position = Vec3::Zero();
    Vec3 color = Vec3::Zero();
    std::size_t n = 0;
  };
  std::map<VoxelKey, Acc> voxels;
  for (const auto& p : cloud.points) {
    auto& acc = voxels[voxel_key(p.position, box->min, cell)];
    acc.position += p.position;
    acc.color += p.color;
    ++acc.n;
  }
  out.points.reserve(voxels.size());
  for (const auto& [key, acc] : voxels) {
    const double inv = 1.0 / static_cast<double>(acc.n);
    out.points.push_back({acc.position * inv, acc.color * inv});
  }
  return out;
}

std::size_t count_occupied_voxels(const PointCloud& cloud, double cell) {
  require_cell(cell);
  const auto box = bounds(cloud);
  if (!box) return 0;
  std::vector<VoxelKey> keys;
  keys.reserve(cloud.size());
  for (const auto& p : cloud.points) keys.push_back(voxel_key(p.position, box->min, cell));
  std::sort(keys.begin(), keys.end());
  return static_cast<std::size_t>(std::unique(keys.begin(), keys.end()) - keys.begin());
}

std::vector<std::size_t> farthest_point_sampling_from(const PointCloud& cloud, std::size_t k, std::size_t start) {
  const std::size_t n = cloud.size();
  if (k < 1 || k > n) {
    throw std::out_of_range("FPS sample count " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  }
  if (start >= n) throw std::out_of_range("FPS start index " + std::to_string(start) + " out of range");

  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> picked;
  picked.reserve(k);
  std::size_t current = start;
  for (std::size_t step = 0; step < k; ++step) {
    picked.push_back(current);
    dist[current] = -1.0;
    const Vec3& c = cloud.points[current].position;
    std::size_t best = n;
    double best_d = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (dist[i] < 0.0) continue;
      dist[i] = std::min(dist[i], (cloud.points[i].position - c).squaredNorm());
      if (dist[i] > best_d) {
        best_d = dist[i];
        best = i;
      }
    }
    current = best;
  }
  return picked;
}

std::size_t fps_start_index(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::out_of_range("FPS on an empty cloud");
  CounterRng rng(seed);
  return static_cast<std::size_t>(rng.below(n));
}

std::vector<std::size_t> farthest_point_sampling(const PointCloud& cloud, std::size_t k, std::uint64_t seed) {
  if (cloud.empty()) throw std::out_of_range("FPS on an empty cloud");
  return farthest_point_sampling_from(cloud, k, fps_start_index(cloud.size(), seed));
}

double HierarchySpec::cell_at(int level) const { return std::ldexp(finest_cell, level); }

void HierarchySpec::check() const {
  if (!(finest_cell > 0.0) || !std::isfinite(finest_cell)) {
    throw std::invalid_argument("finest cell must be positive");
  }
  if (levels < 1) throw std::invalid_argument("hierarchy needs at least one level");
}

TokenCounts count_tokens(const PointCloud& cloud, const HierarchySpec& spec) {
  spec.check();
  if (cloud.empty()) throw std::invalid_argument("count_tokens on an empty cloud");
  const Vec3 origin = bounds(cloud)->min;

  std::vector<VoxelKey> keys;
  keys.reserve(cloud.size());
  for (const auto& p : cloud.points) keys.push_back(voxel_key(p.position, origin, spec.finest_cell));

  TokenCounts counts;
  for (int level = 0; level < spec.levels; ++level) {
    if (level > 0) {
      for (auto& key : keys) {
        key = {floor_div(key.i, HierarchySpec::branching), floor_div(key.j, HierarchySpec::branching),
               floor_div(key.k, HierarchySpec::branching)};
      }
    }
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    counts.per_level.push_back(keys.size());
  }
  return counts;
}

}  // namespace scenekit
