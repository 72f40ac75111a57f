#pragma once

#include "scenekit/point_cloud.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace scenekit {

struct VoxelKey {
  std::int64_t i = 0;
  std::int64_t j = 0;
  std::int64_t k = 0;

  auto operator<=>(const VoxelKey&) const = default;
};

/// floor((p - origin) / cell) per axis.
VoxelKey voxel_key(const Vec3& p, const Vec3& origin, double cell);

/// One point per occupied voxel holding the members' mean position and color,
/// ordered by VoxelKey. The grid origin is the cloud's AABB minimum.
/// Throws std::invalid_argument for cell <= 0.
PointCloud voxel_downsample(const PointCloud& cloud, double cell);

/// Number of distinct voxel keys at the given cell size.
std::size_t count_occupied_voxels(const PointCloud& cloud, double cell);

/// Greedy max-min selection starting from `start`; ties go to the lowest
/// index. Throws std::out_of_range unless 1 <= k <= N and start < N.
std::vector<std::size_t> farthest_point_sampling_from(const PointCloud& cloud, std::size_t k, std::size_t start);

/// As above with the start index drawn uniformly from `seed`.
std::vector<std::size_t> farthest_point_sampling(const PointCloud& cloud, std::size_t k, std::uint64_t seed);

/// The start index farthest_point_sampling uses for (N, seed).
std::size_t fps_start_index(std::size_t n, std::uint64_t seed);

/// Grid-pool hierarchy: level l has cell size finest_cell * 2^l.
struct HierarchySpec {
  double finest_cell = 0.025;
  int levels = 5;
  static constexpr int branching = 2;

  double cell_at(int level) const;
  void check() const;
};

struct TokenCounts {
  /// Occupied voxels per level, finest first.
  std::vector<std::size_t> per_level;

  /// Token count K: the coarsest level's count.
  std::size_t k() const { return per_level.empty() ? 0 : per_level.back(); }
};

/// Throws std::invalid_argument for an empty cloud.
TokenCounts count_tokens(const PointCloud& cloud, const HierarchySpec& spec);

}  // namespace scenekit
