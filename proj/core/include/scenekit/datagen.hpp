#pragma once

#include "scenekit/point_cloud.hpp"
#include "scenekit/scene.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace scenekit {

template <typename T>
struct Range {
  T lo;
  T hi;
};

/// Synthetic corpus parameters. Rooms are axis-aligned rectangles laid out
/// along +x with a gap between them.
struct GenConfig {
  Range<int> rooms{1, 2};
  Range<double> room_width{3.5, 7.0};
  Range<double> room_depth{3.0, 6.0};
  Range<double> room_height{2.5, 3.0};
  Range<int> openings_per_wall{0, 2};
  Range<int> boxes_per_room{3, 7};
  std::vector<std::string> categories{"bed",   "cabinet", "chair",      "sofa",
                                      "table", "nightstand", "bookcase", "plants"};
  /// Surface samples per square meter.
  double density = 100.0;
  /// Gaussian position noise of sampled points (m).
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;

  /// Throws ConfigError for empty or inverted ranges and density <= 0.
  void check() const;
};

/// Throws ConfigError when no opening can fit on the smallest wall.
Scene gen_scene(const GenConfig& config);

/// Uniform samples on wall quads (minus opening cutouts) and box faces.
PointCloud sample_cloud(const Scene& scene, const GenConfig& config);

struct Perturbation {
  double sigma_pos = 0.0;
  double sigma_angle = 0.0;
  double drop_rate = 0.0;
  std::uint64_t seed = 0;
};

/// Jitters element positions and box angles, then drops a seeded fraction of
/// elements (openings go with their wall). Ids are re-densified; the result
/// stays valid.
Scene perturb_scene(const Scene& scene, const Perturbation& perturbation);

/// Key-value text (`key = value`, ranges as `[lo, hi]`).
GenConfig parse_gen_config(std::string_view text);

/// Scene i uses seed derive_seed(config.seed, i). Writes
/// `<dir>/<scene_id>/{scene.txt, points.ply}` and returns the scene ids.
std::vector<std::string> write_corpus(const std::filesystem::path& dir, const GenConfig& config, std::size_t count);

/// The config write_corpus uses for scene `index`.
GenConfig corpus_scene_config(const GenConfig& config, std::size_t index);

}  // namespace scenekit
