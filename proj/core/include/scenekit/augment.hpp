#pragma once

#include "scenekit/point_cloud.hpp"
#include "scenekit/scene.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace scenekit {

struct CuboidCropParams {
  std::size_t min_points = 50000;
  double aspect = 0.8;
  double min_crop = 0.75;
  double max_crop = 1.0;
  double p = 0.1;
  int max_attempts = 100;
};

struct JitterParams {
  double sigma = 0.025;
  double clip = 0.05;
  double ratio = 0.8;
  double p = 0.9;
};

struct ElasticParams {
  /// (granularity, magnitude) pairs in meters, each applied with its own p.
  std::vector<std::pair<double, double>> granularity_magnitude{{0.2, 0.4}, {0.8, 1.6}};
  std::vector<double> p{0.8, 0.5};
};

struct RotateParams {
  std::vector<double> angles_deg{0.0, 90.0, 180.0, 270.0};
  double p = 1.0;
};

struct ScaleParams {
  double lo = 0.75;
  double hi = 1.25;
  double p = 1.0;
};

enum class ChromaticKind { auto_contrast, translation, jitter, drop };

struct ChromaticParams {
  ChromaticKind kind = ChromaticKind::auto_contrast;
  double p = 0.2;
  double ratio = 0.1;  // translation only
  double std = 0.05;   // jitter only

  static ChromaticParams defaults(ChromaticKind kind);
};

using AugmentationStep = std::variant<CuboidCropParams, JitterParams, ElasticParams, RotateParams, ScaleParams,
                                      ChromaticParams>;

struct AugmentationConfig {
  std::vector<AugmentationStep> steps;
  std::uint64_t seed = 0;

  /// Probabilities in [0, 1], non-negative sigma/clip; throws ConfigError.
  void check() const;
};

/// The full 12-step recipe: crop, four jitter rows, elastic distortion,
/// rotation, scaling, then the four color steps.
AugmentationConfig default_augmentation_config(std::uint64_t seed = 0);

/// Sets every step probability to zero.
AugmentationConfig disabled(AugmentationConfig config);

/// Key-value text: optional top-level `seed = n`, then one `[step]` section
/// per step in order. List values use JSON array syntax.
AugmentationConfig parse_augmentation_config(std::string_view text);
std::string format_augmentation_config(const AugmentationConfig& config);

std::string_view step_name(const AugmentationStep& step);

PointCloud cuboid_crop(const PointCloud& cloud, const CuboidCropParams& params, std::uint64_t seed);
PointCloud random_jitter(const PointCloud& cloud, const JitterParams& params, std::uint64_t seed);
PointCloud elastic_distort(const PointCloud& cloud, const ElasticParams& params, std::uint64_t seed);
PointCloud chromatic_augment(const PointCloud& cloud, const ChromaticParams& params, std::uint64_t seed);

struct AugmentedPair {
  PointCloud cloud;
  Scene scene;
};

/// Applies the steps in order. Rotation and scaling transform the scene with
/// the same similarity as the cloud; all other steps only touch the cloud.
/// Step i draws from derive_seed(config.seed, i).
AugmentedPair augment_pipeline(const PointCloud& cloud, const Scene& scene, const AugmentationConfig& config);

}  // namespace scenekit
