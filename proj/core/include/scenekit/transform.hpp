#pragma once

#include "scenekit/point_cloud.hpp"
#include "scenekit/quantize.hpp"
#include "scenekit/scene.hpp"

#include <optional>

namespace scenekit {

/// p -> scale * Rz(rotation_z) * p + translation.
struct Similarity {
  double rotation_z = 0.0;
  double scale = 1.0;
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const;

  /// The transform equivalent to applying `first`, then `second`.
  static Similarity compose(const Similarity& first, const Similarity& second);
};

/// Applies the similarity to every element. Extents scale, box angles rotate
/// and are renormalized. Throws std::invalid_argument for scale <= 0.
Scene apply_similarity(const Scene& scene, const Similarity& transform);
Scene apply_similarity(const Scene& scene, double rotation_z, double scale, const Vec3& translation);

PointCloud apply_similarity(const PointCloud& cloud, const Similarity& transform);

struct NormalizedScene {
  Scene scene;
  PointCloud cloud;
  /// origin = the subtracted offset. Quantizing the original coordinates with
  /// this spec equals quantizing the normalized ones from zero.
  QuantizationSpec spec;
};

/// Translates scene and cloud jointly so the minimum x/y/z over all element
/// corners and cloud points becomes 0. Throws std::invalid_argument when both
/// inputs are empty.
NormalizedScene normalize_scene(const Scene& scene, const std::optional<PointCloud>& cloud = std::nullopt,
                                const QuantizationSpec& base = {});

}  // namespace scenekit
