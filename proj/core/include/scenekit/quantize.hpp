#pragma once

#include "scenekit/scene.hpp"

namespace scenekit {

enum class Axis { x = 0, y = 1, z = 2 };

/// Coordinate discretization. Positions are binned after subtracting the
/// per-axis origin; lengths are binned from zero; angles use `num_bins`
/// uniform bins over [-pi, pi).
struct QuantizationSpec {
  Vec3 origin = Vec3::Zero();
  double bin_size = 0.025;
  int num_bins = 1280;

  /// Throws std::invalid_argument unless bin_size > 0 and num_bins >= 1.
  void check() const;
};

/// floor((x - origin[axis]) / bin_size), clamped to [0, num_bins - 1].
/// NaN maps to bin 0.
int quantize_coord(double x, const QuantizationSpec& spec, Axis axis);

/// Bin-center reconstruction: origin[axis] + (i + 0.5) * bin_size.
/// Throws std::out_of_range for i outside [0, num_bins).
double dequantize_coord(int index, const QuantizationSpec& spec, Axis axis);

int quantize_length(double length, const QuantizationSpec& spec);
double dequantize_length(int index, const QuantizationSpec& spec);

int quantize_angle(double radians, const QuantizationSpec& spec);
double dequantize_angle(int index, const QuantizationSpec& spec);

/// Snaps every numeric field of the scene to its bin center. The result is a
/// fixed point of serialize-with-spec followed by parse-with-spec.
Scene snap_to_grid(const Scene& scene, const QuantizationSpec& spec);

}  // namespace scenekit
