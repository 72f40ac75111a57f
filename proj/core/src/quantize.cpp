#include "scenekit/quantize.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace scenekit {

namespace {

int bin_of(double offset, double bin_size, int num_bins) {
  if (std::isnan(offset)) return 0;
  const double bin = std::floor(offset / bin_size);
  if (bin <= 0.0) return 0;
  if (bin >= static_cast<double>(num_bins - 1)) return num_bins - 1;
  return static_cast<int>(bin);
}

void check_index(int index, const QuantizationSpec& spec) {
  if (index < 0 || index >= spec.num_bins) {
    throw std::out_of_range("bin index " + std::to_string(index) + " outside [0, " + std::to_string(spec.num_bins) +
                            ")");
  }
}

double angle_bin_width(const QuantizationSpec& spec) { return 2.0 * std::numbers::pi / spec.num_bins; }

}  // namespace

void QuantizationSpec::check() const {
  if (!(bin_size > 0.0) || !std::isfinite(bin_size)) throw std::invalid_argument("bin_size must be > 0");
  if (num_bins < 1) throw std::invalid_argument("num_bins must be >= 1");
  if (!origin.allFinite()) throw std::invalid_argument("origin must be finite");
}

int quantize_coord(double x, const QuantizationSpec& spec, Axis axis) {
  return bin_of(x - spec.origin[static_cast<int>(axis)], spec.bin_size, spec.num_bins);
}

double dequantize_coord(int index, const QuantizationSpec& spec, Axis axis) {
  check_index(index, spec);
  return spec.origin[static_cast<int>(axis)] + (index + 0.5) * spec.bin_size;
}

int quantize_length(double length, const QuantizationSpec& spec) {
  return bin_of(length, spec.bin_size, spec.num_bins);
}

double dequantize_length(int index, const QuantizationSpec& spec) {
  check_index(index, spec);
  return (index + 0.5) * spec.bin_size;
}

int quantize_angle(double radians, const QuantizationSpec& spec) {
  return bin_of(normalize_angle(radians) + std::numbers::pi, angle_bin_width(spec), spec.num_bins);
}

double dequantize_angle(int index, const QuantizationSpec& spec) {
  check_index(index, spec);
  return -std::numbers::pi + (index + 0.5) * angle_bin_width(spec);
}

namespace {

Vec3 snap_point(const Vec3& p, const QuantizationSpec& spec) {
  Vec3 out;
  for (int a = 0; a < 3; ++a) {
    const auto axis = static_cast<Axis>(a);
    out[a] = dequantize_coord(quantize_coord(p[a], spec, axis), spec, axis);
  }
  return out;
}

double snap_length(double v, const QuantizationSpec& spec) { return dequantize_length(quantize_length(v, spec), spec); }

}  // namespace

Scene snap_to_grid(const Scene& scene, const QuantizationSpec& spec) {
  spec.check();
  Scene out = scene;
  for (auto& w : out.walls) {
    w.a = snap_point(w.a, spec);
    w.b = snap_point(w.b, spec);
    w.height = snap_length(w.height, spec);
    w.thickness = snap_length(w.thickness, spec);
  }
  for (auto& o : out.openings) {
    o.center = snap_point(o.center, spec);
    o.width = snap_length(o.width, spec);
    o.height = snap_length(o.height, spec);
  }
  for (auto& b : out.boxes) {
    b.center = snap_point(b.center, spec);
    b.angle_z = dequantize_angle(quantize_angle(b.angle_z, spec), spec);
    for (int a = 0; a < 3; ++a) b.scale[a] = snap_length(b.scale[a], spec);
  }
  return out;
}

}  // namespace scenekit
