#include "scenekit/augment.hpp"

#include "scenekit/random.hpp"
#include "scenekit/transform.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <type_traits>
#include <variant>
#include <vector>

namespace scenekit {

namespace {

// Bernoulli draws use their own stream so that a step's decision does not
// shift the draws of the work it gates.
constexpr std::uint64_t kGateStream = 0;
constexpr std::uint64_t kWorkStream = 1;

bool gate(std::uint64_t seed, double p) {
  CounterRng rng(derive_seed(seed, kGateStream));
  return rng.bernoulli(p);
}

Vec3 clamp01(const Vec3& c) { return c.cwiseMax(0.0).cwiseMin(1.0); }

struct NoiseGrid {
  Vec3 origin;
  double cell = 1.0;
  std::array<long, 3> dims{};
  std::vector<Vec3> nodes;

  std::size_t index(long i, long j, long k) const {
    return (static_cast<std::size_t>(i) * dims[1] + static_cast<std::size_t>(j)) * dims[2] +
           static_cast<std::size_t>(k);
  }
  Vec3& at(long i, long j, long k) { return nodes[index(i, j, k)]; }
  const Vec3& at(long i, long j, long k) const { return nodes[index(i, j, k)]; }

  // Three-tap box filter along one axis; edges average over available taps.
  void blur(int axis) {
    std::vector<Vec3> out(nodes.size(), Vec3::Zero());
    for (long i = 0; i < dims[0]; ++i) {
      for (long j = 0; j < dims[1]; ++j) {
        for (long k = 0; k < dims[2]; ++k) {
          std::array<long, 3> c{i, j, k};
          Vec3 sum = Vec3::Zero();
          int n = 0;
          for (long d = -1; d <= 1; ++d) {
            std::array<long, 3> q = c;
            q[axis] += d;
            if (q[axis] < 0 || q[axis] >= dims[axis]) continue;
            sum += at(q[0], q[1], q[2]);
            ++n;
          }
          out[index(i, j, k)] = sum / n;
        }
      }
    }
    nodes.swap(out);
  }

  Vec3 sample(const Vec3& p) const {
    const Vec3 g = (p - origin) / cell;
    std::array<long, 3> base{};
    std::array<double, 3> frac{};
    for (int a = 0; a < 3; ++a) {
      const double f = std::floor(g[a]);
      base[a] = std::clamp(static_cast<long>(f), 0L, dims[a] - 2);
      frac[a] = std::clamp(g[a] - static_cast<double>(base[a]), 0.0, 1.0);
    }
    Vec3 v = Vec3::Zero();
    for (int corner = 0; corner < 8; ++corner) {
      double w = 1.0;
      std::array<long, 3> q{};
      for (int a = 0; a < 3; ++a) {
        const bool hi = (corner >> a) & 1;
        q[a] = base[a] + (hi ? 1 : 0);
        w *= hi ? frac[a] : 1.0 - frac[a];
      }
      v += w * at(q[0], q[1], q[2]);
    }
    return v;
  }
};

PointCloud distort_once(const PointCloud& cloud, double granularity, double magnitude, std::uint64_t seed) {
  const auto box = bounds(cloud);
  NoiseGrid grid;
  grid.cell = granularity;
  grid.origin = box->min - Vec3::Constant(granularity);
  for (int a = 0; a < 3; ++a) {
    grid.dims[a] = static_cast<long>(std::floor(box->extent()[a] / granularity)) + 3;
  }
  grid.nodes.resize(static_cast<std::size_t>(grid.dims[0]) * grid.dims[1] * grid.dims[2]);
  CounterRng rng(seed);
  for (auto& v : grid.nodes) {
    v = Vec3(rng.normal(), rng.normal(), rng.normal());
    // Truncate at norm 3 so the interpolated field is bounded by 3.
    const double n = v.norm();
    if (n > 3.0) v *= 3.0 / n;
  }
  for (int pass = 0; pass < 2; ++pass) {
    for (int axis = 0; axis < 3; ++axis) grid.blur(axis);
  }

  PointCloud out = cloud;
  for (auto& p : out.points) p.position += magnitude * grid.sample(p.position);
  return out;
}

PointCloud translate_colors(const PointCloud& cloud, double ratio, CounterRng& rng) {
  const Vec3 offset(rng.uniform(-ratio, ratio), rng.uniform(-ratio, ratio), rng.uniform(-ratio, ratio));
  PointCloud out = cloud;
  for (auto& p : out.points) p.color = clamp01(p.color + offset);
  return out;
}

PointCloud stretch_colors(const PointCloud& cloud) {
  PointCloud out = cloud;
  if (cloud.empty()) return out;
  Vec3 lo = cloud.points.front().color;
  Vec3 hi = lo;
  for (const auto& p : cloud.points) {
    lo = lo.cwiseMin(p.color);
    hi = hi.cwiseMax(p.color);
  }
  for (int c = 0; c < 3; ++c) {
    const double range = hi[c] - lo[c];
    if (!(range > 0.0)) continue;
    for (auto& p : out.points) p.color[c] = std::clamp((p.color[c] - lo[c]) / range, 0.0, 1.0);
  }
  return out;
}

}  // namespace

PointCloud cuboid_crop(const PointCloud& cloud, const CuboidCropParams& params, std::uint64_t seed) {
  if (cloud.empty() || !gate(seed, params.p)) return cloud;
  const Aabb box = *bounds(cloud);
  const Vec3 extent = box.extent();
  CounterRng rng(derive_seed(seed, kWorkStream));

  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    const Vec3 center = cloud.points[rng.below(cloud.size())].position;
    Vec3 frac;
    for (int a = 0; a < 3; ++a) frac[a] = rng.uniform(params.min_crop, params.max_crop);
    if (frac.minCoeff() < params.aspect * frac.maxCoeff()) continue;

    // Shift the cuboid back inside the cloud's box, so a full-size crop
    // keeps everything.
    Vec3 lo = box.min;
    Vec3 hi = box.max;
    for (int a = 0; a < 3; ++a) {
      if (frac[a] >= 1.0) continue;
      const double size = frac[a] * extent[a];
      lo[a] = std::clamp(center[a] - 0.5 * size, box.min[a], box.max[a] - size);
      hi[a] = lo[a] + size;
    }
    PointCloud out;
    for (const auto& p : cloud.points) {
      if ((p.position.array() >= lo.array()).all() && (p.position.array() <= hi.array()).all()) {
        out.points.push_back(p);
      }
    }
    if (out.size() >= params.min_points) return out;
  }
  return cloud;
}

PointCloud random_jitter(const PointCloud& cloud, const JitterParams& params, std::uint64_t seed) {
  if (params.sigma <= 0.0 || params.ratio <= 0.0 || !gate(seed, params.p)) return cloud;
  CounterRng rng(derive_seed(seed, kWorkStream));
  PointCloud out = cloud;
  for (auto& p : out.points) {
    if (!rng.bernoulli(params.ratio)) continue;
    for (int a = 0; a < 3; ++a) {
      p.position[a] += std::clamp(params.sigma * rng.normal(), -params.clip, params.clip);
    }
  }
  return out;
}

PointCloud elastic_distort(const PointCloud& cloud, const ElasticParams& params, std::uint64_t seed) {
  PointCloud out = cloud;
  if (cloud.empty()) return out;
  for (std::size_t i = 0; i < params.granularity_magnitude.size(); ++i) {
    const auto [granularity, magnitude] = params.granularity_magnitude[i];
    const double p = i < params.p.size() ? params.p[i] : 1.0;
    const std::uint64_t pair_seed = derive_seed(seed, i);
    if (magnitude == 0.0 || granularity <= 0.0 || !gate(pair_seed, p)) continue;
    out = distort_once(out, granularity, magnitude, derive_seed(pair_seed, kWorkStream));
  }
  return out;
}

PointCloud chromatic_augment(const PointCloud& cloud, const ChromaticParams& params, std::uint64_t seed) {
  if (cloud.empty() || !gate(seed, params.p)) return cloud;
  CounterRng rng(derive_seed(seed, kWorkStream));
  switch (params.kind) {
    case ChromaticKind::auto_contrast:
      return stretch_colors(cloud);
    case ChromaticKind::translation:
      if (params.ratio <= 0.0) return cloud;
      return translate_colors(cloud, params.ratio, rng);
    case ChromaticKind::jitter: {
      if (params.std <= 0.0) return cloud;
      PointCloud out = cloud;
      for (auto& p : out.points) {
        const Vec3 noise(rng.normal(), rng.normal(), rng.normal());
        p.color = clamp01(p.color + params.std * noise);
      }
      return out;
    }
    case ChromaticKind::drop: {
      PointCloud out = cloud;
      for (auto& p : out.points) p.color.setZero();
      return out;
    }
  }
  return cloud;
}

AugmentedPair augment_pipeline(const PointCloud& cloud, const Scene& scene, const AugmentationConfig& config) {
  config.check();
  AugmentedPair result{cloud, scene};

  auto apply_geometric = [&result](const Similarity& t) {
    result.cloud = apply_similarity(result.cloud, t);
    result.scene = apply_similarity(result.scene, t);
  };

  for (std::size_t i = 0; i < config.steps.size(); ++i) {
    const std::uint64_t step_seed = derive_seed(config.seed, i);
    std::visit(
        [&](const auto& step) {
          using T = std::decay_t<decltype(step)>;
          if constexpr (std::is_same_v<T, CuboidCropParams>) {
            result.cloud = cuboid_crop(result.cloud, step, step_seed);
          } else if constexpr (std::is_same_v<T, JitterParams>) {
            result.cloud = random_jitter(result.cloud, step, step_seed);
          } else if constexpr (std::is_same_v<T, ElasticParams>) {
            result.cloud = elastic_distort(result.cloud, step, step_seed);
          } else if constexpr (std::is_same_v<T, ChromaticParams>) {
            result.cloud = chromatic_augment(result.cloud, step, step_seed);
          } else if constexpr (std::is_same_v<T, RotateParams>) {
            if (step.angles_deg.empty() || !gate(step_seed, step.p)) return;
            CounterRng rng(derive_seed(step_seed, kWorkStream));
            const double deg = step.angles_deg[rng.below(step.angles_deg.size())];
            if (deg == 0.0) return;
            // Rotate about the cloud's xy center so the scene stays in place.
            const auto box = bounds(result.cloud);
            Vec3 pivot = box ? box->center() : Vec3::Zero();
            pivot.z() = 0.0;
            Similarity t{deg * std::numbers::pi / 180.0, 1.0, Vec3::Zero()};
            t.translation = pivot - t.apply(pivot);
            apply_geometric(t);
          } else if constexpr (std::is_same_v<T, ScaleParams>) {
            if (!gate(step_seed, step.p)) return;
            CounterRng rng(derive_seed(step_seed, kWorkStream));
            const double factor = rng.uniform(step.lo, step.hi);
            if (factor == 1.0) return;
            apply_geometric(Similarity{0.0, factor, Vec3::Zero()});
          }
        },
        config.steps[i]);
  }
  return result;
}

}  // namespace scenekit
