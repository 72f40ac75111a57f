#include "scenekit/augment.hpp"
#include "scenekit/datagen.hpp"
#include "scenekit/error.hpp"
#include "scenekit/evaluation.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace scenekit;

namespace {

PointCloud random_cloud(std::size_t n, std::uint64_t seed, double extent = 5.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> u(0.0, extent), c(0.1, 0.9);
  PointCloud cloud;
  cloud.points.reserve(n);
  for (std::size_t i = 0; i < n; ++i) cloud.points.push_back({Vec3(u(gen), u(gen), u(gen) / 2), Vec3(c(gen), c(gen), c(gen))});
  return cloud;
}

double max_displacement(const PointCloud& a, const PointCloud& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, (a.points[i].position - b.points[i].position).norm());
  return m;
}

double max_coord_displacement(const PointCloud& a, const PointCloud& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, (a.points[i].position - b.points[i].position).cwiseAbs().maxCoeff());
  }
  return m;
}

}  // namespace

TEST(Augment, EveryStepWithZeroProbabilityIsIdentity) {
  const PointCloud cloud = random_cloud(2000, 1);
  GenConfig g;
  const Scene scene = gen_scene(g);
  const AugmentationConfig off = disabled(default_augmentation_config(5));
  for (std::size_t i = 0; i < off.steps.size(); ++i) {
    AugmentationConfig single{{off.steps[i]}, 5};
    const AugmentedPair out = augment_pipeline(cloud, scene, single);
    EXPECT_EQ(out.cloud, cloud) << step_name(off.steps[i]);
    EXPECT_EQ(out.scene, scene) << step_name(off.steps[i]);
  }
  const AugmentedPair all = augment_pipeline(cloud, scene, off);
  EXPECT_EQ(all.cloud, cloud);
  EXPECT_EQ(all.scene, scene);
}

TEST(Augment, DefaultRecipeMatchesTable) {
  const AugmentationConfig c = default_augmentation_config();
  ASSERT_EQ(c.steps.size(), 12u);
  const auto& crop = std::get<CuboidCropParams>(c.steps[0]);
  EXPECT_EQ(crop.min_points, 50000u);
  EXPECT_DOUBLE_EQ(crop.aspect, 0.8);
  EXPECT_DOUBLE_EQ(crop.p, 0.1);
  const auto& j4 = std::get<JitterParams>(c.steps[4]);
  EXPECT_DOUBLE_EQ(j4.sigma, 0.5);
  EXPECT_DOUBLE_EQ(j4.clip, 4.0);
  EXPECT_DOUBLE_EQ(j4.ratio, 0.0005);
  EXPECT_DOUBLE_EQ(j4.p, 0.65);
  const auto& el = std::get<ElasticParams>(c.steps[5]);
  EXPECT_EQ(el.p, (std::vector<double>{0.8, 0.5}));
  EXPECT_EQ(std::get<RotateParams>(c.steps[6]).angles_deg, (std::vector<double>{0, 90, 180, 270}));
  EXPECT_DOUBLE_EQ(std::get<ChromaticParams>(c.steps[9]).ratio, 0.1);
  EXPECT_DOUBLE_EQ(std::get<ChromaticParams>(c.steps[10]).std, 0.05);
  EXPECT_EQ(step_name(c.steps[11]), "color_drop");
}

TEST(RandomJitter, ZeroSigmaIsIdentity) {
  const PointCloud cloud = random_cloud(1000, 2);
  EXPECT_EQ(random_jitter(cloud, {0.0, 0.2, 1.0, 1.0}, 3), cloud);
}

TEST(RandomJitter, ClipAndRatio) {
  const PointCloud cloud = random_cloud(100000, 3);
  const PointCloud out = random_jitter(cloud, {0.2, 0.2, 0.05, 1.0}, 4);
  EXPECT_LE(max_coord_displacement(cloud, out), 0.2 + 1e-12);
  std::size_t moved = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i) moved += !(cloud.points[i].position == out.points[i].position);
  const double frac = static_cast<double>(moved) / cloud.size();
  EXPECT_GE(frac, 0.04);
  EXPECT_LE(frac, 0.06);
  for (std::size_t i = 0; i < cloud.size(); ++i) ASSERT_EQ(cloud.points[i].color, out.points[i].color);
}

TEST(ElasticDistort, MagnitudeZeroAndDeterminism) {
  const PointCloud cloud = random_cloud(5000, 5);
  ElasticParams zero{{{0.2, 0.0}, {0.8, 0.0}}, {1.0, 1.0}};
  EXPECT_EQ(elastic_distort(cloud, zero, 1), cloud);
  ElasticParams on{{{0.2, 0.4}, {0.8, 1.6}}, {1.0, 1.0}};
  EXPECT_EQ(elastic_distort(cloud, on, 7), elastic_distort(cloud, on, 7));
  EXPECT_NE(elastic_distort(cloud, on, 7), elastic_distort(cloud, on, 8));
}

TEST(ElasticDistort, DisplacementBound) {
  const PointCloud cloud = random_cloud(100000, 6);
  for (const auto& [g, m] : {std::pair{0.2, 0.4}, std::pair{0.8, 1.6}}) {
    ElasticParams params{{{g, m}}, {1.0}};
    const PointCloud out = elastic_distort(cloud, params, 11);
    const double d = max_displacement(cloud, out);
    EXPECT_LE(d, 3 * m);
    EXPECT_GT(d, 0.0);
  }
}

TEST(Chromatic, Drop) {
  const PointCloud out = chromatic_augment(random_cloud(500, 7), {ChromaticKind::drop, 1.0, 0.1, 0.05}, 1);
  for (const auto& p : out.points) EXPECT_EQ(p.color, Vec3::Zero());
}

TEST(Chromatic, AutoContrast) {
  PointCloud full = random_cloud(500, 8);
  full.points[0].color = Vec3(0, 0.5, 0.5);
  full.points[1].color = Vec3(1, 0.5, 0.5);
  const PointCloud out = chromatic_augment(full, {ChromaticKind::auto_contrast, 1.0, 0.1, 0.05}, 1);
  double lo = 1, hi = 0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(out.points[i].color.x(), full.points[i].color.x());  // already full range
    EXPECT_EQ(out.points[i].position, full.points[i].position);
    lo = std::min(lo, out.points[i].color.y());
    hi = std::max(hi, out.points[i].color.y());
  }
  EXPECT_DOUBLE_EQ(lo, 0.0);
  EXPECT_DOUBLE_EQ(hi, 1.0);
}

TEST(Chromatic, TranslationAndJitterBounds) {
  const PointCloud cloud = random_cloud(100000, 9);
  const PointCloud moved = chromatic_augment(cloud, {ChromaticKind::translation, 1.0, 0.1, 0.05}, 2);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3 d = moved.points[i].color - cloud.points[i].color;
    ASSERT_LE(d.cwiseAbs().maxCoeff(), 0.1 + 1e-12);
  }
  const PointCloud noisy = chromatic_augment(cloud, {ChromaticKind::jitter, 1.0, 0.1, 0.05}, 3);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& c = noisy.points[i].color;
    ASSERT_LE((c - cloud.points[i].color).cwiseAbs().maxCoeff(), 0.3);
    ASSERT_GE(c.minCoeff(), 0.0);
    ASSERT_LE(c.maxCoeff(), 1.0);
    ASSERT_EQ(noisy.points[i].position, cloud.points[i].position);
  }
}

TEST(CuboidCrop, Examples) {
  const PointCloud cloud = random_cloud(3000, 10);
  CuboidCropParams off;
  off.p = 0.0;
  EXPECT_EQ(cuboid_crop(cloud, off, 1), cloud);

  CuboidCropParams full;
  full.p = 1.0;
  full.min_crop = full.max_crop = 1.0;
  full.min_points = 1;
  EXPECT_EQ(cuboid_crop(cloud, full, 1), cloud);

  CuboidCropParams small;
  small.p = 1.0;
  small.min_points = 100;
  const PointCloud out = cuboid_crop(cloud, small, 2);
  EXPECT_LT(out.size(), cloud.size());
  EXPECT_GE(out.size(), 100u);
}

TEST(CuboidCrop, KeepsMinimumPoints) {
  const PointCloud cloud = random_cloud(60000, 11);
  CuboidCropParams params;
  params.p = 1.0;
  for (std::uint64_t seed = 0; seed < 5; ++seed) EXPECT_GE(cuboid_crop(cloud, params, seed).size(), 50000u);
}

TEST(Pipeline, RotateOnlyKeepsLabelsAligned) {
  GenConfig g;
  g.seed = 4;
  const Scene scene = gen_scene(g);
  const PointCloud cloud = sample_cloud(scene, g);
  AugmentationConfig rotate{{RotateParams{{90.0}, 1.0}}, 3};
  const AugmentedPair out = augment_pipeline(cloud, scene, rotate);
  EXPECT_NE(out.scene, scene);
  const EvalReport r = evaluate_detection(out.scene, out.scene);
  for (double f : r.average) EXPECT_DOUBLE_EQ(f, 1.0);
  // The cloud resampled from the rotated scene has the same extent.
  const Aabb a = *bounds(out.cloud);
  const Aabb b = *bounds(sample_cloud(out.scene, g));
  EXPECT_TRUE(a.min.isApprox(b.min, 1e-6));
  EXPECT_TRUE(a.max.isApprox(b.max, 1e-6));
}

TEST(Pipeline, DeterministicGivenSeed) {
  GenConfig g;
  const Scene scene = gen_scene(g);
  const PointCloud cloud = sample_cloud(scene, g);
  const AugmentationConfig c = default_augmentation_config(21);
  const AugmentedPair a = augment_pipeline(cloud, scene, c);
  const AugmentedPair b = augment_pipeline(cloud, scene, c);
  EXPECT_EQ(a.cloud, b.cloud);
  EXPECT_EQ(a.scene, b.scene);
  EXPECT_NE(augment_pipeline(cloud, scene, default_augmentation_config(22)).cloud, a.cloud);
}

TEST(AugmentConfig, FormatParseRoundTrip) {
  const AugmentationConfig c = default_augmentation_config(77);
  const std::string text = format_augmentation_config(c);
  const AugmentationConfig back = parse_augmentation_config(text);
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(format_augmentation_config(back), text);
}

TEST(AugmentConfig, ParseOverridesAndErrors) {
  const auto c = parse_augmentation_config(
      "seed = 3\n[random_jitter]\nsigma = 0.1\n# comment\n[color_drop]\np = 1\n[random_scale]\nscale = [0.5, 2]\n");
  ASSERT_EQ(c.steps.size(), 3u);
  EXPECT_DOUBLE_EQ(std::get<JitterParams>(c.steps[0]).sigma, 0.1);
  EXPECT_DOUBLE_EQ(std::get<JitterParams>(c.steps[0]).clip, 0.05);
  EXPECT_DOUBLE_EQ(std::get<ChromaticParams>(c.steps[1]).p, 1.0);
  EXPECT_DOUBLE_EQ(std::get<ScaleParams>(c.steps[2]).hi, 2.0);

  EXPECT_THROW(parse_augmentation_config("[mystery]\n"), ConfigError);
  EXPECT_THROW(parse_augmentation_config("[random_jitter]\nsgima = 1\n"), ConfigError);
  EXPECT_THROW(parse_augmentation_config("[random_jitter]\np = 1.5\n"), ConfigError);
  EXPECT_THROW(parse_augmentation_config("[random_jitter]\nclip = -1\n"), ConfigError);
  EXPECT_THROW(parse_augmentation_config("p = 1\n"), ConfigError);
  EXPECT_THROW(parse_augmentation_config("[random_jitter\n"), ConfigError);
}
