#include "scenekit/assignment.hpp"
#include "scenekit/datagen.hpp"
#include "scenekit/evaluation.hpp"
#include "scenekit/geometry.hpp"
#include "scenekit/script.hpp"
#include "scenekit/voxel.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace scenekit;

static void BM_IouBox3d(benchmark::State& state) {
  const OrientedBox3D a{0, "x", Vec3(0, 0, 0), 0.3, Vec3(1.2, 0.8, 1.0)};
  const OrientedBox3D b{0, "x", Vec3(0.4, 0.2, 0.1), -0.7, Vec3(1.0, 1.5, 0.6)};
  for (auto _ : state) benchmark::DoNotOptimize(iou_box3d(a, b));
}
BENCHMARK(BM_IouBox3d);

static void BM_SolveAssignment(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(n * n);
  for (auto& x : v) x = u(gen);
  const CostMatrix m(n, n, v);
  for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(m));
}
BENCHMARK(BM_SolveAssignment)->Arg(8)->Arg(32)->Arg(128);

static void BM_EvaluateDetection(benchmark::State& state) {
  const Scene gt = gen_scene(GenConfig{});
  const Scene pred = perturb_scene(gt, {0.1, 0.1, 0.1, 2});
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_detection(pred, gt));
}
BENCHMARK(BM_EvaluateDetection);

static void BM_CountTokens(benchmark::State& state) {
  GenConfig c;
  c.density = static_cast<double>(state.range(0));
  const PointCloud cloud = sample_cloud(gen_scene(c), c);
  for (auto _ : state) benchmark::DoNotOptimize(count_tokens(cloud, HierarchySpec{0.025, 5}));
  state.counters["points"] = static_cast<double>(cloud.size());
}
BENCHMARK(BM_CountTokens)->Arg(100)->Arg(1000);

static void BM_VoxelDownsample(benchmark::State& state) {
  GenConfig c;
  c.density = 1000;
  const PointCloud cloud = sample_cloud(gen_scene(c), c);
  for (auto _ : state) benchmark::DoNotOptimize(voxel_downsample(cloud, 0.05));
}
BENCHMARK(BM_VoxelDownsample);

static void BM_ParseSerialize(benchmark::State& state) {
  const std::string text = serialize_scene(gen_scene(GenConfig{}));
  for (auto _ : state) benchmark::DoNotOptimize(serialize_scene(parse_script(text).scene));
}
BENCHMARK(BM_ParseSerialize);

BENCHMARK_MAIN();
