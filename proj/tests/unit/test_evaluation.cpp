#include "oracles.hpp"

#include "scenekit/datagen.hpp"
#include "scenekit/error.hpp"
#include "scenekit/evaluation.hpp"
#include "scenekit/geometry.hpp"
#include "scenekit/transform.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <numbers>

using namespace scenekit;

namespace {

Scene layout_fixture() {
  Scene s;
  s.walls.push_back({0, Vec3(0, 0, 0), Vec3(4, 0, 0), 2.6, 0.1});
  s.walls.push_back({1, Vec3(4, 0, 0), Vec3(4, 3, 0), 2.6, 0.1});
  s.openings.push_back({0, OpeningKind::door, 0, Vec3(1, 0, 1), 0.9, 2.0});
  s.openings.push_back({0, OpeningKind::window, 1, Vec3(4, 1.5, 1.5), 1.0, 1.0});
  return s;
}

Scene box_scene(std::vector<OrientedBox3D> boxes) {
  Scene s;
  for (std::size_t i = 0; i < boxes.size(); ++i) boxes[i].id = static_cast<int>(i);
  s.boxes = std::move(boxes);
  return s;
}

OrientedBox3D box(const std::string& category, Vec3 center, double angle = 0.0) {
  return {0, category, center, angle, Vec3(1, 1, 1)};
}

void expect_all_one(const EvalReport& r) {
  for (const auto& [name, cat] : r.per_category) {
    for (double f : cat.f1) EXPECT_DOUBLE_EQ(f, 1.0) << name;
  }
  for (double f : r.average) EXPECT_DOUBLE_EQ(f, 1.0);
}

}  // namespace

TEST(F1FromCounts, Examples) {
  EXPECT_DOUBLE_EQ(f1_from_counts(1, 1, 1), 0.5);
  EXPECT_DOUBLE_EQ(f1_from_counts(0, 0, 0), 1.0);
  EXPECT_DOUBLE_EQ(f1_from_counts(0, 3, 2), 0.0);
  EXPECT_DOUBLE_EQ(f1_from_counts(3, 0, 0), 1.0);
}

TEST(EvalConfig, DefaultsAndChecks) {
  const EvalConfig c;
  EXPECT_EQ(c.thresholds, (std::vector<double>{0.25, 0.5}));
  EXPECT_TRUE(c.layout_type_constrained);
  EXPECT_TRUE(c.detection_class_constrained);
  EvalConfig bad;
  bad.thresholds = {0.5, 0.25};
  EXPECT_THROW(bad.check(), std::invalid_argument);
  bad.thresholds = {0.0};
  EXPECT_THROW(bad.check(), std::invalid_argument);
  bad.thresholds = {1.2};
  EXPECT_THROW(bad.check(), std::invalid_argument);
}

TEST(EvaluateLayout, SelfIsPerfect) {
  const EvalReport r = evaluate_layout(layout_fixture(), layout_fixture());
  EXPECT_EQ(r.per_category.size(), 3u);
  expect_all_one(r);
  EXPECT_EQ(r.per_category.at("wall").counts[0], (Counts{2, 0, 0}));
}

TEST(EvaluateLayout, EmptyPrediction) {
  const EvalReport r = evaluate_layout(Scene{}, layout_fixture());
  for (const auto& [name, cat] : r.per_category) {
    for (double f : cat.f1) EXPECT_DOUBLE_EQ(f, 0.0) << name;
  }
  EXPECT_EQ(r.per_category.at("wall").counts[1], (Counts{0, 0, 2}));
}

TEST(EvaluateLayout, ShiftedWallBetweenThresholds) {
  Scene gt, pred;
  gt.walls.push_back({0, Vec3(0, 0, 0), Vec3(7, 0, 0), 2.5, 0.1});
  pred.walls.push_back({0, Vec3(3, 0, 0), Vec3(10, 0, 0), 2.5, 0.1});
  EXPECT_NEAR(iou_planar(element_quad(pred.walls[0]), element_quad(gt.walls[0])), 0.4, 1e-12);
  const EvalReport r = evaluate_layout(pred, gt);
  const auto& wall = r.per_category.at("wall");
  EXPECT_DOUBLE_EQ(wall.f1[0], 1.0);
  EXPECT_DOUBLE_EQ(wall.f1[1], 0.0);
  EXPECT_EQ(wall.counts[1], (Counts{0, 1, 1}));
  ASSERT_EQ(wall.matches.pairs.size(), 1u);
  EXPECT_TRUE(r.per_category.at("door").vacuous);
  // Average over the non-vacuous wall category only.
  EXPECT_DOUBLE_EQ(r.average[0], 1.0);
  EXPECT_DOUBLE_EQ(r.average[1], 0.0);
}

TEST(EvaluateLayout, PooledMatchingCrossesTypes) {
  Scene gt = layout_fixture();
  Scene pred = gt;
  pred.openings[0].kind = OpeningKind::window;
  pred.openings[0].id = 1;
  const EvalReport strict = evaluate_layout(pred, gt);
  EXPECT_EQ(strict.per_category.at("door").counts[0], (Counts{0, 0, 1}));
  EvalConfig pooled;
  pooled.layout_type_constrained = false;
  const EvalReport loose = evaluate_layout(pred, gt, pooled);
  EXPECT_EQ(loose.per_category.at("door").counts[0], (Counts{1, 0, 0}));
  EXPECT_EQ(loose.per_category.at("window").counts[0], (Counts{1, 0, 0}));
}

TEST(EvaluateLayout, RejectsInvalidScenes) {
  Scene bad = layout_fixture();
  bad.walls[0].height = -1;
  EXPECT_THROW(evaluate_layout(bad, layout_fixture()), ValidationError);
}

TEST(EvaluateDetection, SelfIsPerfect) {
  const Scene s = box_scene({box("sofa", Vec3(0, 0, 0)), box("chair", Vec3(3, 0, 0))});
  expect_all_one(evaluate_detection(s, s));
}

TEST(EvaluateDetection, ClassConstraint) {
  const EvalReport r =
      evaluate_detection(box_scene({box("chair", Vec3::Zero())}), box_scene({box("sofa", Vec3::Zero())}));
  EXPECT_EQ(r.per_category.at("chair").counts[0], (Counts{0, 1, 0}));
  EXPECT_EQ(r.per_category.at("sofa").counts[0], (Counts{0, 0, 1}));
  EXPECT_DOUBLE_EQ(r.average[0], 0.0);
}

TEST(EvaluateDetection, OneCopyOneDisjoint) {
  const Scene gt = box_scene({box("bed", Vec3(0, 0, 0)), box("bed", Vec3(5, 0, 0))});
  const Scene pred = box_scene({box("bed", Vec3(0, 0, 0)), box("bed", Vec3(0, 9, 0))});
  const EvalReport r = evaluate_detection(pred, gt);
  for (std::size_t t = 0; t < 2; ++t) {
    EXPECT_EQ(r.per_category.at("bed").counts[t], (Counts{1, 1, 1}));
    EXPECT_DOUBLE_EQ(r.per_category.at("bed").f1[t], 0.5);
  }
  // Zero-IoU pairs are never reported.
  for (const auto& p : r.per_category.at("bed").matches.pairs) EXPECT_GT(p.iou, 0.0);
}

TEST(EvaluateDetection, SymmetricCounting) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GenConfig c;
    c.seed = seed;
    const Scene gt = gen_scene(c);
    const Scene pred = perturb_scene(gt, {0.2, 0.1, 0.0, seed});
    const EvalReport ab = evaluate_detection(pred, gt);
    const EvalReport ba = evaluate_detection(gt, pred);
    for (const auto& [name, cat] : ab.per_category) {
      for (std::size_t t = 0; t < cat.counts.size(); ++t) {
        const Counts& x = cat.counts[t];
        const Counts& y = ba.per_category.at(name).counts[t];
        EXPECT_EQ(x.tp, y.tp);
        EXPECT_EQ(x.fp, y.fn);
        EXPECT_EQ(x.fn, y.fp);
      }
    }
  }
}

TEST(EvaluateDetection, MatchingIsOptimal) {
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    std::vector<OrientedBox3D> gt_boxes, pred_boxes;
    const int n_gt = 1 + seed % 6, n_pred = 1 + (seed / 6) % 6;
    for (int i = 0; i < n_gt; ++i) gt_boxes.push_back(oracle::random_box(seed * 100 + i, Vec3::Zero(), 1.0));
    for (int i = 0; i < n_pred; ++i) pred_boxes.push_back(oracle::random_box(seed * 100 + 50 + i, Vec3::Zero(), 1.0));
    const Scene gt = box_scene(gt_boxes), pred = box_scene(pred_boxes);
    std::vector<std::vector<double>> table(pred.boxes.size(), std::vector<double>(gt.boxes.size()));
    for (std::size_t i = 0; i < pred.boxes.size(); ++i) {
      for (std::size_t j = 0; j < gt.boxes.size(); ++j) table[i][j] = iou_box3d(pred.boxes[i], gt.boxes[j]);
    }
    double total = 0.0;
    for (const auto& p : evaluate_detection(pred, gt).per_category.at("thing").matches.pairs) total += p.iou;
    EXPECT_NEAR(total, oracle::brute_force_max_total(table), 1e-9) << seed;
  }
}

TEST(Evaluation, ThresholdMonotonicityAndRigidInvariance) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    GenConfig c;
    c.seed = seed;
    const Scene gt = gen_scene(c);
    const Scene pred = perturb_scene(gt, {0.1, 0.05, 0.1, seed + 1});
    for (const auto& r : {evaluate_layout(pred, gt), evaluate_detection(pred, gt)}) {
      for (const auto& [name, cat] : r.per_category) EXPECT_LE(cat.f1[1], cat.f1[0]) << name;
    }
    const Similarity t{std::numbers::pi / 2, 1.0, Vec3(3, -1, 0)};
    const EvalReport base = evaluate_detection(pred, gt);
    const EvalReport moved = evaluate_detection(apply_similarity(pred, t), apply_similarity(gt, t));
    for (const auto& [name, cat] : base.per_category) EXPECT_EQ(cat.counts, moved.per_category.at(name).counts);
  }
}

TEST(Evaluation, MergeSumsCounts) {
  const Scene gt = box_scene({box("bed", Vec3(0, 0, 0)), box("bed", Vec3(5, 0, 0))});
  const Scene pred = box_scene({box("bed", Vec3(0, 0, 0))});
  const std::vector<EvalReport> parts{evaluate_detection(pred, gt), evaluate_detection(gt, gt)};
  const EvalReport merged = merge_reports(parts);
  EXPECT_EQ(merged.per_category.at("bed").counts[0], (Counts{3, 0, 1}));
  EXPECT_DOUBLE_EQ(merged.per_category.at("bed").f1[0], 6.0 / 7.0);
}

TEST(ReportJson, StableSchema) {
  const std::string text = report_to_json(evaluate_layout(layout_fixture(), layout_fixture()));
  EXPECT_EQ(text.back(), '\n');
  const auto doc = nlohmann::ordered_json::parse(text);
  std::vector<std::string> keys;
  for (const auto& [k, v] : doc.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"mode", "thresholds", "empty_category_f1", "average_f1", "categories"}));
  EXPECT_EQ(doc["mode"], "layout");
  EXPECT_EQ(doc["categories"]["wall"]["tp"], nlohmann::json::array({2, 2}));
  EXPECT_EQ(doc["categories"]["door"]["matches"][0]["pred"], "door_0");
  EXPECT_EQ(text, report_to_json(evaluate_layout(layout_fixture(), layout_fixture())));
}
