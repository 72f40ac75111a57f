#include "scenekit/evaluation.hpp"

#include "scenekit/assignment.hpp"
#include "scenekit/geometry.hpp"
#include "scenekit/script.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace scenekit {

void EvalConfig::check() const {
  if (thresholds.empty()) throw std::invalid_argument("at least one IoU threshold is required");
  for (std::size_t i = 0; i < thresholds.size(); ++i) {
    const double t = thresholds[i];
    if (!(t > 0.0 && t <= 1.0)) throw std::invalid_argument("IoU thresholds must lie in (0, 1]");
    if (i > 0 && !(t > thresholds[i - 1])) throw std::invalid_argument("IoU thresholds must be strictly ascending");
  }
}

double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) noexcept {
  const std::size_t denom = 2 * tp + fp + fn;
  if (denom == 0) return 1.0;
  return static_cast<double>(2 * tp) / static_cast<double>(denom);
}

namespace {

struct Item {
  ElementRef ref;
  std::string category;
  std::size_t index;  // into the caller's geometry array
};

using IouFn = std::function<double(std::size_t pred_index, std::size_t gt_index)>;

// One Hungarian assignment on 1 - IoU; zero-overlap pairs are released.
MatchReport match(const std::vector<Item>& preds, const std::vector<Item>& gts, const IouFn& iou) {
  MatchReport report;
  std::vector<char> pred_used(preds.size(), 0), gt_used(gts.size(), 0);
  if (!preds.empty() && !gts.empty()) {
    std::vector<double> ious(preds.size() * gts.size());
    std::vector<double> costs(ious.size());
    for (std::size_t i = 0; i < preds.size(); ++i) {
      for (std::size_t j = 0; j < gts.size(); ++j) {
        const double v = iou(preds[i].index, gts[j].index);
        ious[i * gts.size() + j] = v;
        costs[i * gts.size() + j] = 1.0 - v;
      }
    }
    const auto assignment = solve_assignment(CostMatrix(preds.size(), gts.size(), std::move(costs)));
    for (const auto& [i, j] : assignment) {
      const double v = ious[i * gts.size() + j];
      if (!(v > 0.0)) continue;
      report.pairs.push_back({preds[i].ref, gts[j].ref, v});
      pred_used[i] = 1;
      gt_used[j] = 1;
    }
  }
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (!pred_used[i]) report.unmatched_preds.push_back(preds[i].ref);
  }
  for (std::size_t j = 0; j < gts.size(); ++j) {
    if (!gt_used[j]) report.unmatched_gts.push_back(gts[j].ref);
  }
  return report;
}

void finalize(EvalReport& report) {
  const std::size_t nt = report.thresholds.size();
  report.average.assign(nt, 0.0);
  std::size_t active = 0;
  for (auto& [name, cat] : report.per_category) {
    cat.f1.resize(nt);
    for (std::size_t t = 0; t < nt; ++t) cat.f1[t] = f1_from_counts(cat.counts[t]);
    if (cat.vacuous) continue;
    ++active;
    for (std::size_t t = 0; t < nt; ++t) report.average[t] += cat.f1[t];
  }
  for (auto& a : report.average) a = active ? a / static_cast<double>(active) : 1.0;
}

// Scores one matching problem and folds its counts into per-category results.
// Pairs count toward the ground-truth category; leftover predictions toward
// their own category.
void accumulate(EvalReport& report, const std::vector<Item>& preds, const std::vector<Item>& gts,
                const MatchReport& matches) {
  const std::size_t nt = report.thresholds.size();
  auto category_of = [](const std::vector<Item>& items, const ElementRef& ref) -> const std::string& {
    for (const auto& item : items) {
      if (item.ref == ref) return item.category;
    }
    throw std::logic_error("matched element missing from its item list");
  };
  auto slot = [&](const std::string& name) -> CategoryResult& {
    auto [it, inserted] = report.per_category.try_emplace(name);
    if (inserted) {
      it->second.counts.assign(nt, Counts{});
      it->second.vacuous = true;
    }
    return it->second;
  };

  for (const auto& p : preds) {
    auto& cat = slot(p.category);
    cat.vacuous = false;
    for (auto& c : cat.counts) ++c.fp;
  }
  for (const auto& g : gts) {
    auto& cat = slot(g.category);
    cat.vacuous = false;
    for (auto& c : cat.counts) ++c.fn;
  }
  for (const auto& pair : matches.pairs) {
    auto& gt_cat = slot(category_of(gts, pair.gt));
    auto& pred_cat = slot(category_of(preds, pair.pred));
    gt_cat.matches.pairs.push_back(pair);
    for (std::size_t t = 0; t < nt; ++t) {
      if (pair.iou >= report.thresholds[t]) {
        ++gt_cat.counts[t].tp;
        --gt_cat.counts[t].fn;
        --pred_cat.counts[t].fp;
      }
    }
  }
  for (const auto& ref : matches.unmatched_preds) slot(category_of(preds, ref)).matches.unmatched_preds.push_back(ref);
  for (const auto& ref : matches.unmatched_gts) slot(category_of(gts, ref)).matches.unmatched_gts.push_back(ref);
}

std::vector<PlaneQuad> layout_quads(const Scene& scene, std::vector<Item>& items) {
  std::vector<PlaneQuad> quads;
  for (const auto& w : scene.walls) {
    items.push_back({{Family::wall, w.id}, "wall", quads.size()});
    quads.push_back(element_quad(w));
  }
  for (const auto& o : scene.openings) {
    const Family f = family_of(o.kind);
    items.push_back({{f, o.id}, std::string(family_name(f)), quads.size()});
    quads.push_back(element_quad(o, scene));
  }
  return quads;
}

std::vector<Item> filter(const std::vector<Item>& items, const std::string& category) {
  std::vector<Item> out;
  for (const auto& item : items) {
    if (item.category == category) out.push_back(item);
  }
  return out;
}

}  // namespace

EvalReport evaluate_layout(const Scene& pred, const Scene& gt, const EvalConfig& config) {
  config.check();
  require_valid(pred);
  require_valid(gt);

  EvalReport report;
  report.mode = EvalMode::layout;
  report.thresholds = config.thresholds;
  for (const char* name : {"wall", "door", "window"}) {
    auto& cat = report.per_category[name];
    cat.counts.assign(config.thresholds.size(), Counts{});
    cat.vacuous = true;
  }

  std::vector<Item> pred_items, gt_items;
  const auto pred_quads = layout_quads(pred, pred_items);
  const auto gt_quads = layout_quads(gt, gt_items);
  const IouFn iou = [&](std::size_t i, std::size_t j) { return iou_planar(pred_quads[i], gt_quads[j]); };

  if (config.layout_type_constrained) {
    for (const char* name : {"wall", "door", "window"}) {
      const auto p = filter(pred_items, name);
      const auto g = filter(gt_items, name);
      accumulate(report, p, g, match(p, g, iou));
    }
  } else {
    accumulate(report, pred_items, gt_items, match(pred_items, gt_items, iou));
  }
  finalize(report);
  return report;
}

EvalReport evaluate_detection(const Scene& pred, const Scene& gt, const EvalConfig& config) {
  config.check();
  require_valid(pred);
  require_valid(gt);

  EvalReport report;
  report.mode = EvalMode::detection;
  report.thresholds = config.thresholds;

  std::vector<Item> pred_items, gt_items;
  for (std::size_t i = 0; i < pred.boxes.size(); ++i) {
    pred_items.push_back({{Family::bbox, pred.boxes[i].id}, pred.boxes[i].category, i});
  }
  for (std::size_t j = 0; j < gt.boxes.size(); ++j) {
    gt_items.push_back({{Family::bbox, gt.boxes[j].id}, gt.boxes[j].category, j});
  }
  const IouFn iou = [&](std::size_t i, std::size_t j) { return iou_box3d(pred.boxes[i], gt.boxes[j]); };

  if (config.detection_class_constrained) {
    std::vector<std::string> categories;
    for (const auto& item : pred_items) categories.push_back(item.category);
    for (const auto& item : gt_items) categories.push_back(item.category);
    std::sort(categories.begin(), categories.end());
    categories.erase(std::unique(categories.begin(), categories.end()), categories.end());
    for (const auto& name : categories) {
      const auto p = filter(pred_items, name);
      const auto g = filter(gt_items, name);
      accumulate(report, p, g, match(p, g, iou));
    }
  } else {
    accumulate(report, pred_items, gt_items, match(pred_items, gt_items, iou));
  }
  finalize(report);
  return report;
}

EvalReport merge_reports(std::span<const EvalReport> reports) {
  if (reports.empty()) throw std::invalid_argument("merge_reports needs at least one report");
  EvalReport merged;
  merged.mode = reports.front().mode;
  merged.thresholds = reports.front().thresholds;
  const std::size_t nt = merged.thresholds.size();
  for (const auto& r : reports) {
    if (r.mode != merged.mode || r.thresholds != merged.thresholds) {
      throw std::invalid_argument("merge_reports: reports differ in mode or thresholds");
    }
    for (const auto& [name, cat] : r.per_category) {
      auto [it, inserted] = merged.per_category.try_emplace(name);
      if (inserted) {
        it->second.counts.assign(nt, Counts{});
        it->second.vacuous = true;
      }
      it->second.vacuous = it->second.vacuous && cat.vacuous;
      for (std::size_t t = 0; t < nt; ++t) {
        it->second.counts[t].tp += cat.counts[t].tp;
        it->second.counts[t].fp += cat.counts[t].fp;
        it->second.counts[t].fn += cat.counts[t].fn;
      }
    }
  }
  finalize(merged);
  return merged;
}

}  // namespace scenekit
