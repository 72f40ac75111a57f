#pragma once

#include "scenekit/scene.hpp"

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace scenekit {

struct EvalConfig {
  std::vector<double> thresholds{0.25, 0.5};
  /// Match walls, doors and windows separately.
  bool layout_type_constrained = true;
  /// Match boxes only within their category.
  bool detection_class_constrained = true;

  /// Throws std::invalid_argument unless thresholds are strictly ascending
  /// and within (0, 1].
  void check() const;
};

struct MatchedPair {
  ElementRef pred;
  ElementRef gt;
  double iou = 0.0;
};

struct MatchReport {
  std::vector<MatchedPair> pairs;
  std::vector<ElementRef> unmatched_preds;
  std::vector<ElementRef> unmatched_gts;
};

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool operator==(const Counts&) const = default;
};

struct CategoryResult {
  /// Indexed like EvalConfig::thresholds.
  std::vector<Counts> counts;
  std::vector<double> f1;
  /// Neither prediction nor ground truth contains the category; F1 is 1 by
  /// convention and the category is left out of the average.
  bool vacuous = false;
  MatchReport matches;
};

enum class EvalMode { layout, detection };

struct EvalReport {
  EvalMode mode = EvalMode::layout;
  std::vector<double> thresholds;
  /// Layout: wall, door, window always present. Detection: every category
  /// seen in prediction or ground truth.
  std::map<std::string, CategoryResult> per_category;
  /// Unweighted mean over non-vacuous categories (1 when all are vacuous).
  std::vector<double> average;
};

/// 2tp / (2tp + fp + fn), with 1 when all counts are zero.
double f1_from_counts(std::size_t tp, std::size_t fp, std::size_t fn) noexcept;
inline double f1_from_counts(const Counts& c) noexcept { return f1_from_counts(c.tp, c.fp, c.fn); }

/// IoU2D protocol: predictions projected to ground-truth planes, one
/// Hungarian assignment on 1 - IoU, thresholds applied to that matching.
EvalReport evaluate_layout(const Scene& pred, const Scene& gt, const EvalConfig& config = {});

/// IoU3D protocol on oriented boxes, per category by default.
EvalReport evaluate_detection(const Scene& pred, const Scene& gt, const EvalConfig& config = {});

/// Sums counts across reports and recomputes F1 and averages. Match lists are
/// dropped because element ids are only meaningful per scene.
EvalReport merge_reports(std::span<const EvalReport> reports);

/// Stable JSON document (fixed key order, two-space indent, trailing newline).
std::string report_to_json(const EvalReport& report);

}  // namespace scenekit
