#include "scenekit/evaluation.hpp"

#include <json.hpp>

namespace scenekit {

namespace {

using Json = nlohmann::ordered_json;

Json refs(const std::vector<ElementRef>& list) {
  Json out = Json::array();
  for (const auto& r : list) out.push_back(r.name());
  return out;
}

}  // namespace

std::string report_to_json(const EvalReport& report) {
  Json doc;
  doc["mode"] = report.mode == EvalMode::layout ? "layout" : "detection";
  doc["thresholds"] = report.thresholds;
  doc["empty_category_f1"] = 1.0;
  doc["average_f1"] = report.average;

  Json categories = Json::object();
  for (const auto& [name, cat] : report.per_category) {
    Json c;
    c["vacuous"] = cat.vacuous;
    Json tp = Json::array(), fp = Json::array(), fn = Json::array();
    for (const auto& counts : cat.counts) {
      tp.push_back(counts.tp);
      fp.push_back(counts.fp);
      fn.push_back(counts.fn);
    }
    c["tp"] = tp;
    c["fp"] = fp;
    c["fn"] = fn;
    c["f1"] = cat.f1;
    Json pairs = Json::array();
    for (const auto& p : cat.matches.pairs) {
      Json m;
      m["pred"] = p.pred.name();
      m["gt"] = p.gt.name();
      m["iou"] = p.iou;
      pairs.push_back(std::move(m));
    }
    c["matches"] = std::move(pairs);
    c["unmatched_pred"] = refs(cat.matches.unmatched_preds);
    c["unmatched_gt"] = refs(cat.matches.unmatched_gts);
    categories[name] = std::move(c);
  }
  doc["categories"] = std::move(categories);
  return doc.dump(2) + "\n";
}

}  // namespace scenekit
