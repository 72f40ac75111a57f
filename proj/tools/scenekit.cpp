// scenekit: command-line front end. JSON goes to stdout, diagnostics to
// stderr. Exit codes: 0 success, 1 invalid input, 2 usage error.

#include "scenekit/augment.hpp"
#include "scenekit/datagen.hpp"
#include "scenekit/error.hpp"
#include "scenekit/evaluation.hpp"
#include "scenekit/ply.hpp"
#include "scenekit/script.hpp"
#include "scenekit/transform.hpp"
#include "scenekit/voxel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;
using namespace scenekit;

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kUsage = 2;

// Thrown for bad flag values discovered after CLI11 parsing.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

void print_json(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(std::string(flag) + ": '" + item + "' is not a number");
    }
  }
  return values;
}

// Parses a script file, reporting warnings and wrapping parse errors with the
// path.
Scene load_scene(const fs::path& path, bool lenient, const std::optional<QuantizationSpec>& spec = std::nullopt) {
  const std::string text = read_text(path);
  try {
    auto result = parse_script(text, lenient ? Strictness::lenient : Strictness::strict, spec);
    for (const auto& w : result.warnings) {
      std::cerr << path.string() << ":" << w.line << ": warning: " << w.message << "\n";
    }
    return std::move(result.scene);
  } catch (const ParseError& e) {
    throw Error(path.string() + ": " + e.what());
  }
}

Scene load_valid_scene(const fs::path& path, bool lenient) {
  Scene scene = load_scene(path, lenient);
  const auto violations = validate_scene(scene);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << path.string() << ": " << to_string(v) << "\n";
    throw ValidationError(path.string() + ": scene is invalid");
  }
  return scene;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::uint64_t fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("SCENEKIT_SEED"); env && *env) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (env[used] != '\0') throw std::invalid_argument(env);
      return v;
    } catch (const std::exception&) {
      throw UsageError(std::string("SCENEKIT_SEED: '") + env + "' is not an unsigned integer");
    }
  }
  return fallback;
}

int cmd_validate(const fs::path& script, bool lenient) {
  const Scene scene = load_scene(script, lenient);
  const auto violations = validate_scene(scene);
  Json doc;
  doc["valid"] = violations.empty();
  std::size_t doors = 0;
  for (const auto& o : scene.openings) doors += o.kind == OpeningKind::door;
  doc["counts"] = {{"walls", scene.walls.size()},
                   {"doors", doors},
                   {"windows", scene.openings.size() - doors},
                   {"boxes", scene.boxes.size()}};
  Json list = Json::array();
  for (const auto& v : violations) {
    std::cerr << script.string() << ": " << to_string(v) << "\n";
    list.push_back({{"element", v.element.name()}, {"rule", v.rule}, {"detail", v.detail}});
  }
  doc["violations"] = list;
  print_json(doc);
  return violations.empty() ? kOk : kInvalid;
}

int cmd_eval(const fs::path& pred_path, const fs::path& gt_path, const std::string& mode,
             const std::string& thresholds, bool pool, bool lenient) {
  EvalConfig config;
  config.thresholds = parse_list(thresholds, "--thresholds");
  try {
    config.check();
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--thresholds: ") + e.what());
  }
  const Scene pred = load_valid_scene(pred_path, lenient);
  const Scene gt = load_valid_scene(gt_path, lenient);
  EvalReport report;
  if (mode == "layout") {
    config.layout_type_constrained = !pool;
    report = evaluate_layout(pred, gt, config);
  } else {
    config.detection_class_constrained = !pool;
    report = evaluate_detection(pred, gt, config);
  }
  std::cout << report_to_json(report);
  return kOk;
}

int cmd_quantize(const fs::path& script, double bin_size, int num_bins, const std::string& origin, bool dequantize,
                 bool lenient) {
  QuantizationSpec spec;
  spec.bin_size = bin_size;
  spec.num_bins = num_bins;
  try {
    spec.check();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const bool explicit_origin = !origin.empty();
  if (explicit_origin) {
    const auto o = parse_list(origin, "--origin");
    if (o.size() != 3) throw UsageError("--origin needs three comma-separated values");
    spec.origin = Vec3(o[0], o[1], o[2]);
  }
  if (dequantize) {
    const Scene scene = load_scene(script, lenient, spec);
    std::cout << serialize_scene(scene);
    return kOk;
  }
  const Scene scene = load_valid_scene(script, lenient);
  if (!explicit_origin && !scene.empty()) spec.origin = normalize_scene(scene).spec.origin;
  std::cerr << "origin " << spec.origin.x() << "," << spec.origin.y() << "," << spec.origin.z() << "\n";
  std::cout << serialize_scene(scene, spec);
  return kOk;
}

int cmd_augment(const fs::path& ply, const fs::path& script, const std::string& config_path,
                const std::optional<std::uint64_t>& seed_flag, const fs::path& out_dir, bool lenient) {
  AugmentationConfig config =
      config_path.empty() ? default_augmentation_config() : parse_augmentation_config(read_text(config_path));
  config.seed = resolve_seed(seed_flag, config.seed);
  const PointCloud cloud = read_ply_file(ply);
  const Scene scene = load_valid_scene(script, lenient);
  const AugmentedPair result = augment_pipeline(cloud, scene, config);

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());
  write_ply_file(out_dir / "points.ply", result.cloud, PlyFormat::binary_little_endian);
  write_text(out_dir / "scene.txt", serialize_scene(result.scene));

  Json steps = Json::array();
  for (const auto& s : config.steps) steps.push_back(std::string(step_name(s)));
  Json doc;
  doc["seed"] = config.seed;
  doc["steps"] = steps;
  doc["points_in"] = cloud.size();
  doc["points_out"] = result.cloud.size();
  doc["out"] = out_dir.string();
  print_json(doc);
  return kOk;
}

int cmd_gen(const std::string& config_path, std::size_t count, const std::optional<std::uint64_t>& seed_flag,
            const fs::path& out_dir) {
  GenConfig config = config_path.empty() ? GenConfig{} : parse_gen_config(read_text(config_path));
  config.seed = resolve_seed(seed_flag, config.seed);
  const auto ids = write_corpus(out_dir, config, count);
  Json doc;
  doc["seed"] = config.seed;
  doc["out"] = out_dir.string();
  doc["scenes"] = ids;
  print_json(doc);
  return kOk;
}

int cmd_tokens(const fs::path& ply, double finest, int levels) {
  HierarchySpec spec{finest, levels};
  try {
    spec.check();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  const PointCloud cloud = read_ply_file(ply);
  if (cloud.empty()) throw IoError(ply.string() + ": point cloud is empty");
  const TokenCounts counts = count_tokens(cloud, spec);
  Json doc;
  doc["points"] = cloud.size();
  doc["finest_cell"] = finest;
  doc["levels"] = levels;
  Json cells = Json::array();
  for (int l = 0; l < levels; ++l) cells.push_back(spec.cell_at(l));
  doc["cell_sizes"] = cells;
  doc["per_level"] = counts.per_level;
  doc["k"] = counts.k();
  print_json(doc);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene-script toolkit: validation, evaluation, quantization, augmentation, generation"};
  app.require_subcommand(1);
  std::function<int()> action;

  bool lenient = false;
  auto add_lenient = [&](CLI::App* sub) {
    sub->add_flag("--lenient", lenient, "Skip unknown commands with a warning instead of failing");
  };
  std::optional<std::uint64_t> seed;
  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed, "Master seed (falls back to SCENEKIT_SEED)");
  };

  std::string script;
  auto* validate = app.add_subcommand("validate", "Parse and validate a scene script");
  validate->add_option("script", script, "Scene script")->required();
  add_lenient(validate);
  validate->callback([&] { action = [&] { return cmd_validate(script, lenient); }; });

  std::string pred, gt, mode = "layout", thresholds = "0.25,0.5";
  bool pool = false;
  auto* eval = app.add_subcommand("eval", "Evaluate a predicted scene against ground truth");
  eval->add_option("pred", pred, "Predicted scene script")->required();
  eval->add_option("gt", gt, "Ground-truth scene script")->required();
  eval->add_option("--mode", mode, "layout or detect")->check(CLI::IsMember({"layout", "detect"}));
  eval->add_option("--thresholds", thresholds, "Comma-separated IoU thresholds");
  eval->add_flag("--pool", pool, "Match across element types / categories");
  add_lenient(eval);
  eval->callback([&] { action = [&] { return cmd_eval(pred, gt, mode, thresholds, pool, lenient); }; });

  double bin_size = 0.025;
  int num_bins = 1280;
  std::string origin;
  bool dequantize = false;
  auto* quantize = app.add_subcommand("quantize", "Emit a scene with coordinates as bin indices");
  quantize->add_option("script", script, "Scene script")->required();
  quantize->add_option("--bin-size", bin_size, "Bin size in meters");
  quantize->add_option("--num-bins", num_bins, "Number of bins");
  quantize->add_option("--origin", origin, "x,y,z offset (default: the scene's minimum corner)");
  quantize->add_flag("--dequantize", dequantize, "Read bin indices and emit decimals");
  add_lenient(quantize);
  quantize->callback(
      [&] { action = [&] { return cmd_quantize(script, bin_size, num_bins, origin, dequantize, lenient); }; });

  std::string ply, config, out;
  auto* augment = app.add_subcommand("augment", "Augment a point cloud and its scene");
  augment->add_option("ply", ply, "Input point cloud")->required();
  augment->add_option("script", script, "Input scene script")->required();
  augment->add_option("--config", config, "Augmentation config (default: full recipe)");
  augment->add_option("--out", out, "Output directory")->required();
  add_seed(augment);
  add_lenient(augment);
  augment->callback([&] { action = [&] { return cmd_augment(ply, script, config, seed, out, lenient); }; });

  std::size_t count = 1;
  auto* gen = app.add_subcommand("gen", "Generate a synthetic corpus");
  gen->add_option("--config", config, "Generator config");
  gen->add_option("--count", count, "Number of scenes");
  gen->add_option("--out", out, "Output directory")->required();
  add_seed(gen);
  gen->callback([&] { action = [&] { return cmd_gen(config, count, seed, out); }; });

  double finest = 0.025;
  int levels = 5;
  auto* tokens = app.add_subcommand("tokens", "Per-level occupied voxel counts");
  tokens->add_option("ply", ply, "Input point cloud")->required();
  tokens->add_option("--finest", finest, "Finest cell size in meters");
  tokens->add_option("--levels", levels, "Number of pooling levels");
  tokens->callback([&] { action = [&] { return cmd_tokens(ply, finest, levels); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return action();
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
