#include "scenekit/augment.hpp"

#include "scenekit/error.hpp"

#include <json.hpp>

#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <type_traits>

namespace scenekit {

namespace {

using nlohmann::json;

void check_probability(double p, std::string_view step) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(std::string(step) + ": probability " + std::to_string(p) + " outside [0, 1]");
  }
}

void check_non_negative(double v, std::string_view step, std::string_view key) {
  if (!(v >= 0.0) || !std::isfinite(v)) {
    throw ConfigError(std::string(step) + ": " + std::string(key) + " must be a finite value >= 0");
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string num(double v) { return json(v).dump(); }

template <typename T>
std::string list(const T& values) {
  return json(values).dump();
}

struct Section {
  std::string name;
  std::size_t line = 0;
  std::map<std::string, json> values;
  std::map<std::string, std::size_t> lines;
};

class SectionReader {
 public:
  explicit SectionReader(const Section& s) : s_(s) {}

  template <typename T>
  void get(const char* key, T& out) {
    const auto it = s_.values.find(key);
    if (it == s_.values.end()) return;
    used_.insert(key);
    try {
      out = it->second.get<T>();
    } catch (const json::exception&) {
      throw ConfigError("line " + std::to_string(s_.lines.at(key)) + ": bad value for '" + key + "' in [" +
                        s_.name + "]");
    }
  }

  void finish() const {
    for (const auto& [key, value] : s_.values) {
      if (!used_.count(key)) {
        throw ConfigError("line " + std::to_string(s_.lines.at(key)) + ": unknown key '" + key + "' in [" + s_.name +
                          "]");
      }
    }
  }

 private:
  const Section& s_;
  std::set<std::string> used_;
};

AugmentationStep build_step(const Section& s) {
  SectionReader r(s);
  AugmentationStep step;
  if (s.name == "cuboid_crop") {
    CuboidCropParams c;
    r.get("min_points", c.min_points);
    r.get("aspect", c.aspect);
    r.get("min_crop", c.min_crop);
    r.get("max_crop", c.max_crop);
    r.get("p", c.p);
    r.get("max_attempts", c.max_attempts);
    step = c;
  } else if (s.name == "random_jitter") {
    JitterParams c;
    r.get("sigma", c.sigma);
    r.get("clip", c.clip);
    r.get("ratio", c.ratio);
    r.get("p", c.p);
    step = c;
  } else if (s.name == "elastic_distort") {
    ElasticParams c;
    r.get("params", c.granularity_magnitude);
    r.get("p", c.p);
    step = c;
  } else if (s.name == "random_rotate") {
    RotateParams c;
    r.get("angles", c.angles_deg);
    r.get("p", c.p);
    step = c;
  } else if (s.name == "random_scale") {
    ScaleParams c;
    std::vector<double> range{c.lo, c.hi};
    r.get("scale", range);
    if (range.size() != 2) throw ConfigError("line " + std::to_string(s.line) + ": scale needs [lo, hi]");
    c.lo = range[0];
    c.hi = range[1];
    r.get("p", c.p);
    step = c;
  } else {
    ChromaticKind kind;
    if (s.name == "auto_contrast") {
      kind = ChromaticKind::auto_contrast;
    } else if (s.name == "chromatic_translation") {
      kind = ChromaticKind::translation;
    } else if (s.name == "chromatic_jitter") {
      kind = ChromaticKind::jitter;
    } else if (s.name == "color_drop") {
      kind = ChromaticKind::drop;
    } else {
      throw ConfigError("line " + std::to_string(s.line) + ": unknown augmentation step '" + s.name + "'");
    }
    ChromaticParams c = ChromaticParams::defaults(kind);
    r.get("p", c.p);
    if (kind == ChromaticKind::translation) r.get("ratio", c.ratio);
    if (kind == ChromaticKind::jitter) r.get("std", c.std);
    step = c;
  }
  r.finish();
  return step;
}

}  // namespace

ChromaticParams ChromaticParams::defaults(ChromaticKind kind) {
  ChromaticParams c;
  c.kind = kind;
  switch (kind) {
    case ChromaticKind::auto_contrast:
      c.p = 0.2;
      break;
    case ChromaticKind::translation:
      c.p = 0.75;
      break;
    case ChromaticKind::jitter:
      c.p = 0.8;
      break;
    case ChromaticKind::drop:
      c.p = 0.1;
      break;
  }
  return c;
}

void AugmentationConfig::check() const {
  for (const auto& step : steps) {
    const std::string_view name = step_name(step);
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ElasticParams>) {
            for (double p : s.p) check_probability(p, name);
            for (const auto& [g, m] : s.granularity_magnitude) {
              check_non_negative(m, name, "magnitude");
              if (!(g > 0.0)) throw ConfigError(std::string(name) + ": granularity must be > 0");
            }
          } else {
            check_probability(s.p, name);
          }
          if constexpr (std::is_same_v<T, JitterParams>) {
            check_non_negative(s.sigma, name, "sigma");
            check_non_negative(s.clip, name, "clip");
            check_probability(s.ratio, name);
          } else if constexpr (std::is_same_v<T, CuboidCropParams>) {
            if (!(s.min_crop > 0.0 && s.min_crop <= s.max_crop && s.max_crop <= 1.0)) {
              throw ConfigError("cuboid_crop: need 0 < min_crop <= max_crop <= 1");
            }
            check_non_negative(s.aspect, name, "aspect");
          } else if constexpr (std::is_same_v<T, ScaleParams>) {
            if (!(s.lo > 0.0 && s.lo <= s.hi)) throw ConfigError("random_scale: need 0 < lo <= hi");
          } else if constexpr (std::is_same_v<T, ChromaticParams>) {
            check_non_negative(s.ratio, name, "ratio");
            check_non_negative(s.std, name, "std");
          }
        },
        step);
  }
}

AugmentationConfig default_augmentation_config(std::uint64_t seed) {
  AugmentationConfig c;
  c.seed = seed;
  c.steps.push_back(CuboidCropParams{});
  c.steps.push_back(JitterParams{0.025, 0.05, 0.8, 0.9});
  c.steps.push_back(JitterParams{0.2, 0.2, 0.05, 0.8});
  c.steps.push_back(JitterParams{0.4, 1.0, 0.001, 0.75});
  c.steps.push_back(JitterParams{0.5, 4.0, 0.0005, 0.65});
  c.steps.push_back(ElasticParams{});
  c.steps.push_back(RotateParams{});
  c.steps.push_back(ScaleParams{});
  c.steps.push_back(ChromaticParams::defaults(ChromaticKind::auto_contrast));
  c.steps.push_back(ChromaticParams::defaults(ChromaticKind::translation));
  c.steps.push_back(ChromaticParams::defaults(ChromaticKind::jitter));
  c.steps.push_back(ChromaticParams::defaults(ChromaticKind::drop));
  return c;
}

AugmentationConfig disabled(AugmentationConfig config) {
  for (auto& step : config.steps) {
    std::visit(
        [](auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, ElasticParams>) {
            s.p.assign(s.granularity_magnitude.size(), 0.0);
          } else {
            s.p = 0.0;
          }
        },
        step);
  }
  return config;
}

std::string_view step_name(const AugmentationStep& step) {
  return std::visit(
      [](const auto& s) -> std::string_view {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CuboidCropParams>) return "cuboid_crop";
        if constexpr (std::is_same_v<T, JitterParams>) return "random_jitter";
        if constexpr (std::is_same_v<T, ElasticParams>) return "elastic_distort";
        if constexpr (std::is_same_v<T, RotateParams>) return "random_rotate";
        if constexpr (std::is_same_v<T, ScaleParams>) return "random_scale";
        if constexpr (std::is_same_v<T, ChromaticParams>) {
          switch (s.kind) {
            case ChromaticKind::auto_contrast:
              return "auto_contrast";
            case ChromaticKind::translation:
              return "chromatic_translation";
            case ChromaticKind::jitter:
              return "chromatic_jitter";
            case ChromaticKind::drop:
              return "color_drop";
          }
        }
        return "";
      },
      step);
}

AugmentationConfig parse_augmentation_config(std::string_view text) {
  AugmentationConfig config;
  std::vector<Section> sections;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("line " + std::to_string(line_no) + ": unterminated section header");
      sections.push_back({trim(line.substr(1, line.size() - 2)), line_no, {}, {}});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::exception&) {
      throw ConfigError("line " + std::to_string(line_no) + ": cannot parse value '" + value + "'");
    }
    if (sections.empty()) {
      if (key != "seed" || !parsed.is_number_unsigned()) {
        throw ConfigError("line " + std::to_string(line_no) + ": only 'seed = <n>' may precede the first section");
      }
      config.seed = parsed.get<std::uint64_t>();
      continue;
    }
    auto& s = sections.back();
    if (s.values.count(key)) throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    s.values[key] = std::move(parsed);
    s.lines[key] = line_no;
  }
  for (const auto& s : sections) config.steps.push_back(build_step(s));
  config.check();
  return config;
}

std::string format_augmentation_config(const AugmentationConfig& config) {
  std::ostringstream out;
  out << "seed = " << config.seed << "\n";
  for (const auto& step : config.steps) {
    out << "\n[" << step_name(step) << "]\n";
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, CuboidCropParams>) {
            out << "min_points = " << s.min_points << "\naspect = " << num(s.aspect)
                << "\nmin_crop = " << num(s.min_crop) << "\nmax_crop = " << num(s.max_crop) << "\n";
          } else if constexpr (std::is_same_v<T, JitterParams>) {
            out << "sigma = " << num(s.sigma) << "\nclip = " << num(s.clip) << "\nratio = " << num(s.ratio) << "\n";
          } else if constexpr (std::is_same_v<T, ElasticParams>) {
            out << "params = " << list(s.granularity_magnitude) << "\np = " << list(s.p) << "\n";
          } else if constexpr (std::is_same_v<T, RotateParams>) {
            out << "angles = " << list(s.angles_deg) << "\n";
          } else if constexpr (std::is_same_v<T, ScaleParams>) {
            out << "scale = " << list(std::vector<double>{s.lo, s.hi}) << "\n";
          } else if constexpr (std::is_same_v<T, ChromaticParams>) {
            if (s.kind == ChromaticKind::translation) out << "ratio = " << num(s.ratio) << "\n";
            if (s.kind == ChromaticKind::jitter) out << "std = " << num(s.std) << "\n";
          }
          if constexpr (!std::is_same_v<T, ElasticParams>) out << "p = " << num(s.p) << "\n";
        },
        step);
  }
  return out.str();
}

}  // namespace scenekit
