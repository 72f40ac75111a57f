#include "scenekit/datagen.hpp"

#include "scenekit/error.hpp"
#include "scenekit/ply.hpp"
#include "scenekit/random.hpp"
#include "scenekit/script.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

namespace scenekit {

namespace {

constexpr double kWallThickness = 0.1;
constexpr double kRoomGap = 0.5;
// Openings keep this distance from wall ends, the ceiling, and each other.
constexpr double kOpeningMargin = 0.1;
constexpr double kMinOpeningWidth = 0.6;
constexpr double kMinDoorHeight = 1.9;

// Random streams, so that e.g. the cloud does not depend on layout draw count.
constexpr std::uint64_t kSceneStream = 11;
constexpr std::uint64_t kCloudStream = 12;
constexpr std::uint64_t kJitterStream = 21;
constexpr std::uint64_t kDropStream = 22;

// Dividing by the integer scale yields the same double a parser reads back
// from the decimal text.
double round_to(double v, double scale) { return std::round(v * scale) / scale; }
double cm(double v) { return round_to(v, 100.0); }
double mm(double v) { return round_to(v, 1000.0); }

void snap_to_text(Scene& scene) {
  auto snap = [](Vec3& v) { v = v.unaryExpr([](double x) { return mm(x); }); };
  for (auto& w : scene.walls) {
    snap(w.a);
    snap(w.b);
    w.height = mm(w.height);
    w.thickness = mm(w.thickness);
  }
  for (auto& o : scene.openings) {
    snap(o.center);
    o.width = mm(o.width);
    o.height = mm(o.height);
  }
  for (auto& b : scene.boxes) {
    snap(b.center);
    snap(b.scale);
    b.angle_z = std::clamp(mm(b.angle_z), -3.141, 3.141);
  }
}

int uniform_int(CounterRng& rng, Range<int> r) {
  return r.lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(r.hi - r.lo) + 1));
}

double uniform_in(CounterRng& rng, Range<double> r) { return rng.uniform(r.lo, r.hi); }

struct SizeRange {
  Range<double> x;
  Range<double> y;
  Range<double> z;
};

SizeRange size_range(const std::string& category) {
  static const std::map<std::string, SizeRange> table{
      {"bed", {{1.4, 2.2}, {0.9, 2.0}, {0.4, 0.7}}},
      {"cabinet", {{0.4, 1.2}, {0.3, 0.6}, {0.6, 2.0}}},
      {"chair", {{0.4, 0.6}, {0.4, 0.6}, {0.7, 1.0}}},
      {"sofa", {{1.5, 2.5}, {0.8, 1.0}, {0.7, 0.9}}},
      {"table", {{0.8, 1.8}, {0.6, 1.0}, {0.7, 0.8}}},
      {"nightstand", {{0.4, 0.6}, {0.3, 0.5}, {0.4, 0.6}}},
      {"bookcase", {{0.6, 1.2}, {0.25, 0.4}, {1.2, 2.0}}},
      {"plants", {{0.3, 0.6}, {0.3, 0.6}, {0.4, 1.5}}},
  };
  const auto it = table.find(category);
  if (it != table.end()) return it->second;
  return {{0.3, 1.5}, {0.3, 1.5}, {0.3, 1.5}};
}

// Places up to `count` non-overlapping openings on one wall.
void place_openings(const Wall& wall, int count, CounterRng& rng, std::vector<Opening>& out) {
  const Vec3 dir = (wall.b - wall.a).normalized();
  const double length = (wall.b - wall.a).norm();
  std::vector<std::pair<double, double>> taken;
  for (int n = 0; n < count; ++n) {
    const bool door = rng.bernoulli(0.5);
    Opening o;
    o.kind = door ? OpeningKind::door : OpeningKind::window;
    o.wall_id = wall.id;
    double z_center;
    if (door) {
      o.width = cm(rng.uniform(0.8, 1.0));
      o.height = cm(rng.uniform(kMinDoorHeight, std::min(2.1, wall.height - kOpeningMargin)));
      z_center = o.height / 2;
    } else {
      o.width = cm(rng.uniform(kMinOpeningWidth, 1.6));
      const double room = wall.height - 2 * kOpeningMargin;
      o.height = cm(rng.uniform(0.4, std::min(1.4, room * 0.6)));
      const double sill = cm(rng.uniform(kOpeningMargin, wall.height - kOpeningMargin - o.height));
      z_center = sill + o.height / 2;
    }
    const double lo = kOpeningMargin + o.width / 2;
    const double hi = length - kOpeningMargin - o.width / 2;
    if (hi < lo) continue;
    bool placed = false;
    for (int attempt = 0; attempt < 20 && !placed; ++attempt) {
      const double s = std::clamp(cm(rng.uniform(lo, hi)), lo, hi);
      const bool clash = std::any_of(taken.begin(), taken.end(), [&](const auto& t) {
        return s - o.width / 2 < t.second + kOpeningMargin && s + o.width / 2 > t.first - kOpeningMargin;
      });
      if (clash) continue;
      taken.emplace_back(s - o.width / 2, s + o.width / 2);
      o.center = wall.a + s * dir + Vec3(0, 0, z_center);
      out.push_back(o);
      placed = true;
    }
  }
}

OrientedBox3D make_box(const std::string& category, double x0, double w, double d, double h, CounterRng& rng) {
  const SizeRange range = size_range(category);
  OrientedBox3D box;
  box.category = category;
  box.scale = Vec3(cm(uniform_in(rng, range.x)), cm(uniform_in(rng, range.y)),
                   cm(std::min(uniform_in(rng, range.z), h - 0.05)));
  // Shrink the footprint until any rotation fits on the floor.
  const double limit = std::min(w, d) - 0.02;
  double radius = 0.5 * std::hypot(box.scale.x(), box.scale.y());
  if (2 * radius > limit) {
    const double f = limit / (2 * radius);
    box.scale.x() = std::floor(box.scale.x() * f * 100) / 100;
    box.scale.y() = std::floor(box.scale.y() * f * 100) / 100;
    radius = 0.5 * std::hypot(box.scale.x(), box.scale.y());
  }
  const double cx = cm(rng.uniform(x0 + radius, x0 + w - radius));
  const double cy = cm(rng.uniform(radius, d - radius));
  box.center = Vec3(cx, cy, box.scale.z() / 2);
  box.angle_z = std::clamp(mm(rng.uniform(-std::numbers::pi, std::numbers::pi)), -3.141, 3.141);
  return box;
}

Vec3 base_color(CounterRng& rng) { return Vec3(rng.uniform(0.2, 0.9), rng.uniform(0.2, 0.9), rng.uniform(0.2, 0.9)); }

std::size_t sample_count(double area, double density, CounterRng& rng) {
  const double expected = area * density;
  const double whole = std::floor(expected);
  return static_cast<std::size_t>(whole) + (rng.bernoulli(expected - whole) ? 1 : 0);
}

Vec3 noisy(const Vec3& p, double sigma, CounterRng& rng) {
  if (sigma <= 0.0) return p;
  return p + sigma * Vec3(rng.normal(), rng.normal(), rng.normal());
}

}  // namespace

void GenConfig::check() const {
  auto bad = [](const std::string& what) { throw ConfigError("gen config: " + what); };
  if (rooms.lo < 1 || rooms.hi < rooms.lo) bad("rooms must satisfy 1 <= lo <= hi");
  for (const auto& [name, r] : {std::pair{"room_width", room_width}, std::pair{"room_depth", room_depth},
                                std::pair{"room_height", room_height}}) {
    if (!(r.lo > 0.0) || r.hi < r.lo) bad(std::string(name) + " must satisfy 0 < lo <= hi");
  }
  if (openings_per_wall.lo < 0 || openings_per_wall.hi < openings_per_wall.lo) {
    bad("openings_per_wall must satisfy 0 <= lo <= hi");
  }
  if (boxes_per_room.lo < 0 || boxes_per_room.hi < boxes_per_room.lo) bad("boxes_per_room must satisfy 0 <= lo <= hi");
  if (boxes_per_room.hi > 0 && categories.empty()) bad("categories must not be empty");
  for (const auto& c : categories) {
    if (c.empty()) bad("empty category name");
  }
  if (!(density > 0.0) || !std::isfinite(density)) bad("density must be > 0");
  if (!(noise_sigma >= 0.0)) bad("noise_sigma must be >= 0");
}

Scene gen_scene(const GenConfig& config) {
  config.check();
  const double shortest = std::min(config.room_width.lo, config.room_depth.lo);
  if (config.openings_per_wall.hi > 0) {
    if (shortest < kMinOpeningWidth + 2 * kOpeningMargin) {
      throw ConfigError("gen config: walls of " + std::to_string(shortest) + " m cannot hold an opening");
    }
    if (config.room_height.lo < kMinDoorHeight + 2 * kOpeningMargin) {
      throw ConfigError("gen config: rooms lower than 2.1 m cannot hold a door");
    }
  }

  CounterRng rng(derive_seed(config.seed, kSceneStream));
  Scene scene;
  std::vector<Opening> openings;
  const int rooms = uniform_int(rng, config.rooms);
  double x0 = 0.0;
  for (int r = 0; r < rooms; ++r) {
    const double w = cm(uniform_in(rng, config.room_width));
    const double d = cm(uniform_in(rng, config.room_depth));
    const double h = cm(uniform_in(rng, config.room_height));
    const Vec3 corners[4] = {{x0, 0, 0}, {x0 + w, 0, 0}, {x0 + w, d, 0}, {x0, d, 0}};
    for (int c = 0; c < 4; ++c) {
      Wall wall{static_cast<int>(scene.walls.size()), corners[c], corners[(c + 1) % 4], h, kWallThickness};
      scene.walls.push_back(wall);
      place_openings(wall, uniform_int(rng, config.openings_per_wall), rng, openings);
    }
    const int boxes = uniform_int(rng, config.boxes_per_room);
    for (int b = 0; b < boxes; ++b) {
      const auto& category = config.categories[rng.below(config.categories.size())];
      OrientedBox3D box = make_box(category, x0, w, d, h, rng);
      box.id = static_cast<int>(scene.boxes.size());
      scene.boxes.push_back(box);
    }
    x0 = cm(x0 + w + kRoomGap);
  }

  int doors = 0;
  int windows = 0;
  for (auto& o : openings) o.id = o.kind == OpeningKind::door ? doors++ : windows++;
  scene.openings = std::move(openings);
  snap_to_text(scene);
  return canonicalize(std::move(scene));
}

PointCloud sample_cloud(const Scene& scene, const GenConfig& config) {
  CounterRng rng(derive_seed(config.seed, kCloudStream));
  PointCloud cloud;
  const double sigma = config.noise_sigma;

  for (const auto& wall : scene.walls) {
    const Vec3 edge = wall.b - wall.a;
    const double length = edge.norm();
    const Vec3 dir = edge / length;
    const Vec3 color = base_color(rng);
    std::vector<const Opening*> holes;
    for (const auto& o : scene.openings) {
      if (o.wall_id == wall.id) holes.push_back(&o);
    }
    const std::size_t n = sample_count(length * wall.height, config.density, rng);
    for (std::size_t i = 0; i < n; ++i) {
      const double u = rng.uniform(0.0, length);
      const double v = rng.uniform(0.0, wall.height);
      const bool in_hole = std::any_of(holes.begin(), holes.end(), [&](const Opening* o) {
        const Vec3 rel = o->center - wall.a;
        return std::fabs(u - rel.dot(dir)) < o->width / 2 && std::fabs(v - rel.z()) < o->height / 2;
      });
      const Vec3 p = noisy(wall.a + u * dir + Vec3(0, 0, v), sigma, rng);
      if (!in_hole) cloud.points.push_back({p, color});
    }
  }

  for (const auto& box : scene.boxes) {
    const Vec3 color = base_color(rng);
    const double c = std::cos(box.angle_z);
    const double s = std::sin(box.angle_z);
    const Vec3 half = box.scale / 2;
    // Each face: fixed axis, its sign, and the two free axes.
    for (int axis = 0; axis < 3; ++axis) {
      const int u_axis = (axis + 1) % 3;
      const int v_axis = (axis + 2) % 3;
      const double area = box.scale[u_axis] * box.scale[v_axis];
      for (double sign : {-1.0, 1.0}) {
        const std::size_t n = sample_count(area, config.density, rng);
        for (std::size_t i = 0; i < n; ++i) {
          Vec3 local;
          local[axis] = sign * half[axis];
          local[u_axis] = rng.uniform(-half[u_axis], half[u_axis]);
          local[v_axis] = rng.uniform(-half[v_axis], half[v_axis]);
          const Vec3 world(box.center.x() + c * local.x() - s * local.y(), box.center.y() + s * local.x() + c * local.y(),
                           box.center.z() + local.z());
          cloud.points.push_back({noisy(world, sigma, rng), color});
        }
      }
    }
  }
  return cloud;
}

Scene perturb_scene(const Scene& scene, const Perturbation& perturbation) {
  const double sp = perturbation.sigma_pos;
  const double sa = perturbation.sigma_angle;
  if (!(sp >= 0.0) || !(sa >= 0.0) || !(perturbation.drop_rate >= 0.0 && perturbation.drop_rate <= 1.0)) {
    throw std::invalid_argument("perturbation needs sigmas >= 0 and drop_rate in [0, 1]");
  }
  CounterRng jitter(derive_seed(perturbation.seed, kJitterStream));
  CounterRng drop(derive_seed(perturbation.seed, kDropStream));
  Scene out = scene;

  if (sp > 0.0) {
    for (auto& wall : out.walls) {
      const Wall before = wall;
      const double dz = sp * jitter.normal();
      wall.a += Vec3(sp * jitter.normal(), sp * jitter.normal(), dz);
      wall.b += Vec3(sp * jitter.normal(), sp * jitter.normal(), dz);
      if ((wall.b - wall.a).norm() < 0.1) wall = before;
    }
    // Openings keep their wall-local placement, jittered and clamped to the
    // moved host wall.
    for (auto& o : out.openings) {
      const Wall* old_wall = scene.find_wall(o.wall_id);
      const Wall* new_wall = out.find_wall(o.wall_id);
      const double ds = sp * jitter.normal();
      const double dz = sp * jitter.normal();
      if (!old_wall || !new_wall) continue;
      const Vec3 old_dir = (old_wall->b - old_wall->a).normalized();
      const double s = (o.center - old_wall->a).dot(old_dir) + ds;
      const double z = o.center.z() - old_wall->a.z() + dz;
      const Vec3 edge = new_wall->b - new_wall->a;
      const double length = edge.norm();
      o.width = std::min(o.width, length);
      o.height = std::min(o.height, new_wall->height);
      const double s_c = std::clamp(s, o.width / 2, length - o.width / 2);
      const double z_c = std::clamp(z, o.height / 2, new_wall->height - o.height / 2);
      o.center = new_wall->a + s_c * (edge / length) + Vec3(0, 0, z_c);
    }
  }
  if (sp > 0.0 || sa > 0.0) {
    for (auto& box : out.boxes) {
      if (sp > 0.0) box.center += sp * Vec3(jitter.normal(), jitter.normal(), jitter.normal());
      if (sa > 0.0) box.angle_z = normalize_angle(box.angle_z + sa * jitter.normal());
    }
  }
  if (perturbation.drop_rate <= 0.0) return out;

  Scene kept;
  std::map<int, int> wall_ids;
  for (const auto& wall : out.walls) {
    if (drop.bernoulli(perturbation.drop_rate)) continue;
    wall_ids[wall.id] = static_cast<int>(kept.walls.size());
    kept.walls.push_back(wall);
    kept.walls.back().id = wall_ids[wall.id];
  }
  int doors = 0;
  int windows = 0;
  for (const auto& o : out.openings) {
    const bool dropped = drop.bernoulli(perturbation.drop_rate);
    const auto host = wall_ids.find(o.wall_id);
    if (dropped || host == wall_ids.end()) continue;
    Opening copy = o;
    copy.wall_id = host->second;
    copy.id = o.kind == OpeningKind::door ? doors++ : windows++;
    kept.openings.push_back(copy);
  }
  for (const auto& box : out.boxes) {
    if (drop.bernoulli(perturbation.drop_rate)) continue;
    kept.boxes.push_back(box);
    kept.boxes.back().id = static_cast<int>(kept.boxes.size()) - 1;
  }
  return kept;
}

GenConfig parse_gen_config(std::string_view text) {
  using nlohmann::json;
  GenConfig config;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& msg) { throw ConfigError("line " + std::to_string(line_no) + ": " + msg); };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    json value;
    try {
      value = json::parse(trim(line.substr(eq + 1)));
    } catch (const json::exception&) {
      fail("cannot parse value for '" + key + "'");
    }
    try {
      auto range_d = [&](Range<double>& r) {
        const auto v = value.get<std::vector<double>>();
        if (v.size() != 2) fail("'" + key + "' needs [lo, hi]");
        r = {v[0], v[1]};
      };
      auto range_i = [&](Range<int>& r) {
        const auto v = value.get<std::vector<int>>();
        if (v.size() != 2) fail("'" + key + "' needs [lo, hi]");
        r = {v[0], v[1]};
      };
      if (key == "rooms") {
        range_i(config.rooms);
      } else if (key == "room_width") {
        range_d(config.room_width);
      } else if (key == "room_depth") {
        range_d(config.room_depth);
      } else if (key == "room_height") {
        range_d(config.room_height);
      } else if (key == "openings_per_wall") {
        range_i(config.openings_per_wall);
      } else if (key == "boxes_per_room") {
        range_i(config.boxes_per_room);
      } else if (key == "categories") {
        config.categories = value.get<std::vector<std::string>>();
      } else if (key == "density") {
        config.density = value.get<double>();
      } else if (key == "noise_sigma") {
        config.noise_sigma = value.get<double>();
      } else if (key == "seed") {
        config.seed = value.get<std::uint64_t>();
      } else {
        fail("unknown key '" + key + "'");
      }
    } catch (const json::exception&) {
      fail("bad value for '" + key + "'");
    }
  }
  config.check();
  return config;
}

GenConfig corpus_scene_config(const GenConfig& config, std::size_t index) {
  GenConfig c = config;
  c.seed = derive_seed(config.seed, index);
  return c;
}

std::vector<std::string> write_corpus(const std::filesystem::path& dir, const GenConfig& config, std::size_t count) {
  config.check();
  std::vector<std::string> ids;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < count; ++i) {
    const GenConfig c = corpus_scene_config(config, i);
    const Scene scene = gen_scene(c);
    char id[32];
    std::snprintf(id, sizeof(id), "scene_%04zu", i);
    const auto scene_dir = dir / id;
    std::filesystem::create_directories(scene_dir, ec);
    if (ec) throw IoError("cannot create " + scene_dir.string() + ": " + ec.message());
    std::ofstream script(scene_dir / "scene.txt", std::ios::binary);
    script << serialize_scene(scene);
    if (!script) throw IoError("failed writing " + (scene_dir / "scene.txt").string());
    write_ply_file(scene_dir / "points.ply", sample_cloud(scene, c), PlyFormat::binary_little_endian);
    ids.emplace_back(id);
  }
  return ids;
}

}  // namespace scenekit
