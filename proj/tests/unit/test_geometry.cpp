#include "oracles.hpp"

#include "scenekit/error.hpp"
#include "scenekit/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace scenekit;

namespace {

Polygon2D square(double cx, double cy, double side, double angle = 0.0) {
  Polygon2D p;
  const double h = side / 2;
  const double c = std::cos(angle), s = std::sin(angle);
  for (const auto& [x, y] : {std::pair{-h, -h}, std::pair{h, -h}, std::pair{h, h}, std::pair{-h, h}}) {
    p.vertices.emplace_back(cx + c * x - s * y, cy + s * x + c * y);
  }
  return p;
}

OrientedBox3D cube(Vec3 center = Vec3::Zero(), double angle = 0.0) {
  return {0, "thing", center, angle, Vec3::Ones()};
}

const Wall kWall{0, Vec3(0, 0, 0), Vec3(4, 0, 0), 2.6, 0.1};

}  // namespace

TEST(ElementQuad, WallExtrusion) {
  const PlaneQuad q = element_quad(kWall);
  EXPECT_EQ(q.corners[0], Vec3(0, 0, 0));
  EXPECT_EQ(q.corners[1], Vec3(4, 0, 0));
  EXPECT_TRUE(q.corners[2].isApprox(Vec3(4, 0, 2.6)));
  EXPECT_TRUE(q.corners[3].isApprox(Vec3(0, 0, 2.6)));
  EXPECT_NEAR(std::fabs(q.normal.y()), 1.0, 1e-12);
  EXPECT_NEAR(q.normal.x(), 0.0, 1e-12);
}

TEST(ElementQuad, DoorRectangle) {
  Scene s;
  s.walls.push_back(kWall);
  const Opening door{0, OpeningKind::door, 0, Vec3(2, 0, 1), 1.0, 2.0};
  const PlaneQuad q = element_quad(door, s);
  EXPECT_TRUE(q.corners[0].isApprox(Vec3(1.5, 0, 0)));
  EXPECT_TRUE(q.corners[1].isApprox(Vec3(2.5, 0, 0)));
  EXPECT_TRUE(q.corners[2].isApprox(Vec3(2.5, 0, 2)));
  EXPECT_TRUE(q.corners[3].isApprox(Vec3(1.5, 0, 2)));
  Opening dangling = door;
  dangling.wall_id = 3;
  EXPECT_THROW(element_quad(dangling, s), GeometryError);
}

TEST(ElementQuad, ZeroLengthWall) {
  Wall w = kWall;
  w.b = w.a;
  EXPECT_THROW(element_quad(w), GeometryError);
}

TEST(ProjectQuad, IdentityPerpendicularAndOffset) {
  const PlaneQuad gt = element_quad(kWall);
  const Polygon2D self = project_quad(gt, gt);
  EXPECT_NEAR(area(self), 4 * 2.6, 1e-12);

  Wall perp = kWall;
  perp.b = Vec3(0, 4, 0);
  EXPECT_NEAR(area(project_quad(element_quad(perp), gt)), 0.0, 1e-12);

  Wall offset = kWall;
  offset.a.y() = offset.b.y() = 1.0;
  const Polygon2D shifted = project_quad(element_quad(offset), gt);
  ASSERT_EQ(shifted.vertices.size(), self.vertices.size());
  for (std::size_t i = 0; i < self.vertices.size(); ++i) {
    EXPECT_TRUE(shifted.vertices[i].isApprox(self.vertices[i], 1e-12));
  }
}

TEST(ConvexClip, Examples) {
  const Polygon2D unit = square(0.5, 0.5, 1.0);
  EXPECT_NEAR(convex_clip_area(unit, unit), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(convex_clip_area(unit, square(2.5, 0.5, 1.0)), 0.0);
  EXPECT_DOUBLE_EQ(convex_clip_area(unit, square(1.5, 0.5, 1.0)), 0.0);  // shared edge
}

TEST(ConvexClip, RotatedSquareOctagon) {
  const Polygon2D a = square(0, 0, 1.0);
  const Polygon2D b = square(0, 0, 1.0, std::numbers::pi / 4);
  const double expected = 2.0 * (std::sqrt(2.0) - 1.0);
  EXPECT_NEAR(convex_clip_area(a, b), expected, 1e-6);
  EXPECT_NEAR(oracle::mc_intersection_area(a, b, 2'000'000, 42), expected, 5e-3);
}

TEST(ConvexClip, BoundsAndSuperset) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1, 1), side(0.2, 2), ang(-3, 3);
  for (int i = 0; i < 200; ++i) {
    const Polygon2D a = square(u(gen), u(gen), side(gen), ang(gen));
    const Polygon2D b = square(u(gen), u(gen), side(gen), ang(gen));
    const double inter = convex_clip_area(a, b);
    EXPECT_LE(inter, std::min(area(a), area(b)) + 1e-12);
    EXPECT_GE(inter, 0.0);
  }
  const Polygon2D small = square(0, 0, 1.0, 0.3);
  EXPECT_DOUBLE_EQ(convex_clip_area(small, square(0, 0, 10.0)), area(small));
}

TEST(ConvexClip, RejectsNonConvex) {
  Polygon2D dart;
  dart.vertices = {Vec2(0, 0), Vec2(2, 1), Vec2(0, 2), Vec2(1, 1)};
  EXPECT_FALSE(is_convex(dart));
  EXPECT_THROW(convex_clip_area(dart, square(0, 0, 1)), GeometryError);
}

TEST(IouPlanar, Examples) {
  const PlaneQuad gt = element_quad(kWall);
  EXPECT_NEAR(iou_planar(gt, gt), 1.0, 1e-12);

  Wall half = kWall;
  half.a.x() += 2.0;
  half.b.x() += 2.0;
  EXPECT_NEAR(iou_planar(element_quad(half), gt), 1.0 / 3.0, 1e-12);

  Wall perp = kWall;
  perp.b = Vec3(0, 4, 0);
  EXPECT_DOUBLE_EQ(iou_planar(element_quad(perp), gt), 0.0);
}

TEST(IouPlanar, NotSymmetric) {
  const Wall gt{0, Vec3(0, 0, 0), Vec3(4, 0, 0), 2.0, 0.0};
  const double c = std::cos(std::numbers::pi / 3), s = std::sin(std::numbers::pi / 3);
  const Wall pred{0, Vec3(0, 0, 0), Vec3(2 * c, 2 * s, 0), 2.0, 0.0};
  // pred projects onto gt as a 1 x 2 strip inside the 4 x 2 wall: IoU 1/4.
  EXPECT_NEAR(iou_planar(element_quad(pred), element_quad(gt)), 0.25, 1e-12);
  // The other way round, gt covers all of pred's 2 x 2 wall.
  EXPECT_NEAR(iou_planar(element_quad(gt), element_quad(pred)), 1.0, 1e-12);
}

TEST(BoxGeometry, Corners) {
  const BoxGeometry g = box_geometry(cube());
  for (const auto& c : g.corners) {
    EXPECT_NEAR(std::fabs(c.x()), 0.5, 1e-12);
    EXPECT_NEAR(std::fabs(c.y()), 0.5, 1e-12);
    EXPECT_NEAR(std::fabs(c.z()), 0.5, 1e-12);
  }
  EXPECT_DOUBLE_EQ(g.z_min, -0.5);
  EXPECT_DOUBLE_EQ(g.z_max, 0.5);
}

TEST(BoxGeometry, QuarterTurnSwapsExtents) {
  OrientedBox3D b = cube();
  b.scale = Vec3(2, 1, 1);
  b.angle_z = std::numbers::pi / 2;
  const BoxGeometry g = box_geometry(b);
  double max_x = 0, max_y = 0;
  for (const auto& v : g.footprint.vertices) {
    max_x = std::max(max_x, std::fabs(v.x()));
    max_y = std::max(max_y, std::fabs(v.y()));
  }
  EXPECT_NEAR(max_x, 0.5, 1e-12);
  EXPECT_NEAR(max_y, 1.0, 1e-12);
}

TEST(BoxGeometry, FootprintAreaRandom) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const OrientedBox3D b = oracle::random_box(seed, Vec3(1, 2, 3), 5.0);
    const BoxGeometry g = box_geometry(b);
    EXPECT_GT(signed_area(g.footprint), 0.0);
    EXPECT_NEAR(area(g.footprint), b.scale.x() * b.scale.y(), 1e-9);
    EXPECT_NEAR(g.z_max - g.z_min, b.scale.z(), 1e-9);
  }
}

TEST(IouBox3d, Examples) {
  EXPECT_NEAR(iou_box3d(cube(), cube()), 1.0, 1e-12);
  EXPECT_NEAR(iou_box3d(cube(), cube(Vec3(0, 0, 0.5))), 1.0 / 3.0, 1e-12);
  EXPECT_NEAR(iou_box3d(cube(), cube(Vec3::Zero(), std::numbers::pi / 4)), 1.0 / std::sqrt(2.0), 1e-9);
  EXPECT_DOUBLE_EQ(iou_box3d(cube(), cube(Vec3(3, 0, 0))), 0.0);
}

TEST(IouBox3d, SymmetricAndRigidInvariant) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> ang(-3, 3), off(-5, 5);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const OrientedBox3D a = oracle::random_box(2 * seed, Vec3::Zero(), 0.7);
    const OrientedBox3D b = oracle::random_box(2 * seed + 1, Vec3::Zero(), 0.7);
    const double iou = iou_box3d(a, b);
    EXPECT_EQ(iou, iou_box3d(b, a));
    EXPECT_GE(iou, 0.0);
    EXPECT_LE(iou, 1.0);

    const double r = ang(gen);
    const Vec3 t(off(gen), off(gen), off(gen));
    auto move = [&](OrientedBox3D x) {
      const Vec3 c = x.center;
      x.center = Vec3(std::cos(r) * c.x() - std::sin(r) * c.y(), std::sin(r) * c.x() + std::cos(r) * c.y(), c.z()) + t;
      x.angle_z = normalize_angle(x.angle_z + r);
      return x;
    };
    EXPECT_NEAR(iou_box3d(move(a), move(b)), iou, 1e-9);
  }
}

TEST(IouBox3d, MatchesMonteCarloOnSample) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const OrientedBox3D a = oracle::random_box(100 + seed, Vec3::Zero(), 0.5);
    const OrientedBox3D b = oracle::random_box(200 + seed, Vec3::Zero(), 0.5);
    EXPECT_NEAR(iou_box3d(a, b), oracle::mc_box_iou(a, b, 500'000, seed), 1e-2);
  }
}
