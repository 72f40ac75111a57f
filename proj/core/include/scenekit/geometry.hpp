#pragma once

#include "scenekit/scene.hpp"

#include <Eigen/Core>

#include <array>
#include <vector>

namespace scenekit {

using Vec2 = Eigen::Vector2d;

/// Planar convex quad with corners in cyclic order.
struct PlaneQuad {
  std::array<Vec3, 4> corners;
  Vec3 normal;
};

/// Vertices in counter-clockwise order. May be empty.
struct Polygon2D {
  std::vector<Vec2> vertices;
};

struct BoxGeometry {
  std::array<Vec3, 8> corners;
  Polygon2D footprint;
  double z_min = 0.0;
  double z_max = 0.0;
};

/// Point-on-line classification epsilon for half-plane clipping (m).
inline constexpr double kClipEpsilon = 1e-9;

/// Vertical quad a -> b -> b+h -> a+h; thickness is ignored.
/// Throws GeometryError for a zero-length baseline.
PlaneQuad element_quad(const Wall& wall);

/// The opening rectangle inside its host wall's plane, corners ordered
/// bottom-left, bottom-right, top-right, top-left along the wall direction.
/// Throws GeometryError if the wall id does not resolve.
PlaneQuad element_quad(const Opening& opening, const Scene& scene);

/// Orthogonal projection of `pred` onto the plane of `target`, expressed in
/// target's in-plane frame (origin at target corner 0, first axis along the
/// first edge). Returns an empty polygon when the projection has no area.
/// Throws GeometryError for a degenerate target.
Polygon2D project_quad(const PlaneQuad& pred, const PlaneQuad& target);

/// Signed shoelace area (positive for CCW).
double signed_area(const Polygon2D& polygon) noexcept;
double area(const Polygon2D& polygon) noexcept;

/// True when all turns have the same orientation (collinear turns allowed).
bool is_convex(const Polygon2D& polygon) noexcept;

/// Sutherland-Hodgman clip of `subject` by the convex `clip` polygon.
/// Either orientation is accepted. Throws GeometryError for non-convex input.
Polygon2D clip_convex(const Polygon2D& subject, const Polygon2D& clip);

/// Area of the intersection of two convex polygons.
double convex_clip_area(const Polygon2D& subject, const Polygon2D& clip);

/// IoU of `pred` projected into the plane of `gt` against `gt` itself.
/// Not symmetric: the ground-truth plane defines the projection.
double iou_planar(const PlaneQuad& pred, const PlaneQuad& gt);

BoxGeometry box_geometry(const OrientedBox3D& box);

/// Exact volumetric IoU of two z-rotated boxes; symmetric bit-for-bit.
double iou_box3d(const OrientedBox3D& a, const OrientedBox3D& b);

}  // namespace scenekit
