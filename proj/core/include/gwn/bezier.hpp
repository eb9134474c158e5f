#pragma once

#include <array>
#include <memory>

#include "gwn/parametric.hpp"

namespace gwn {

/// Cubic Bezier triangle over the simplex u, v >= 0, u + v <= 1.
///
/// Control point k multiplies basis function k (0-based):
///   0: (1-u-v)^3     1: 3v(1-u-v)^2   2: 3u(1-u-v)^2   3: 3v^2(1-u-v)
///   4: 6uv(1-u-v)    5: 3u^2(1-u-v)   6: v^3           7: 3uv^2
///   8: 3u^2 v        9: u^3
struct BezierTrianglePatch {
  std::array<Vec3, 10> control;

  /// Control net of the planar map f(u, v) = (u, v, 0).
  static BezierTrianglePatch identity();
};

std::array<double, 10> bezier_triangle_basis(double u, double v);

PatchSample bezier_triangle_sample(const BezierTrianglePatch& patch, double u, double v);

/// Point and unit normal. Throws DegenerateNormal when the partials are parallel.
std::pair<Vec3, UnitVec3> eval_bezier_triangle(const BezierTrianglePatch& patch, double u,
                                               double v);

class BezierTriangleSurface final : public ParametricSurface {
 public:
  explicit BezierTriangleSurface(BezierTrianglePatch patch, ParametricOptions opts = {});

  std::string kind() const override { return "bezier_triangle"; }
  ParamDomain domain() const override { return ParamDomain::Simplex; }
  PatchSample sample(double u, double v) const override;
  Aabb bounds() const override { return bounds_; }
  std::unique_ptr<Surface> flipped() const override;
  std::unique_ptr<Surface> transformed(const RigidTransform& xf) const override;

  const BezierTrianglePatch& patch() const { return patch_; }

 private:
  BezierTrianglePatch patch_;
  Aabb bounds_;  // convex hull property: box of the control net
};

std::vector<IntersectionRecord> intersect_ray_bezier(const BezierTriangleSurface& patch,
                                                     const Ray& r);

}  // namespace gwn
