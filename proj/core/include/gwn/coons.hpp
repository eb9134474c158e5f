#pragma once

#include <array>
#include <memory>

#include "gwn/parametric.hpp"

namespace gwn {

/// Bezier curve on [0, 1]. Quadratic input is degree-elevated to cubic.
class BezierCurve {
 public:
  BezierCurve() = default;
  explicit BezierCurve(const std::array<Vec3, 4>& cubic) : ctrl_(cubic) {}
  static BezierCurve from_quadratic(const std::array<Vec3, 3>& quad);
  static BezierCurve line(const Vec3& a, const Vec3& b);

  Vec3 eval(double t) const;
  Vec3 derivative(double t) const;
  BezierCurve reversed() const { return BezierCurve({ctrl_[3], ctrl_[2], ctrl_[1], ctrl_[0]}); }
  const std::array<Vec3, 4>& control() const { return ctrl_; }

 private:
  std::array<Vec3, 4> ctrl_{};
};

/// Quadratic Bernstein basis (1-t)^2, 2t(1-t), t^2.
std::array<double, 3> quadratic_bezier_basis(double t);

/// Bilinearly blended Coons patch: c0 at v = 0, c1 at v = 1, d0 at u = 0,
/// d1 at u = 1, each running in increasing parameter.
struct CoonsPatch {
  BezierCurve c0, c1, d0, d1;

  /// Throws InvalidInput unless the curves meet at the four corners.
  void validate(double tol = 1e-9) const;
  /// Flat unit square in z = 0.
  static CoonsPatch unit_square();
};

PatchSample coons_sample(const CoonsPatch& patch, double u, double v);
std::pair<Vec3, UnitVec3> eval_coons(const CoonsPatch& patch, double u, double v);

class CoonsSurface final : public ParametricSurface {
 public:
  explicit CoonsSurface(CoonsPatch patch, ParametricOptions opts = {});

  std::string kind() const override { return "coons"; }
  ParamDomain domain() const override { return ParamDomain::UnitSquare; }
  PatchSample sample(double u, double v) const override;
  Aabb bounds() const override { return bounds_; }
  std::unique_ptr<Surface> flipped() const override;
  std::unique_ptr<Surface> transformed(const RigidTransform& xf) const override;

  const CoonsPatch& patch() const { return patch_; }

 private:
  CoonsPatch patch_;
  Aabb bounds_;
};

std::vector<IntersectionRecord> intersect_ray_coons(const CoonsSurface& patch, const Ray& r);

}  // namespace gwn
