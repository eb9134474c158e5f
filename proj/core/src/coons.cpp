#include "gwn/coons.hpp"

#include "gwn/errors.hpp"

namespace gwn {

BezierCurve BezierCurve::from_quadratic(const std::array<Vec3, 3>& q) {
  return BezierCurve({q[0], (q[0] + 2.0 * q[1]) / 3.0, (2.0 * q[1] + q[2]) / 3.0, q[2]});
}

BezierCurve BezierCurve::line(const Vec3& a, const Vec3& b) {
  return BezierCurve({a, a + (b - a) / 3.0, a + 2.0 * (b - a) / 3.0, b});
}

Vec3 BezierCurve::eval(double t) const {
  const double s = 1.0 - t;
  return s * s * s * ctrl_[0] + 3 * s * s * t * ctrl_[1] + 3 * s * t * t * ctrl_[2] +
         t * t * t * ctrl_[3];
}

Vec3 BezierCurve::derivative(double t) const {
  const double s = 1.0 - t;
  return 3 * s * s * (ctrl_[1] - ctrl_[0]) + 6 * s * t * (ctrl_[2] - ctrl_[1]) +
         3 * t * t * (ctrl_[3] - ctrl_[2]);
}

std::array<double, 3> quadratic_bezier_basis(double t) {
  const double s = 1.0 - t;
  return {s * s, 2 * t * s, t * t};
}

void CoonsPatch::validate(double tol) const {
  const auto close = [tol](const Vec3& a, const Vec3& b) { return norm(a - b) <= tol; };
  if (!close(c0.eval(0), d0.eval(0)) || !close(c0.eval(1), d1.eval(0)) ||
      !close(c1.eval(0), d0.eval(1)) || !close(c1.eval(1), d1.eval(1)))
    throw Error(ErrorKind::InvalidInput, "coons boundary curves do not meet at the corners");
}

CoonsPatch CoonsPatch::unit_square() {
  const Vec3 p00{0, 0, 0}, p10{1, 0, 0}, p01{0, 1, 0}, p11{1, 1, 0};
  return {BezierCurve::line(p00, p10), BezierCurve::line(p01, p11), BezierCurve::line(p00, p01),
          BezierCurve::line(p10, p11)};
}

PatchSample coons_sample(const CoonsPatch& p, double u, double v) {
  const Vec3 p00 = p.c0.eval(0), p10 = p.c0.eval(1), p01 = p.c1.eval(0), p11 = p.c1.eval(1);
  const Vec3 c0 = p.c0.eval(u), c1 = p.c1.eval(u), d0 = p.d0.eval(v), d1 = p.d1.eval(v);
  PatchSample s;
  s.point = (1 - v) * c0 + v * c1 + (1 - u) * d0 + u * d1 -
            ((1 - u) * (1 - v) * p00 + u * (1 - v) * p10 + (1 - u) * v * p01 + u * v * p11);
  s.du = (1 - v) * p.c0.derivative(u) + v * p.c1.derivative(u) - d0 + d1 -
         ((1 - v) * (p10 - p00) + v * (p11 - p01));
  s.dv = c1 - c0 + (1 - u) * p.d0.derivative(v) + u * p.d1.derivative(v) -
         ((1 - u) * (p01 - p00) + u * (p11 - p10));
  return s;
}

std::pair<Vec3, UnitVec3> eval_coons(const CoonsPatch& patch, double u, double v) {
  if (u < -1e-12 || v < -1e-12 || u > 1 + 1e-12 || v > 1 + 1e-12)
    throw Error(ErrorKind::OutsideDomain, "(u, v) outside the unit square");
  const PatchSample s = coons_sample(patch, u, v);
  const Vec3 n = cross(s.du, s.dv);
  if (!(norm(n) > 1e-14 * norm(s.du) * norm(s.dv)) || norm(n) == 0.0)
    throw Error(ErrorKind::DegenerateNormal, "parallel partial derivatives");
  return {s.point, UnitVec3::normalize(n)};
}

namespace {

// The patch is bicubic; its tensor-product control net bounds it.
Aabb coons_bounds(const CoonsPatch& p) {
  const Vec3 p00 = p.c0.eval(0), p10 = p.c0.eval(1), p01 = p.c1.eval(0), p11 = p.c1.eval(1);
  Aabb box;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      const double a = i / 3.0, b = j / 3.0;
      box.extend((1 - b) * p.c0.control()[i] + b * p.c1.control()[i] +
                 (1 - a) * p.d0.control()[j] + a * p.d1.control()[j] -
                 ((1 - a) * (1 - b) * p00 + a * (1 - b) * p10 + (1 - a) * b * p01 +
                  a * b * p11));
    }
  }
  return box;
}

}  // namespace

CoonsSurface::CoonsSurface(CoonsPatch patch, ParametricOptions opts)
    : ParametricSurface(opts), patch_(patch), bounds_(coons_bounds(patch_)) {
  patch_.validate();
  init_seed_grid();
}

PatchSample CoonsSurface::sample(double u, double v) const { return coons_sample(patch_, u, v); }

std::unique_ptr<Surface> CoonsSurface::flipped() const {
  return std::make_unique<CoonsSurface>(CoonsPatch{patch_.d0, patch_.d1, patch_.c0, patch_.c1},
                                        opts_);
}

std::unique_ptr<Surface> CoonsSurface::transformed(const RigidTransform& xf) const {
  auto map = [&xf](const BezierCurve& c) {
    auto pts = c.control();
    for (auto& q : pts) q = xf.apply(q);
    return BezierCurve(pts);
  };
  return std::make_unique<CoonsSurface>(
      CoonsPatch{map(patch_.c0), map(patch_.c1), map(patch_.d0), map(patch_.d1)}, opts_);
}

std::vector<IntersectionRecord> intersect_ray_coons(const CoonsSurface& patch, const Ray& r) {
  return patch.intersect(r);
}

}  // namespace gwn
