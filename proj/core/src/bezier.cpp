#include "gwn/bezier.hpp"

#include "gwn/errors.hpp"

namespace gwn {

namespace {

struct BasisWithPartials {
  std::array<double, 10> b, du, dv;
};

BasisWithPartials basis_all(double u, double v) {
  const double w = 1.0 - u - v;
  BasisWithPartials r;
  r.b = {w * w * w,         3 * v * w * w,     3 * u * w * w, 3 * v * v * w, 6 * u * v * w,
         3 * u * u * w,     v * v * v,         3 * u * v * v, 3 * u * u * v, u * u * u};
  // d/du and d/dv, with dw/du = dw/dv = -1.
  r.du = {-3 * w * w,          -6 * v * w,         3 * w * w - 6 * u * w,
          -3 * v * v,          6 * v * w - 6 * u * v,
          6 * u * w - 3 * u * u, 0.0,               3 * v * v,
          6 * u * v,           3 * u * u};
  r.dv = {-3 * w * w,          3 * w * w - 6 * v * w, -6 * u * w,
          6 * v * w - 3 * v * v, 6 * u * w - 6 * u * v,
          -3 * u * u,          3 * v * v,             6 * u * v,
          3 * u * u,           0.0};
  return r;
}

Aabb control_box(const BezierTrianglePatch& p) {
  return Aabb::of(std::vector<Vec3>(p.control.begin(), p.control.end()));
}

}  // namespace

BezierTrianglePatch BezierTrianglePatch::identity() {
  constexpr double a = 1.0 / 3.0, b = 2.0 / 3.0;
  // Nodal positions (u, v) of each basis function.
  return {{Vec3{0, 0, 0}, Vec3{0, a, 0}, Vec3{a, 0, 0}, Vec3{0, b, 0}, Vec3{a, a, 0},
           Vec3{b, 0, 0}, Vec3{0, 1, 0}, Vec3{a, b, 0}, Vec3{b, a, 0}, Vec3{1, 0, 0}}};
}

std::array<double, 10> bezier_triangle_basis(double u, double v) { return basis_all(u, v).b; }

PatchSample bezier_triangle_sample(const BezierTrianglePatch& patch, double u, double v) {
  const auto bs = basis_all(u, v);
  PatchSample s;
  for (int k = 0; k < 10; ++k) {
    s.point += bs.b[k] * patch.control[k];
    s.du += bs.du[k] * patch.control[k];
    s.dv += bs.dv[k] * patch.control[k];
  }
  return s;
}

std::pair<Vec3, UnitVec3> eval_bezier_triangle(const BezierTrianglePatch& patch, double u,
                                               double v) {
  if (u < -1e-12 || v < -1e-12 || u + v > 1 + 1e-12)
    throw Error(ErrorKind::OutsideDomain, "(u, v) outside the simplex");
  const PatchSample s = bezier_triangle_sample(patch, u, v);
  const Vec3 n = cross(s.du, s.dv);
  if (!(norm(n) > 1e-14 * norm(s.du) * norm(s.dv)) || norm(n) == 0.0)
    throw Error(ErrorKind::DegenerateNormal, "parallel partial derivatives");
  return {s.point, UnitVec3::normalize(n)};
}

BezierTriangleSurface::BezierTriangleSurface(BezierTrianglePatch patch, ParametricOptions opts)
    : ParametricSurface(opts), patch_(patch), bounds_(control_box(patch_)) {
  for (const auto& c : patch_.control)
    if (!is_finite(c)) throw Error(ErrorKind::InvalidInput, "non-finite control point");
  init_seed_grid();
}

PatchSample BezierTriangleSurface::sample(double u, double v) const {
  return bezier_triangle_sample(patch_, u, v);
}

std::unique_ptr<Surface> BezierTriangleSurface::flipped() const {
  // f(v, u): exchanges the roles of u and v in the basis.
  BezierTrianglePatch p = patch_;
  std::swap(p.control[1], p.control[2]);
  std::swap(p.control[3], p.control[5]);
  std::swap(p.control[6], p.control[9]);
  std::swap(p.control[7], p.control[8]);
  return std::make_unique<BezierTriangleSurface>(p, opts_);
}

std::unique_ptr<Surface> BezierTriangleSurface::transformed(const RigidTransform& xf) const {
  BezierTrianglePatch p = patch_;
  for (auto& c : p.control) c = xf.apply(c);
  return std::make_unique<BezierTriangleSurface>(p, opts_);
}

std::vector<IntersectionRecord> intersect_ray_bezier(const BezierTriangleSurface& patch,
                                                     const Ray& r) {
  return patch.intersect(r);
}

}  // namespace gwn
