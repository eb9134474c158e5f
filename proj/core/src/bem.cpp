#include "gwn/bem.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gwn/errors.hpp"

namespace gwn {

namespace {

constexpr double kInv2Pi = 0.5 / std::numbers::pi;

std::atomic<std::uint64_t> g_dense_solves{0};

struct KernelSums {
  double g = 0, h = 0;
  Vec2 dg, dh;  // derivatives with respect to xi
};

void trapezoid(Vec2 xi, Vec2 a, Vec2 b, Vec2 n, int m, bool partials, KernelSums& acc) {
  const double len = norm(b - a);
  for (int k = 0; k <= m; ++k) {
    const double w = (k == 0 || k == m ? 0.5 : 1.0) * len / m;
    const Vec2 eta = a + (static_cast<double>(k) / m) * (b - a);
    const Vec2 r = eta - xi;
    const double r2 = dot(r, r);
    if (r2 < 1e-28) throw Error(ErrorKind::SingularPoint, "quadrature node hits the source point");
    const double rn = dot(r, n);
    acc.g -= w * kInv2Pi * 0.5 * std::log(r2);
    acc.h -= w * kInv2Pi * rn / r2;
    if (partials) {
      acc.dg = acc.dg + (w * kInv2Pi / r2) * r;
      const double r4 = r2 * r2;
      acc.dh = acc.dh - (w * kInv2Pi) * ((-1.0 / r2) * n + (2.0 * rn / r4) * r);
    }
  }
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double t = std::clamp(dot(p - a, ab) / dot(ab, ab), 0.0, 1.0);
  return norm(p - (a + t * ab));
}

// Trapezoid rule, split 16 ways while the point is closer than a piece's length.
void adaptive(Vec2 xi, Vec2 a, Vec2 b, Vec2 n, int m, bool partials, KernelSums& acc, int depth) {
  const double len = norm(b - a);
  if (depth < 8 && segment_distance(xi, a, b) < len) {
    for (int k = 0; k < 16; ++k)
      adaptive(xi, a + (k / 16.0) * (b - a), a + ((k + 1) / 16.0) * (b - a), n, m, partials, acc,
               depth + 1);
    return;
  }
  trapezoid(xi, a, b, n, m, partials, acc);
}

void check_inside(Vec2 xi) {
  if (!(xi.x > 0 && xi.x < 1 && xi.y > 0 && xi.y < 1))
    throw Error(ErrorKind::OutsideDomain, "point is not inside the unit square");
}

}  // namespace

std::vector<BemElement> square_elements(int count) {
  if (count < 8) throw Error(ErrorKind::InvalidInput, "BEM needs at least 8 elements");
  const Vec2 corners[5] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  const Vec2 normals[4] = {{0, -1}, {1, 0}, {0, 1}, {-1, 0}};
  std::vector<BemElement> out;
  for (int side = 0; side < 4; ++side) {
    const int n = count / 4 + (side < count % 4 ? 1 : 0);
    const Vec2 a = corners[side], b = corners[side + 1];
    for (int k = 0; k < n; ++k) {
      BemElement e;
      e.a = a + (static_cast<double>(k) / n) * (b - a);
      e.b = a + (static_cast<double>(k + 1) / n) * (b - a);
      e.mid = 0.5 * (e.a + e.b);
      e.normal = normals[side];
      e.length = norm(e.b - e.a);
      out.push_back(e);
    }
  }
  return out;
}

double fundamental_solution(Vec2 xi, Vec2 eta) {
  const double r = norm(xi - eta);
  if (r < 1e-14) throw Error(ErrorKind::SingularPoint, "coincident points");
  return -kInv2Pi * std::log(r);
}

BemSystem assemble(const std::vector<BemElement>& el, int order) {
  const int n = static_cast<int>(el.size());
  BemSystem sys;
  sys.G.resize(n, n);
  sys.H.resize(n, n);
  for (int i = 0; i < n; ++i) {
    double row = 0;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = norm(el[j].mid - el[i].mid);
      const int m = order * std::max(1, static_cast<int>(std::ceil(4 * el[j].length / d)));
      KernelSums s;
      trapezoid(el[i].mid, el[j].a, el[j].b, el[j].normal, m, false, s);
      sys.G(i, j) = s.g;
      sys.H(i, j) = s.h;
      row += s.h;
    }
    const double h = el[i].length;
    sys.G(i, i) = -h * kInv2Pi * (std::log(0.5 * h) - 1.0);
    // Constant data must reproduce itself; this fixes the jump plus the
    // principal value of the self term.
    sys.H(i, i) = -row;
  }
  return sys;
}

std::vector<Vec3> solve_neumann(BemSystem& sys, const std::vector<Vec3>& dirichlet) {
  const auto n = static_cast<Eigen::Index>(dirichlet.size());
  if (n != sys.G.rows()) throw Error(ErrorKind::InvalidInput, "data size does not match system");
  sys.lu.compute(sys.G);
  g_dense_solves.fetch_add(1);
  if (!(sys.lu.rcond() > 1e-14)) throw Error(ErrorKind::SingularSystem, "single-layer matrix is singular");
  Eigen::MatrixXd f(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) f.row(i) << dirichlet[i].x, dirichlet[i].y, dirichlet[i].z;
  const Eigen::MatrixXd q = sys.lu.solve(sys.H * f);
  if (!q.allFinite()) throw Error(ErrorKind::SingularSystem, "non-finite flux");
  std::vector<Vec3> out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = {q(i, 0), q(i, 1), q(i, 2)};
  return out;
}

std::uint64_t bem_dense_solves() { return g_dense_solves.load(); }

BemPatch::BemPatch(const BoundaryLoop& loop, int elements, int order) : loop_(loop), order_(order) {
  const auto& pts = loop.points;
  if (pts.size() < 3) throw Error(ErrorKind::InvalidInput, "BEM loop needs at least 3 points");
  if (order < 1) throw Error(ErrorKind::InvalidInput, "quadrature order must be positive");
  for (const auto& p : pts)
    if (!is_finite(p)) throw Error(ErrorKind::InvalidInput, "non-finite loop point");
  elements_ = square_elements(elements);

  std::vector<double> cum{0.0};
  for (std::size_t i = 0; i < pts.size(); ++i)
    cum.push_back(cum.back() + norm(pts[(i + 1) % pts.size()] - pts[i]));
  const double total = cum.back();
  if (!(total > 0)) throw Error(ErrorKind::InvalidInput, "BEM loop has zero length");

  for (const auto& e : elements_) {
    // Arc length along the square's boundary (perimeter 4) at the midpoint.
    double sigma;
    if (e.normal.y < 0) sigma = e.mid.x;
    else if (e.normal.x > 0) sigma = 1 + e.mid.y;
    else if (e.normal.y > 0) sigma = 3 - e.mid.x;
    else sigma = 4 - e.mid.y;
    const double s = sigma / 4.0 * total;
    const auto it = std::upper_bound(cum.begin(), cum.end(), s);
    const auto k = static_cast<std::size_t>(std::clamp<long>(it - cum.begin() - 1, 0, static_cast<long>(pts.size()) - 1));
    const double seg = cum[k + 1] - cum[k];
    const double t = seg > 0 ? (s - cum[k]) / seg : 0.0;
    dirichlet_.push_back((1 - t) * pts[k] + t * pts[(k + 1) % pts.size()]);
  }
  solve();
}

std::shared_ptr<BemPatch> BemPatch::from_boundary_function(const std::function<Vec3(Vec2)>& g,
                                                           int elements, int order,
                                                           int loop_samples) {
  std::shared_ptr<BemPatch> p(new BemPatch());
  p->order_ = order;
  p->elements_ = square_elements(elements);
  for (const auto& e : p->elements_) p->dirichlet_.push_back(g(e.mid));
  const Vec2 corners[5] = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};
  const int per_side = std::max(1, loop_samples - 1);
  for (int side = 0; side < 4; ++side)
    for (int k = 0; k < per_side; ++k)
      p->loop_.points.push_back(
          g(corners[side] + (static_cast<double>(k) / per_side) * (corners[side + 1] - corners[side])));
  p->solve();
  return p;
}

void BemPatch::solve() {
  system_ = assemble(elements_, order_);
  neumann_ = solve_neumann(system_, dirichlet_);
}

namespace {

PatchSample evaluate(const BemPatch& patch, Vec2 xi, bool partials) {
  check_inside(xi);
  PatchSample out;
  const auto& el = patch.elements();
  const auto& f = patch.dirichlet();
  const auto& q = patch.neumann();
  for (std::size_t j = 0; j < el.size(); ++j) {
    KernelSums s;
    adaptive(xi, el[j].a, el[j].b, el[j].normal, patch.order(), partials, s, 0);
    out.point += s.g * q[j] - s.h * f[j];
    if (partials) {
      out.du += s.dg.x * q[j] - s.dh.x * f[j];
      out.dv += s.dg.y * q[j] - s.dh.y * f[j];
    }
  }
  return out;
}

}  // namespace

Vec3 eval_surface(const BemPatch& patch, Vec2 xi) { return evaluate(patch, xi, false).point; }

PatchSample eval_partials(const BemPatch& patch, Vec2 xi) { return evaluate(patch, xi, true); }

BemSurface::BemSurface(std::shared_ptr<const BemPatch> patch, ParametricOptions opts)
    : BemSurface(std::move(patch), opts, false, RigidTransform{}) {}

BemSurface::BemSurface(std::shared_ptr<const BemPatch> patch, ParametricOptions opts, bool swap,
                       RigidTransform xf)
    : ParametricSurface(opts), patch_(std::move(patch)), swap_uv_(swap), xf_(xf) {
  if (!patch_) throw Error(ErrorKind::InvalidInput, "null BEM patch");
  for (const auto& p : patch_->loop().points) bounds_.extend(xf_.apply(p));
  init_seed_grid();
}

PatchSample BemSurface::sample(double u, double v) const {
  if (swap_uv_) std::swap(u, v);
  PatchSample s = eval_partials(*patch_, {u, v});
  if (swap_uv_) std::swap(s.du, s.dv);
  return {xf_.apply(s.point), xf_.rotate(s.du), xf_.rotate(s.dv)};
}

std::vector<BoundaryLoop> BemSurface::boundary_loops() const {
  BoundaryLoop loop = patch_->loop();
  for (auto& p : loop.points) p = xf_.apply(p);
  if (swap_uv_) std::reverse(loop.points.begin(), loop.points.end());
  return {std::move(loop)};
}

Aabb BemSurface::solve_bounds() const { return bounds_.inflated(1e-3 * bounds_.diag()); }

std::unique_ptr<Surface> BemSurface::flipped() const {
  return std::unique_ptr<Surface>(new BemSurface(patch_, opts_, !swap_uv_, xf_));
}

std::unique_ptr<Surface> BemSurface::transformed(const RigidTransform& xf) const {
  RigidTransform combined;
  for (int i = 0; i < 3; ++i) {
    const Vec3 col_in{xf.rows[i].x, xf.rows[i].y, xf.rows[i].z};
    // rows of xf.R * xf_.R
    combined.rows[i] = {dot(col_in, Vec3{xf_.rows[0].x, xf_.rows[1].x, xf_.rows[2].x}),
                        dot(col_in, Vec3{xf_.rows[0].y, xf_.rows[1].y, xf_.rows[2].y}),
                        dot(col_in, Vec3{xf_.rows[0].z, xf_.rows[1].z, xf_.rows[2].z})};
  }
  combined.translation = xf.apply(xf_.translation);
  return std::unique_ptr<Surface>(new BemSurface(patch_, opts_, swap_uv_, combined));
}

std::vector<IntersectionRecord> intersect_ray_bem(const BemSurface& patch, const Ray& r) {
  return patch.intersect(r);
}

}  // namespace gwn
