#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gwn/bem.hpp"
#include "gwn/errors.hpp"
#include "gwn/mesh.hpp"
#include "gwn/oracle.hpp"

using namespace gwn;

namespace {

constexpr double kPi = std::numbers::pi;

double saddle(Vec2 p) { return p.x * p.x - p.y * p.y; }

std::shared_ptr<BemPatch> height_patch(double (*h)(Vec2), int elements) {
  return BemPatch::from_boundary_function([h](Vec2 p) { return Vec3{p.x, p.y, h(p)}; }, elements);
}

double interior_error(const BemPatch& patch, double (*h)(Vec2), double margin = 0.1) {
  double err = 0;
  for (int i = 0; i <= 8; ++i)
    for (int j = 0; j <= 8; ++j) {
      const Vec2 xi{margin + (1 - 2 * margin) * i / 8, margin + (1 - 2 * margin) * j / 8};
      err = std::max(err, std::abs(eval_surface(patch, xi).z - h(xi)));
    }
  return err;
}

BoundaryLoop square_loop(int per_side, double z = 0) {
  BoundaryLoop l;
  const Vec3 c[5] = {{0, 0, z}, {1, 0, z}, {1, 1, z}, {0, 1, z}, {0, 0, z}};
  for (int s = 0; s < 4; ++s)
    for (int k = 0; k < per_side; ++k) l.points.push_back(c[s] + (c[s + 1] - c[s]) * (double(k) / per_side));
  return l;
}

}  // namespace

TEST(FundamentalSolution, Values) {
  EXPECT_NEAR(fundamental_solution({0, 0}, {1, 0}), 0.0, 1e-16);
  EXPECT_NEAR(fundamental_solution({0, 0}, {std::exp(-1.0), 0}), 1 / (2 * kPi), 1e-15);
  try {
    fundamental_solution({0.3, 0.3}, {0.3, 0.3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SingularPoint);
  }
}

TEST(SquareElements, TileTheBoundary) {
  const auto el = square_elements(66);
  ASSERT_EQ(el.size(), 66u);
  double total = 0;
  for (std::size_t k = 0; k < el.size(); ++k) {
    total += el[k].length;
    EXPECT_EQ(el[k].b.x, el[(k + 1) % el.size()].a.x);
    EXPECT_EQ(el[k].b.y, el[(k + 1) % el.size()].a.y);
  }
  EXPECT_NEAR(total, 4.0, 1e-14);
  EXPECT_THROW(square_elements(6), Error);
}

TEST(Assemble, SingleLayerSymmetryOnEachSide) {
  // With uniform elements the collocation G is symmetric between elements of
  // the same side; across a corner the trapezoid rule breaks the symmetry.
  const auto el = square_elements(64);
  const BemSystem sys = assemble(el);
  double asym = 0;
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j)
      if (i / 16 == j / 16) asym = std::max(asym, std::abs(sys.G(i, j) - sys.G(j, i)));
  EXPECT_LT(asym, 1e-6);
}

TEST(SolveNeumann, ConstantDataHasNoFlux) {
  auto patch = BemPatch::from_boundary_function([](Vec2) { return Vec3{0.3, -1.2, 2.0}; }, 64);
  for (const auto& q : patch->neumann()) {
    EXPECT_LT(std::abs(q.x), 1e-8);
    EXPECT_LT(std::abs(q.y), 1e-8);
    EXPECT_LT(std::abs(q.z), 1e-8);
  }
  // The interior value carries the trapezoid error of the double layer.
  const Vec3 v = eval_surface(*patch, {0.4, 0.7});
  EXPECT_NEAR(v.x, 0.3, 1e-5);
  EXPECT_NEAR(v.y, -1.2, 1e-5);
  EXPECT_NEAR(v.z, 2.0, 1e-5);
  const PatchSample s = eval_partials(*patch, {0.4, 0.7});
  EXPECT_LT(norm(s.du), 1e-4);
  EXPECT_LT(norm(s.dv), 1e-4);
}

TEST(SolveNeumann, LinearDataFluxIsNormalComponent) {
  auto patch = BemPatch::from_boundary_function([](Vec2 p) { return Vec3{p.x, 0, 0}; }, 128);
  double err_all = 0, err_away = 0;
  const auto& el = patch->elements();
  for (std::size_t k = 0; k < el.size(); ++k) {
    const double e = std::abs(patch->neumann()[k].x - el[k].normal.x);
    err_all = std::max(err_all, e);
    const std::size_t pos = k % 32;
    if (pos >= 2 && pos < 30) err_away = std::max(err_away, e);
  }
  EXPECT_LT(err_away, 1e-2);
  RecordProperty("max_flux_error_all_elements", std::to_string(err_all));
}

TEST(SolveNeumann, SaddleCenterValue) {
  auto patch = height_patch(saddle, 200);
  EXPECT_NEAR(eval_surface(*patch, {0.5, 0.5}).z, 0.0, 1e-3);
}

TEST(SolveNeumann, OneFactorizationPerPatch) {
  const auto before = bem_dense_solves();
  auto patch = height_patch(saddle, 64);
  EXPECT_EQ(bem_dense_solves(), before + 1);
  const BemSurface surf(patch);
  const auto flipped = surf.flipped();
  const auto moved = surf.transformed(RigidTransform::axis_angle({1, 0, 0}, 0.3, {1, 2, 3}));
  for (int k = 0; k < 20; ++k) {
    eval_surface(*patch, {0.1 + 0.04 * k, 0.5});
    surf.intersect({{0.1 + 0.04 * k, 0.5, 2}, UnitVec3::normalize({0, 0, -1})});
  }
  EXPECT_EQ(bem_dense_solves(), before + 1);
}

TEST(EvalSurface, HarmonicReproductionConverges) {
  double prev = INFINITY;
  for (int n : {64, 128, 256}) {
    const double err = interior_error(*height_patch(saddle, n), saddle, 0.05);
    EXPECT_LT(err, prev);
    if (prev < INFINITY) {
      EXPECT_LT(err, 0.5 * prev);
    }
    prev = err;
  }
  EXPECT_LT(interior_error(*height_patch(saddle, 200), saddle), 1e-3);
}

TEST(EvalSurface, PlanarLoopStaysPlanar) {
  const BemPatch patch(square_loop(30), 120);
  for (auto xi : {Vec2{0.5, 0.5}, Vec2{0.05, 0.9}, Vec2{0.99, 0.01}}) {
    EXPECT_NEAR(eval_surface(patch, xi).z, 0.0, 1e-9);
    const PatchSample s = eval_partials(patch, xi);
    EXPECT_NEAR(s.du.z, 0.0, 1e-9);
    EXPECT_NEAR(s.dv.z, 0.0, 1e-9);
    EXPECT_NEAR(std::abs(UnitVec3::normalize(cross(s.du, s.dv)).vec().z), 1.0, 1e-9);
  }
}

TEST(EvalSurface, RejectsPointsOutsideTheSquare) {
  auto patch = height_patch(saddle, 64);
  for (auto xi : {Vec2{0, 0.5}, Vec2{1.2, 0.5}, Vec2{0.5, -0.1}}) {
    try {
      eval_surface(*patch, xi);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::OutsideDomain);
    }
  }
}

TEST(EvalSurface, MaximumPrinciple) {
  auto patch = height_patch(saddle, 200);
  for (int i = 1; i < 20; ++i)
    for (int j = 1; j < 20; ++j) {
      const double z = eval_surface(*patch, {i / 20.0, j / 20.0}).z;
      EXPECT_LE(z, 1.0 + 1e-3);
      EXPECT_GE(z, -1.0 - 1e-3);
    }
}

TEST(EvalPartials, MatchFiniteDifferences) {
  auto patch = BemPatch::from_boundary_function(
      [](Vec2 p) {
        return Vec3{p.x + 0.1 * std::sin(3 * p.y), p.y, std::exp(p.x - 1) * std::sin(p.y) - std::exp(p.x) * std::cos(p.y)};
      },
      200);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  const double h = 1e-5;
  for (int k = 0; k < 50; ++k) {
    const Vec2 xi{u(rng), u(rng)};
    const PatchSample s = eval_partials(*patch, xi);
    const Vec3 fu = (eval_surface(*patch, {xi.x + h, xi.y}) - eval_surface(*patch, {xi.x - h, xi.y})) / (2 * h);
    const Vec3 fv = (eval_surface(*patch, {xi.x, xi.y + h}) - eval_surface(*patch, {xi.x, xi.y - h})) / (2 * h);
    EXPECT_LT(norm(s.du - fu) / norm(fu), 1e-5);
    EXPECT_LT(norm(s.dv - fv) / norm(fv), 1e-5);
  }
}

TEST(BemIntersect, FlatSquareVerticalRay) {
  const BemSurface surf(std::make_shared<const BemPatch>(square_loop(20), 80));
  const auto hits = surf.intersect({{0.5, 0.5, 1.5}, UnitVec3::normalize({0, 0, -1})});
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_NEAR(hits[0].t, 1.5, 1e-8);
  EXPECT_EQ(hits[0].sign, -1);
}

TEST(BemIntersect, MissingTheBoxCostsNoSolves) {
  const BemSurface surf(std::make_shared<const BemPatch>(square_loop(20), 80));
  const auto before = surf.solver_calls();
  EXPECT_TRUE(intersect_ray_bem(surf, {{5, 5, 1}, UnitVec3::normalize({0, 0, -1})}).empty());
  EXPECT_EQ(surf.solver_calls(), before);
}

TEST(BemIntersect, AgreesWithDenseMeshRayCast) {
  auto patch = BemPatch::from_boundary_function(
      [](Vec2 p) { return Vec3{p.x, p.y, std::exp(p.x - 1) * std::sin(p.y) - std::exp(p.x) * std::cos(p.y)}; }, 200);
  const BemSurface surf(patch);
  const MeshSurface dense = tessellate(surf, 96);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.1, 0.9);
  for (int k = 0; k < 10; ++k) {
    const Ray r{{u(rng), u(rng), 3}, UnitVec3::normalize({0.05, -0.03, -1})};
    const auto a = surf.intersect(r);
    const auto b = dense.intersect(r);
    ASSERT_EQ(a.size(), 1u);
    ASSERT_EQ(b.size(), 1u);
    EXPECT_NEAR(a[0].t, b[0].t, 1e-3);
    EXPECT_EQ(a[0].sign, b[0].sign);
  }
}

TEST(BemSurface, FlipAndTransformShareTheSolve) {
  auto patch = height_patch(saddle, 64);
  const BemSurface surf(patch);
  const auto flipped = surf.flipped();
  const Ray r{{0.4, 0.6, 2}, UnitVec3::normalize({0, 0, -1})};
  const auto a = surf.intersect(r), b = flipped->intersect(r);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(a[0].t, b[0].t, 1e-9);
  EXPECT_EQ(a[0].sign, -b[0].sign);

  const auto xf = RigidTransform::axis_angle({0, 1, 0}, 0.8, {0.5, -1, 2});
  const auto moved = surf.transformed(xf);
  const Ray mr{xf.apply(r.origin), UnitVec3::normalize(xf.rotate(r.direction.vec()))};
  const auto c = moved->intersect(mr);
  ASSERT_EQ(c.size(), 1u);
  EXPECT_NEAR(c[0].t, a[0].t, 1e-9);
}
