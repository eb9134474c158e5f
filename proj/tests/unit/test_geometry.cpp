#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gwn/errors.hpp"
#include "gwn/geometry.hpp"
#include "gwn/transform.hpp"

using namespace gwn;

namespace {

constexpr double kPi = std::numbers::pi;

UnitVec3 U(double x, double y, double z) { return UnitVec3::normalize({x, y, z}); }

void expect_near(const Vec3& a, const Vec3& b, double tol) {
  EXPECT_NEAR(a.x, b.x, tol);
  EXPECT_NEAR(a.y, b.y, tol);
  EXPECT_NEAR(a.z, b.z, tol);
}

UnitVec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return UnitVec3::normalize({g(rng), g(rng), g(rng)});
}

}  // namespace

TEST(ProjectToSphere, NormalizesOffset) {
  expect_near(project_to_sphere({0, 0, 0}, {2, 0, 0}), {1, 0, 0}, 1e-15);
  expect_near(project_to_sphere({1, 1, 1}, {1, 1, 3}), {0, 0, 1}, 1e-15);
}

TEST(ProjectToSphere, CoincidentPointIsDegenerate) {
  try {
    project_to_sphere({0, 0, 0}, {0, 0, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DegenerateProjection);
  }
}

TEST(ProjectToSphere, AlwaysUnitLength) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e3, 1e3);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 c{u(rng), u(rng), u(rng)}, x{u(rng), u(rng), u(rng)};
    EXPECT_NEAR(norm(project_to_sphere(c, x).vec()), 1.0, 1e-12);
  }
}

TEST(GreatArc, LengthAndMidpoint) {
  const GreatArc a = GreatArc::between(U(1, 0, 0), U(0, 1, 0));
  EXPECT_NEAR(a.length(), kPi / 2, 1e-15);
  expect_near(a.midpoint(), Vec3{1, 1, 0} / std::sqrt(2.0), 1e-15);
  expect_near(a.pole, {0, 0, 1}, 1e-15);
}

TEST(ArcIntersections, OrthogonalCirclesMeetOnce) {
  const GreatArc equator = GreatArc::with_pole(U(1, 0, 0), U(-1, 0, 0), U(0, 0, 1));
  const GreatArc meridian = GreatArc::with_pole(U(0, 0, 1), U(0, 0, -1), U(-1, 0, 0));
  const auto pts = arc_intersections(equator, meridian);
  ASSERT_EQ(pts.size(), 1u);
  expect_near(pts[0], {0, 1, 0}, 1e-12);
}

TEST(ArcIntersections, DisjointShortArcs) {
  const GreatArc a = GreatArc::between(U(1, 0, 0.1), U(1, 0.2, 0.1));
  const GreatArc b = GreatArc::between(U(1, 0, -0.1), U(1, 0.2, -0.3));
  EXPECT_TRUE(arc_intersections(a, b).empty());
}

TEST(ArcIntersections, ReversedArcOverlaps) {
  const GreatArc a = GreatArc::between(U(1, 0, 0), U(0, 1, 0));
  const GreatArc b = GreatArc::between(U(0, 1, 0), U(1, 0, 0));
  try {
    arc_intersections(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OverlappingArcs);
  }
}

TEST(ArcIntersections, SharedEndpointCountsOnce) {
  // b starts where a ends; the crossing belongs to b only, so the pair reports nothing.
  const GreatArc a = GreatArc::between(U(1, 0, 0), U(0, 1, 0));
  const GreatArc b = GreatArc::between(U(0, 1, 0), U(0, 0, 1));
  EXPECT_TRUE(arc_intersections(a, b).empty());
}

TEST(ArcIntersections, SymmetricAndOnBothPlanes) {
  std::mt19937_64 rng(7);
  int crossings = 0;
  for (int i = 0; i < 2000; ++i) {
    const UnitVec3 a0 = random_unit(rng), a1 = random_unit(rng);
    const UnitVec3 b0 = random_unit(rng), b1 = random_unit(rng);
    if (dot(a0.vec(), a1.vec()) < -0.9 || dot(b0.vec(), b1.vec()) < -0.9) continue;
    const GreatArc a = GreatArc::between(a0, a1), b = GreatArc::between(b0, b1);
    const auto ab = arc_intersections(a, b);
    const auto ba = arc_intersections(b, a);
    ASSERT_EQ(ab.size(), ba.size());
    for (std::size_t k = 0; k < ab.size(); ++k) {
      expect_near(ab[k], ba[k], 1e-10);
      EXPECT_LT(std::abs(dot(ab[k].vec(), a.pole.vec())), 1e-9);
      EXPECT_LT(std::abs(dot(ab[k].vec(), b.pole.vec())), 1e-9);
    }
    crossings += static_cast<int>(ab.size());
  }
  EXPECT_GT(crossings, 50);
}

TEST(RayAabbClip, AxisRay) {
  const Aabb box{{0, 0, 0}, {1, 1, 1}};
  const auto hit = ray_aabb_clip({{-2, 0.5, 0.5}, U(1, 0, 0)}, box);
  ASSERT_TRUE(hit);
  EXPECT_DOUBLE_EQ(hit->t_min, 2);
  EXPECT_DOUBLE_EQ(hit->t_max, 3);
}

TEST(RayAabbClip, Miss) {
  EXPECT_FALSE(ray_aabb_clip({{-2, 5, 0}, U(1, 0, 0)}, Aabb{{0, 0, 0}, {1, 1, 1}}));
}

TEST(RayAabbClip, OriginInside) {
  const auto hit = ray_aabb_clip({{0.5, 0.5, 0.5}, U(0, 0, 1)}, Aabb{{0, 0, 0}, {1, 1, 1}});
  ASSERT_TRUE(hit);
  EXPECT_DOUBLE_EQ(hit->t_min, 0);
  EXPECT_DOUBLE_EQ(hit->t_max, 0.5);
}

TEST(RayAabbClip, ClippedPointsStayInBox) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  const Aabb box{{-1, -0.5, 0}, {1, 2, 0.25}};
  for (int i = 0; i < 1000; ++i) {
    const Ray r{{u(rng), u(rng), u(rng)}, random_unit(rng)};
    const auto hit = ray_aabb_clip(r, box);
    if (!hit) continue;
    for (double s : {0.0, 0.25, 0.5, 0.75, 1.0})
      EXPECT_TRUE(box.contains(r.at(hit->t_min + s * (hit->t_max - hit->t_min)), 1e-9));
  }
}

TEST(RigidTransform, AxisAngleRotatesAndPreservesLength) {
  const auto xf = RigidTransform::axis_angle({0, 0, 1}, kPi / 2, {1, 2, 3});
  expect_near(xf.apply({1, 0, 0}), {1, 3, 3}, 1e-15);
  std::mt19937_64 rng(5);
  const auto r = RigidTransform::axis_angle(random_unit(rng), 1.234);
  const Vec3 v{0.3, -2, 5};
  EXPECT_NEAR(norm(r.rotate(v)), norm(v), 1e-13);
}

TEST(AngleBetween, RobustAtExtremes) {
  EXPECT_NEAR(angle_between({1, 0, 0}, {1, 1e-9, 0}), 1e-9, 1e-20);
  EXPECT_NEAR(angle_between({1, 0, 0}, {-1, 1e-9, 0}), kPi - 1e-9, 1e-15);
}
