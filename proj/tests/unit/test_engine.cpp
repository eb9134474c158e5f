#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "gwn/bezier.hpp"
#include "gwn/engine.hpp"
#include "gwn/errors.hpp"
#include "gwn/oracle.hpp"
#include "shapes.hpp"

using namespace gwn;
using namespace gwn::testing;

namespace {

Scene bezier_scene(std::uint64_t seed, int segments = 200) {
  std::mt19937_64 rng(seed);
  ParametricOptions o;
  o.boundary_segments = segments;
  return Scene({std::make_shared<BezierTriangleSurface>(random_bezier(rng), o)});
}

double axial_disk(double d) { return 0.5 * (1 - d / std::sqrt(d * d + 1)); }

}  // namespace

TEST(WindingNumber, CubeInsideAndOutside) {
  const Scene s = mesh_scene(cube());
  EXPECT_DOUBLE_EQ(winding_number(s, {0.5, 0.5, 0.5}), 1.0);
  EXPECT_DOUBLE_EQ(winding_number(s, {5, -3, 2}), 0.0);
}

TEST(WindingNumber, DiskAxialFormulaAndSign) {
  // Seen from the side the normal points away from, the disk counts positively.
  const Scene down = mesh_scene(disk(2000, 1.0, false));
  const Scene up = mesh_scene(disk(2000, 1.0, true));
  for (double d : {0.25, 1.0, 3.0}) {
    EXPECT_NEAR(winding_number(down, {0, 0, d}), axial_disk(d), 1e-6);
    EXPECT_NEAR(winding_number(up, {0, 0, d}), -axial_disk(d), 1e-6);
  }
}

TEST(WindingNumber, OnSurfaceIsJitteredAway) {
  const Scene s = mesh_scene(cube());
  QueryStats stats;
  const double w = winding_number(s, {0.5, 0.5, 1.0}, &stats);
  EXPECT_TRUE(std::abs(w) < 1e-9 || std::abs(w - 1) < 1e-9);
  EXPECT_GE(stats.jitters.load(), 1u);
}

TEST(WindingNumber, OnBoundaryIsJitteredAway) {
  const Scene s = mesh_scene(disk(32, 1.0, false));
  QueryStats stats;
  const double w = winding_number(s, {1.0, 0.0, 0.0}, &stats);
  EXPECT_TRUE(std::isfinite(w));
  EXPECT_GE(stats.jitters.load(), 1u);
}

TEST(WindingNumber, EmptySceneIsZero) {
  EXPECT_EQ(winding_number(Scene{}, {1, 2, 3}), 0.0);
}

TEST(WindingNumber, AntisymmetryAndRigidInvariance) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    const Scene s = bezier_scene(100 + trial);
    const Scene f = s.flipped();
    const RigidTransform xf = random_rigid(rng);
    const Scene moved = s.transformed(xf);
    for (int k = 0; k < 10; ++k) {
      const Vec3 p = uniform_point(rng, s.bounds().inflated(0.5));
      const double w = winding_number(s, p);
      EXPECT_NEAR(winding_number(f, p), -w, 1e-9);
      EXPECT_NEAR(winding_number(moved, xf.apply(p)), w, 1e-9);
    }
  }
}

TEST(WindingNumber, AdditiveOverDisjointParts) {
  TriangleMesh a = cube(), b = cube_without_top({2, 0, 0}, {3, 1, 1});
  const Scene sa = mesh_scene(a), sb = mesh_scene(b);
  const Scene both({mesh_patch(a), mesh_patch(b)});
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const Vec3 p = uniform_point(rng, Aabb{{-1, -1, -1}, {4, 2, 2}});
    EXPECT_NEAR(winding_number(both, p), winding_number(sa, p) + winding_number(sb, p), 1e-12);
  }
}

TEST(AlongRay, CubeWalls) {
  const Scene s = mesh_scene(cube());
  const Ray r{{-1, 0.5, 0.5}, UnitVec3::normalize({1, 0, 0})};
  const auto w = winding_numbers_along_ray(s, r, {0.5, 1.5, 2.5});
  ASSERT_EQ(w.size(), 3u);
  EXPECT_DOUBLE_EQ(w[0], 0);
  EXPECT_DOUBLE_EQ(w[1], 1);
  EXPECT_DOUBLE_EQ(w[2], 0);
  EXPECT_TRUE(winding_numbers_along_ray(s, r, {}).empty());
}

TEST(AlongRay, MatchesPerPointOnRandomPatch) {
  const Scene s = bezier_scene(42);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  const Ray r{{-0.5, 0.2, -0.3}, UnitVec3::normalize({1 + 0.2 * g(rng), 0.3 * g(rng), 0.4 + 0.2 * g(rng)})};
  std::vector<double> ts;
  for (int k = 0; k < 100; ++k) ts.push_back(0.02 * k + 0.001);
  QueryStats stats;
  const auto w = winding_numbers_along_ray(s, r, ts, &stats);
  EXPECT_EQ(stats.ray_batches.load(), 1u);
  for (int k = 0; k < 100; ++k) EXPECT_NEAR(w[k], winding_number(s, r.at(ts[k])), 1e-9);
}

TEST(Slice, CountsMinSideRays) {
  const Scene s = mesh_scene(cube());
  QueryStats stats;
  SliceSpec spec{{-0.5, -0.5, 0.5}, {2, 0, 0}, {0, 2, 0}, 3, 5};
  slice(s, spec, {1, &stats});
  EXPECT_EQ(stats.ray_batches.load(), 3u);
  spec.width = 7;
  spec.height = 2;
  QueryStats stats2;
  slice(s, spec, {1, &stats2});
  EXPECT_EQ(stats2.ray_batches.load(), 2u);
}

TEST(Slice, CubeCrossSectionIsBinary) {
  const Scene s = mesh_scene(cube());
  const SliceSpec spec{{-0.5, -0.5, 0.5}, {2, 0, 0}, {0, 2, 0}, 20, 20};
  const Grid2 img = slice(s, spec);
  for (int j = 0; j < 20; ++j)
    for (int i = 0; i < 20; ++i) {
      const double x = -0.5 + 2 * (i + 0.5) / 20, y = -0.5 + 2 * (j + 0.5) / 20;
      const bool inside = x > 0 && x < 1 && y > 0 && y < 1;
      EXPECT_NEAR(img.at(i, j), inside ? 1.0 : 0.0, 1e-12);
    }
}

TEST(Slice, OutsideSceneIsZero) {
  const Scene s = mesh_scene(cube());
  const Grid2 img = slice(s, {{5, 5, 5}, {1, 0, 0}, {0, 1, 0}, 4, 4});
  for (double w : img.values) EXPECT_EQ(w, 0.0);
}

TEST(Slice, MatchesPerPixel) {
  const Scene s = bezier_scene(7);
  const SliceSpec spec{{-0.2, 0.3, -0.6}, {1.4, 0, 0}, {0, 0, 1.6}, 32, 32};
  const Grid2 img = slice(s, spec);
  for (int j = 0; j < 32; ++j)
    for (int i = 0; i < 32; ++i) {
      const Vec3 p = spec.origin + spec.u * ((i + 0.5) / 32) + spec.v * ((j + 0.5) / 32);
      EXPECT_NEAR(img.at(i, j), winding_number(s, p), 1e-9);
    }
}

TEST(Slice, DeterministicAcrossThreadCounts) {
  const Scene s = bezier_scene(11);
  const SliceSpec spec{{-0.2, 0.3, -0.6}, {1.4, 0, 0}, {0, 0, 1.6}, 12, 9};
  EXPECT_EQ(slice(s, spec, {1}).values, slice(s, spec, {4}).values);
}

TEST(Voxelize, UnitCube) {
  const Scene s = mesh_scene(cube());
  QueryStats stats;
  const auto r = voxelize(s, {Aabb{{0, 0, 0}, {1, 1, 1}}, 2, 2, 2, 0.5}, {0, &stats});
  int occupied = 0;
  for (auto o : r.occupied) occupied += o;
  EXPECT_EQ(occupied, 8);
  EXPECT_EQ(stats.ray_batches.load(), 4u);
  const auto high = voxelize(s, {Aabb{{0, 0, 0}, {1, 1, 1}}, 2, 2, 2, 1.5});
  for (auto o : high.occupied) EXPECT_EQ(o, 0);
}

TEST(Voxelize, OutsideBoxIsEmpty) {
  const Scene s = mesh_scene(cube());
  const auto r = voxelize(s, {Aabb{{2, 2, 2}, {3, 3, 3}}, 4, 4, 4, 0.5});
  for (auto o : r.occupied) EXPECT_EQ(o, 0);
}

TEST(Voxelize, RaysFollowTheLongestAxis) {
  const Scene s = mesh_scene(cube());
  QueryStats stats;
  const auto r = voxelize(s, {Aabb{{-0.5, -0.5, -0.5}, {1.5, 1.5, 1.5}}, 3, 5, 8, 0.5}, {0, &stats});
  EXPECT_EQ(r.ray_axis, 2);
  EXPECT_EQ(stats.ray_batches.load(), 15u);
  for (int k = 0; k < 8; ++k)
    for (int j = 0; j < 5; ++j)
      for (int i = 0; i < 3; ++i) {
        const Vec3 c{-0.5 + 2 * (i + 0.5) / 3, -0.5 + 2 * (j + 0.5) / 5, -0.5 + 2 * (k + 0.5) / 8};
        EXPECT_NEAR(r.winding.values[r.winding.index(i, j, k)], winding_number(s, c), 1e-6);
      }
}

TEST(Threads, EnvironmentOverride) {
  ::setenv("WN_THREADS", "3", 1);
  EXPECT_EQ(resolve_threads(8), 3);
  ::unsetenv("WN_THREADS");
  EXPECT_EQ(resolve_threads(5), 5);
  EXPECT_GE(resolve_threads(0), 1);
}

TEST(Threads, ParallelForPropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, 3, [](int i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}
