#include <benchmark/benchmark.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gwn/arrangement.hpp"
#include "gwn/bem.hpp"
#include "gwn/bezier.hpp"
#include "gwn/engine.hpp"
#include "gwn/mesh.hpp"
#include "gwn/oracle.hpp"

using namespace gwn;

namespace {

constexpr double kPi = std::numbers::pi;

// Torus grid with the six triangles around vertex 0 removed: many triangles,
// a six-edge boundary.
TriangleMesh punctured_torus(int nu, int nv) {
  TriangleMesh m;
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const double a = 2 * kPi * i / nu, b = 2 * kPi * j / nv;
      const double r = 1.0 + 0.35 * std::cos(b);
      m.vertices.push_back({r * std::cos(a), r * std::sin(a), 0.35 * std::sin(b)});
    }
  auto id = [&](int i, int j) { return ((i + nu) % nu) * nv + (j + nv) % nv; };
  for (int i = 0; i < nu; ++i)
    for (int j = 0; j < nv; ++j) {
      const std::array<int, 3> t1{id(i, j), id(i + 1, j), id(i + 1, j + 1)};
      const std::array<int, 3> t2{id(i, j), id(i + 1, j + 1), id(i, j + 1)};
      for (const auto& t : {t1, t2})
        if (t[0] != 0 && t[1] != 0 && t[2] != 0) m.triangles.push_back(t);
    }
  return m;
}

BezierTrianglePatch wavy_bezier() {
  BezierTrianglePatch p = BezierTrianglePatch::identity();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (auto& c : p.control) c.z += u(rng);
  return p;
}

Scene bezier_scene(int segments) {
  ParametricOptions o;
  o.boundary_segments = segments;
  return Scene({std::make_shared<BezierTriangleSurface>(wavy_bezier(), o)});
}

Scene torus_scene() { return Scene({std::make_shared<MeshSurface>(punctured_torus(75, 74))}); }

void BM_QueryMesh(benchmark::State& state) {
  const Scene s = torus_scene();
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.4, 1.4);
  for (auto _ : state) benchmark::DoNotOptimize(winding_number(s, {u(rng), u(rng), 0.5 * u(rng)}));
}
BENCHMARK(BM_QueryMesh);

void BM_QueryBezier(benchmark::State& state) {
  const Scene s = bezier_scene(static_cast<int>(state.range(0)));
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (auto _ : state) benchmark::DoNotOptimize(winding_number(s, {u(rng), u(rng), u(rng) - 0.5}));
}
BENCHMARK(BM_QueryBezier)->Arg(200)->Arg(800)->Arg(1900)->Unit(benchmark::kMillisecond);

void BM_SliceMesh(benchmark::State& state) {
  const Scene s = torus_scene();
  const int n = static_cast<int>(state.range(0));
  const SliceSpec spec{{-1.4, -1.4, 0.01}, {2.8, 0, 0}, {0, 2.8, 0}, n, n};
  for (auto _ : state) benchmark::DoNotOptimize(slice(s, spec, {1}));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_SliceMesh)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_VoxelizeMesh(benchmark::State& state) {
  const Scene s = torus_scene();
  const int n = static_cast<int>(state.range(0));
  const VoxelSpec spec{s.bounds().inflated(0.1), n, n, n, 0.5};
  for (auto _ : state) benchmark::DoNotOptimize(voxelize(s, spec, {1}));
  state.SetItemsProcessed(state.iterations() * n * n * n);
}
BENCHMARK(BM_VoxelizeMesh)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BuildArrangement(benchmark::State& state) {
  const Scene s = bezier_scene(static_cast<int>(state.range(0)));
  const auto loops = s.loops();
  for (auto _ : state) benchmark::DoNotOptimize(build_arrangement({0.3, 0.3, 0.4}, loops, {}, false));
}
BENCHMARK(BM_BuildArrangement)->Arg(200)->Arg(1900)->Unit(benchmark::kMicrosecond);

void BM_DirectOracleMesh(benchmark::State& state) {
  const TriangleMesh m = punctured_torus(75, 74);
  for (auto _ : state) benchmark::DoNotOptimize(direct_winding_mesh(m, {0.3, 0.2, 0.1}));
}
BENCHMARK(BM_DirectOracleMesh)->Unit(benchmark::kMicrosecond);

Vec3 harmonic_data(Vec2 p) {
  return {p.x, p.y, std::exp(p.x - 1) * std::sin(p.y) - std::exp(p.x) * std::cos(p.y)};
}

void BM_BemSolve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(BemPatch::from_boundary_function(harmonic_data, n));
}
BENCHMARK(BM_BemSolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_BemEvalPartials(benchmark::State& state) {
  const auto patch = BemPatch::from_boundary_function(harmonic_data, static_cast<int>(state.range(0)));
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (auto _ : state) benchmark::DoNotOptimize(eval_partials(*patch, {u(rng), u(rng)}));
}
BENCHMARK(BM_BemEvalPartials)->Arg(200)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
