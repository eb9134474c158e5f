// Acceptance suite: prints one PASS/FAIL line per criterion and exits
// non-zero when a gating criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "frozen_slice.hpp"
#include "gwn/bem.hpp"
#include "gwn/bezier.hpp"
#include "gwn/chi.hpp"
#include "gwn/coons.hpp"
#include "gwn/engine.hpp"
#include "gwn/errors.hpp"
#include "gwn/oracle.hpp"
#include "shapes.hpp"

using namespace gwn;
using namespace gwn::testing;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Vec3 closest_on_triangle(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return a;
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return b;
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return a + ab * (d1 / (d1 - d3));
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return c;
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return a + ac * (d2 / (d2 - d6));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0) return b + (c - b) * ((d4 - d3) / ((d4 - d3) + (d5 - d6)));
  const double denom = 1 / (va + vb + vc);
  return a + ab * (vb * denom) + ac * (vc * denom);
}

double mesh_distance(const TriangleMesh& m, const Vec3& p) {
  double best = INFINITY;
  for (const auto& t : m.triangles)
    best = std::min(best, norm(p - closest_on_triangle(p, m.vertices[t[0]], m.vertices[t[1]], m.vertices[t[2]])));
  return best;
}

Aabb mesh_bounds(const TriangleMesh& m) { return Aabb::of(m.vertices); }

std::shared_ptr<const Surface> bezier(const BezierTrianglePatch& p, int segments = 0) {
  ParametricOptions o;
  o.boundary_segments = segments;
  return std::make_shared<BezierTriangleSurface>(p, o);
}

// 1. One-shot vs direct solid-angle sum on open meshes.
Outcome mesh_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::pair<const char*, TriangleMesh>> meshes{
      {"open cube", cube_without_top()}, {"cap", displaced_cap(20, 50)}, {"strip", strip(27)}};
  std::mt19937_64 rng(101);
  double worst = 0;
  std::string sizes;
  for (const auto& [name, mesh] : meshes) {
    const Scene s = mesh_scene(mesh);
    std::size_t boundary = 0;
    for (const auto& l : s.loops()) boundary += l.points.size();
    sizes += fmt(" %s:%zut/%zue", name, mesh.triangles.size(), boundary);
    const Aabb box = mesh_bounds(mesh).inflated(0.25 * mesh_bounds(mesh).diag());
    int n = 0;
    while (n < 1000) {
      const Vec3 p = uniform_point(rng, box);
      if (mesh_distance(mesh, p) <= 1e-3) continue;
      worst = std::max(worst, std::abs(winding_number(s, p) - direct_winding_mesh(mesh, p)));
      ++n;
    }
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-8 && secs < 30, fmt("max diff %.3e over 3000 queries in %.1f s;", worst, secs) + sizes};
}

// 2. Closed meshes give integers that match the solid's classification.
Outcome watertight() {
  std::mt19937_64 rng(102);
  int mismatches = 0;
  double worst = 0;
  const auto run = [&](const Scene& s, const Aabb& box, const std::function<bool(const Vec3&)>& inside) {
    for (int k = 0; k < 1000; ++k) {
      const Vec3 p = uniform_point(rng, box);
      const double w = winding_number(s, p);
      worst = std::max(worst, std::abs(w - std::round(w)));
      if (std::lround(w) != (inside(p) ? 1 : 0)) ++mismatches;
    }
  };
  run(mesh_scene(cube()), Aabb{{-0.5, -0.5, -0.5}, {1.5, 1.5, 1.5}}, [](const Vec3& p) {
    return p.x > 0 && p.x < 1 && p.y > 0 && p.y < 1 && p.z > 0 && p.z < 1;
  });
  const TriangleMesh ico = icosphere(3);
  run(mesh_scene(ico), Aabb{{-1.5, -1.5, -1.5}, {1.5, 1.5, 1.5}}, [&ico](const Vec3& p) {
    for (const auto& t : ico.triangles) {
      const Vec3 a = ico.vertices[t[0]];
      if (dot(cross(ico.vertices[t[1]] - a, ico.vertices[t[2]] - a), p - a) > 0) return false;
    }
    return true;
  });
  return {worst < 1e-9 && mismatches == 0,
          fmt("max distance to integer %.3e, %d classification mismatches over 2000 queries", worst, mismatches)};
}

// 3. Disk on the axis. The disk normal points away from the query side.
Outcome analytic_disk() {
  const Scene s = mesh_scene(disk(2000, 1.0, false));
  double worst = 0;
  for (int k = 0; k < 20; ++k) {
    const double d = 0.1 + (5.0 - 0.1) * k / 19;
    worst = std::max(worst, std::abs(winding_number(s, {0, 0, d}) - 0.5 * (1 - d / std::sqrt(d * d + 1))));
  }
  return {worst < 1e-6, fmt("max error %.3e over 20 heights", worst)};
}

// 4. Unit square seen from its apex at height 0.5.
Outcome analytic_square() {
  ParametricOptions o;
  o.boundary_segments = 2000;
  const CoonsPatch sq{BezierCurve::line({0, 0, 0}, {1, 0, 0}), BezierCurve::line({0, 1, 0}, {1, 1, 0}),
                      BezierCurve::line({0, 0, 0}, {0, 1, 0}), BezierCurve::line({1, 0, 0}, {1, 1, 0})};
  const Scene s = Scene({std::make_shared<CoonsSurface>(sq, o)}).flipped();
  const double w = winding_number(s, {0.5, 0.5, 0.5});
  return {std::abs(w - 1.0 / 6) < 1e-6, fmt("w = %.12f, error %.3e", w, std::abs(w - 1.0 / 6))};
}

// 5. Error against the frozen 1024^2 oracle shrinks with boundary refinement.
Outcome convergence() {
  const FrozenSlice f = load_frozen_slice(GWN_TEST_DATA_DIR "/bezier_slice.json");
  const auto oracle = read_oracle_csv(GWN_TEST_DATA_DIR "/bezier_slice_oracle.csv", f.spec);

  // Spot-check the stored oracle against a fresh tessellation.
  const TriangleMesh dense = tessellate_mesh(BezierTriangleSurface(f.patch), f.oracle_resolution);
  std::mt19937_64 rng(105);
  std::uniform_int_distribution<int> pick_i(0, f.spec.width - 1), pick_j(0, f.spec.height - 1);
  double drift = 0;
  for (int k = 0; k < 25; ++k) {
    const int i = pick_i(rng), j = pick_j(rng);
    drift = std::max(drift, std::abs(direct_winding_mesh(dense, slice_point(f.spec, i, j)) -
                                     oracle[static_cast<std::size_t>(j) * f.spec.width + i]));
  }

  std::vector<double> errs;
  std::string detail;
  for (int n : {50, 200, 800, 1900}) {
    const Grid2 img = slice(Scene({bezier(f.patch, n)}), f.spec);
    double e = 0;
    for (std::size_t k = 0; k < oracle.size(); ++k) e = std::max(e, std::abs(img.values[k] - oracle[k]));
    errs.push_back(e);
    detail += fmt(" %d:%.3e", n, e);
  }
  bool monotone = true;
  for (std::size_t k = 1; k < errs.size(); ++k) monotone = monotone && errs[k] < errs[k - 1];
  return {monotone && errs.back() < 1e-4 && drift < 1e-12,
          "max error by segment count" + detail + fmt("; stored oracle drift %.1e", drift)};
}

// 6. Slice with ray reuse matches per-point evaluation.
Outcome ray_reuse() {
  std::mt19937_64 rng(106);
  const Scene s({bezier(random_bezier(rng, 0.4))});
  const Aabb b = s.bounds();
  const Vec3 mid = b.center();
  const SliceSpec spec{{b.min_corner.x - 0.1, mid.y, b.min_corner.z - 0.1},
                       {b.max_corner.x - b.min_corner.x + 0.2, 0, 0},
                       {0.05, 0.1, b.max_corner.z - b.min_corner.z + 0.2},
                       64,
                       64};
  QueryStats stats;
  const Grid2 img = slice(s, spec, {0, &stats});
  double worst = 0;
  for (int j = 0; j < 64; ++j)
    for (int i = 0; i < 64; ++i) worst = std::max(worst, std::abs(img.at(i, j) - winding_number(s, slice_point(spec, i, j))));
  const auto batches = stats.ray_batches.load();
  return {worst < 1e-9 && batches == 64,
          fmt("max diff %.3e, %llu ray batches, %llu fallbacks", worst, static_cast<unsigned long long>(batches),
              static_cast<unsigned long long>(stats.fallbacks.load()))};
}

// 7. N^3 voxelization casts N^2 rays.
Outcome voxel_budget() {
  const Scene s = mesh_scene(displaced_cap(10, 24));
  QueryStats stats;
  const VoxelSpec spec{s.bounds().inflated(0.05 * s.diagonal()), 32, 32, 32, 0.5};
  const VoxelResult r = voxelize(s, spec, {0, &stats});
  std::mt19937_64 rng(107);
  std::uniform_int_distribution<int> pick(0, 31);
  double worst = 0;
  const Vec3 lo = spec.box.min_corner, size = spec.box.max_corner - spec.box.min_corner;
  for (int k = 0; k < 50; ++k) {
    const int i = pick(rng), j = pick(rng), l = pick(rng);
    const Vec3 c{lo.x + size.x * (i + 0.5) / 32, lo.y + size.y * (j + 0.5) / 32, lo.z + size.z * (l + 0.5) / 32};
    worst = std::max(worst, std::abs(r.winding.values[r.winding.index(i, j, l)] - winding_number(s, c)));
  }
  const auto batches = stats.ray_batches.load();
  return {batches == 1024 && worst < 1e-6,
          fmt("%llu ray batches, spot-check diff %.3e (float storage)", static_cast<unsigned long long>(batches), worst)};
}

double bem_error(const BemPatch& patch, const std::function<double(Vec2)>& h) {
  double e = 0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const Vec2 xi{0.05 + 0.9 * i / 20, 0.05 + 0.9 * j / 20};
      e = std::max(e, std::abs(eval_surface(patch, xi).z - h(xi)));
    }
  return e;
}

double test_surface(Vec2 p) { return std::exp(p.x - 1) * std::sin(p.y) - std::exp(p.x) * std::cos(p.y); }

// 8. BEM reproduces harmonic height fields with one solve per patch.
Outcome bem_harmonic() {
  const std::vector<std::pair<const char*, std::function<double(Vec2)>>> fields{
      {"saddle", [](Vec2 p) { return p.x * p.x - p.y * p.y; }}, {"exp-trig", test_surface}};
  bool ok = true;
  std::string detail;
  for (const auto& [name, h] : fields) {
    const auto g = [&h](Vec2 p) { return Vec3{p.x, p.y, h(p)}; };
    std::vector<double> errs;
    for (int n : {64, 128, 256}) errs.push_back(bem_error(*BemPatch::from_boundary_function(g, n), h));
    const double at200 = bem_error(*BemPatch::from_boundary_function(g, 200), h);
    ok = ok && errs[1] < errs[0] && errs[2] < errs[1] && at200 < 1e-3;
    detail += fmt("%s 64:%.2e 128:%.2e 256:%.2e 200:%.2e; ", name, errs[0], errs[1], errs[2], at200);
  }
  const auto before = bem_dense_solves();
  const auto patch = BemPatch::from_boundary_function([](Vec2 p) { return Vec3{p.x, p.y, test_surface(p)}; }, 200);
  const BemSurface surf(patch);
  const auto after_build = bem_dense_solves();
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int k = 0; k < 900; ++k) eval_surface(*patch, {u(rng), u(rng)});
  for (int k = 0; k < 100; ++k)
    surf.intersect({{u(rng), u(rng), 3}, UnitVec3::normalize({0.1 * u(rng), -0.1 * u(rng), -1})});
  const auto solves = bem_dense_solves() - before;
  ok = ok && after_build - before == 1 && solves == 1;
  detail += fmt("dense solves for 1000 queries: %llu", static_cast<unsigned long long>(solves));
  return {ok, detail};
}

// 9. Arrangement invariants on single-loop scenes.
Outcome arrangement_invariants() {
  std::mt19937_64 rng(109);
  int built = 0, skipped = 0, area_bad = 0, euler_bad = 0, step_bad = 0, reseed_bad = 0;
  double worst_area = 0;
  while (built < 50 && skipped < 200) {
    const BezierTriangleSurface patch(random_bezier(rng, 0.6), ParametricOptions{.samples_per_edge = 40});
    const Vec3 p = uniform_point(rng, patch.bounds().inflated(0.3));
    SphericalArrangement arr;
    try {
      arr = build_arrangement(p, patch.boundary_loops());
    } catch (const Error&) {
      ++skipped;
      continue;
    }
    ++built;
    double area = 0;
    for (const auto& f : arr.faces) area += f.area;
    worst_area = std::max(worst_area, std::abs(area - 4 * kPi));
    if (std::abs(area - 4 * kPi) >= 1e-8) ++area_bad;
    const int V = static_cast<int>(arr.vertices.size()), E = arr.edge_count(), F = static_cast<int>(arr.faces.size());
    if (V - E + F != 2) ++euler_bad;

    const RayCaster cast = [&patch](const Ray& r) { return patch.intersect(r); };
    auto base = edge_increments(arr);
    const auto seed = seed_chi(arr, base, cast, rng);
    propagate(base, seed.face, seed.chi);
    for (const auto& e : base.edges)
      if (std::abs(base.chi[e.to] - base.chi[e.from]) != 1) ++step_bad;
    std::uniform_int_distribution<int> face(0, F - 1);
    for (int k = 0; k < 3; ++k) {
      const int f = face(rng);
      auto g = edge_increments(arr);
      propagate(g, f, seed_chi_face(arr, f, cast, rng).chi);
      if (g.chi != base.chi) ++reseed_bad;
    }
  }
  return {built == 50 && area_bad + euler_bad + step_bad + reseed_bad == 0,
          fmt("%d scenes (%d degenerate draws skipped): area err max %.2e, euler violations %d, |dchi|!=1 edges %d, "
              "reseed mismatches %d",
              built, skipped, worst_area, euler_bad, step_bad, reseed_bad)};
}

// 10. Flip antisymmetry and rigid invariance.
Outcome invariance() {
  std::mt19937_64 rng(110);
  std::vector<Scene> scenes;
  for (int k = 0; k < 3; ++k) scenes.push_back(Scene({bezier(random_bezier(rng, 0.4))}));
  scenes.push_back(mesh_scene(cube_without_top()));
  scenes.push_back(mesh_scene(displaced_cap(8, 16)));
  scenes.push_back(Scene({std::make_shared<BemSurface>(BemPatch::from_boundary_function(
      [](Vec2 p) { return Vec3{p.x, p.y, test_surface(p)}; }, 128))}));
  double flip = 0, rigid = 0;
  for (const auto& s : scenes) {
    const Scene f = s.flipped();
    for (int t = 0; t < 4; ++t) {
      const RigidTransform xf = random_rigid(rng);
      const Scene moved = s.transformed(xf);
      for (int k = 0; k < 5; ++k) {
        const Vec3 p = uniform_point(rng, s.bounds().inflated(0.3 * s.diagonal()));
        const double w = winding_number(s, p);
        flip = std::max(flip, std::abs(winding_number(f, p) + w));
        rigid = std::max(rigid, std::abs(winding_number(moved, xf.apply(p)) - w));
      }
    }
  }
  return {flip < 1e-9 && rigid < 1e-9, fmt("flip max %.3e, rigid max %.3e over %zu scenes", flip, rigid, scenes.size())};
}

// 11. Batch slice throughput on a large mesh with a small boundary.
Outcome performance() {
  const TriangleMesh torus = punctured_torus(75, 74);
  const Scene s = mesh_scene(torus);
  std::size_t boundary = 0;
  for (const auto& l : s.loops()) boundary += l.points.size();
  const Aabb b = s.bounds();
  const SliceSpec spec{{b.min_corner.x, b.min_corner.y, 0.01}, {b.max_corner.x - b.min_corner.x, 0, 0},
                       {0, b.max_corner.y - b.min_corner.y, 0}, 200, 200};
  const auto t0 = std::chrono::steady_clock::now();
  slice(s, spec);
  const double us = seconds_since(t0) * 1e6 / (200.0 * 200.0);
  return {us < 50, fmt("%.2f us per query (%zu triangles, %zu boundary edges)", us, torus.triangles.size(), boundary)};
}

// 12. BEM partials against central differences.
Outcome bem_gradient() {
  const auto patch = BemPatch::from_boundary_function(
      [](Vec2 p) { return Vec3{p.x + 0.1 * std::sin(3 * p.y), p.y, test_surface(p)}; }, 200);
  std::mt19937_64 rng(112);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  const double h = 1e-5;
  double worst = 0;
  for (int k = 0; k < 50; ++k) {
    const Vec2 xi{u(rng), u(rng)};
    const PatchSample s = eval_partials(*patch, xi);
    const Vec3 fu = (eval_surface(*patch, {xi.x + h, xi.y}) - eval_surface(*patch, {xi.x - h, xi.y})) / (2 * h);
    const Vec3 fv = (eval_surface(*patch, {xi.x, xi.y + h}) - eval_surface(*patch, {xi.x, xi.y - h})) / (2 * h);
    worst = std::max({worst, norm(s.du - fu) / norm(fu), norm(s.dv - fv) / norm(fv)});
  }
  return {worst < 1e-4, fmt("max relative error %.3e over 50 points", worst)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
    bool gating;
  };
  const Criterion criteria[] = {
      {1, "mesh oracle equivalence", mesh_oracle, true},
      {2, "watertight integrality", watertight, true},
      {3, "analytic disk", analytic_disk, true},
      {4, "analytic square", analytic_square, true},
      {5, "boundary discretization convergence", convergence, true},
      {6, "ray reuse consistency", ray_reuse, true},
      {7, "voxel ray budget", voxel_budget, true},
      {8, "bem harmonic reproduction", bem_harmonic, true},
      {9, "arrangement invariants", arrangement_invariants, true},
      {10, "antisymmetry and rigid invariance", invariance, true},
      {11, "performance (soft)", performance, false},
      {12, "bem gradient check", bem_gradient, true},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const char* tag = o.pass ? "PASS" : (c.gating ? "FAIL" : "FAIL (warning only)");
    std::printf("%s [%d] %s: %s (%.1f s)\n", tag, c.id, c.name, o.detail.c_str(), seconds_since(t0));
    std::fflush(stdout);
    if (!o.pass && c.gating) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
