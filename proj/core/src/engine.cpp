#include "gwn/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "gwn/arrangement.hpp"
#include "gwn/chi.hpp"
#include "gwn/errors.hpp"

namespace gwn {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Same point, same random stream: results do not depend on scheduling.
std::uint64_t seed_for(const Vec3& p) {
  std::uint64_t h = 0;
  for (double c : {p.x, p.y, p.z}) {
    std::uint64_t bits;
    std::memcpy(&bits, &c, sizeof bits);
    h = splitmix(h ^ bits);
  }
  return h;
}

void bump(std::atomic<std::uint64_t> QueryStats::*field, QueryStats* stats) {
  if (stats) (stats->*field).fetch_add(1, std::memory_order_relaxed);
}

double surface_tolerance(const Scene& scene) {
  return scene.epsilons().surface_hit * std::max(1.0, scene.diagonal());
}

double group_winding(const Scene& scene, int g, const Vec3& q, std::mt19937_64& rng,
                     QueryStats* stats) {
  const auto& eps = scene.epsilons();
  const auto arr = build_arrangement(q, scene.groups()[g].loops, eps, false);
  auto graph = edge_increments(arr);
  const double tol = surface_tolerance(scene);
  const RayCaster cast = [&](const Ray& r) {
    bump(&QueryStats::seed_rays, stats);
    auto hits = scene.intersect_group(g, r);
    for (const auto& h : hits)
      if (h.t < tol) throw Error(ErrorKind::OnSurface, "query point lies on the surface");
    return hits;
  };
  const auto seed = seed_chi(arr, graph, cast, rng, eps);
  propagate(graph, seed.face, seed.chi);
  return winding_from_chi(arr, graph);
}

Vec3 random_offset(std::mt19937_64& rng, double length) {
  std::normal_distribution<double> g;
  Vec3 d;
  do d = {g(rng), g(rng), g(rng)};
  while (norm(d) < 1e-6);
  return (length / norm(d)) * d;
}

}  // namespace

int resolve_threads(int requested) {
  if (const char* env = std::getenv("WN_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  if (requested > 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(int n, int threads, const std::function<void(int)>& body) {
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

double winding_number(const Scene& scene, const Vec3& p, QueryStats* stats) {
  if (!is_finite(p)) throw Error(ErrorKind::InvalidInput, "query point is not finite");
  const auto& eps = scene.epsilons();
  std::mt19937_64 rng(seed_for(p));
  Vec3 q = p;
  for (int attempt = 0;; ++attempt) {
    try {
      double w = 0;
      for (int g = 0; g < static_cast<int>(scene.groups().size()); ++g)
        w += group_winding(scene, g, q, rng, stats);
      bump(&QueryStats::evaluations, stats);
      return w;
    } catch (const Error& e) {
      if (!is_query_degeneracy(e.kind())) throw;
      if (attempt >= eps.jitter_attempts)
        throw Error(ErrorKind::DegenerateQuery,
                    std::string("query stays degenerate after jitter: ") + e.what());
    }
    bump(&QueryStats::jitters, stats);
    q = p + random_offset(rng, eps.jitter_scale * std::max(scene.diagonal(), 1e-12));
  }
}

std::vector<double> winding_numbers_along_ray(const Scene& scene, const Ray& r,
                                              const std::vector<double>& ts, QueryStats* stats) {
  std::vector<double> out(ts.size());
  if (ts.empty()) return out;
  if (!std::is_sorted(ts.begin(), ts.end()))
    throw Error(ErrorKind::InvalidInput, "ray parameters must be ascending");
  bump(&QueryStats::ray_batches, stats);
  const auto& eps = scene.epsilons();
  const double tol = surface_tolerance(scene);
  const int ng = static_cast<int>(scene.groups().size());
  std::vector<std::vector<IntersectionRecord>> hits(ng);
  for (int g = 0; g < ng; ++g) hits[g] = scene.intersect_group(g, r, ts.front() - tol, INFINITY);

  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    const Vec3 q = r.at(t);
    bool reused = true;
    double w = 0;
    try {
      for (int g = 0; g < ng && reused; ++g) {
        int chi = 0;
        for (const auto& h : hits[g]) {
          if (std::abs(h.t - t) < tol || (h.t > t && h.tangency)) {
            reused = false;
            break;
          }
          if (h.t > t) chi += h.sign;
        }
        if (!reused) break;
        const auto arr = build_arrangement(q, scene.groups()[g].loops, eps, false);
        auto graph = edge_increments(arr);
        propagate(graph, arr.locate(r.direction), chi);
        w += winding_from_chi(arr, graph);
      }
    } catch (const Error& e) {
      if (!is_query_degeneracy(e.kind())) throw;
      reused = false;
    }
    if (reused) {
      bump(&QueryStats::evaluations, stats);
      out[i] = w;
    } else {
      bump(&QueryStats::fallbacks, stats);
      out[i] = winding_number(scene, q, stats);
    }
  }
  return out;
}

Grid2 slice(const Scene& scene, const SliceSpec& spec, const EngineOptions& opts) {
  if (spec.width < 1 || spec.height < 1) throw Error(ErrorKind::InvalidInput, "slice size must be positive");
  if (!(norm(spec.u) > 0) || !(norm(spec.v) > 0) || !(norm(cross(spec.u, spec.v)) > 0))
    throw Error(ErrorKind::InvalidInput, "slice axes must be independent");
  Grid2 img{spec.width, spec.height,
            std::vector<double>(static_cast<std::size_t>(spec.width) * spec.height)};
  const bool along_u = spec.width >= spec.height;
  const int nrays = along_u ? spec.height : spec.width;
  const int nsamples = along_u ? spec.width : spec.height;
  const Vec3 axis = along_u ? spec.u : spec.v;
  const Vec3 across = along_u ? spec.v : spec.u;
  const UnitVec3 dir = UnitVec3::normalize(axis);
  std::vector<double> ts(nsamples);
  for (int k = 0; k < nsamples; ++k) ts[k] = (k + 0.5) / nsamples * norm(axis);

  parallel_for(nrays, resolve_threads(opts.threads), [&](int ray) {
    const Ray r{spec.origin + ((ray + 0.5) / nrays) * across, dir};
    const auto w = winding_numbers_along_ray(scene, r, ts, opts.stats);
    for (int k = 0; k < nsamples; ++k) {
      const int i = along_u ? k : ray;
      const int j = along_u ? ray : k;
      img.values[static_cast<std::size_t>(j) * spec.width + i] = w[k];
    }
  });
  return img;
}

VoxelResult voxelize(const Scene& scene, const VoxelSpec& spec, const EngineOptions& opts) {
  const int n[3] = {spec.nx, spec.ny, spec.nz};
  if (n[0] < 1 || n[1] < 1 || n[2] < 1) throw Error(ErrorKind::InvalidInput, "grid size must be positive");
  if (!spec.box.valid()) throw Error(ErrorKind::InvalidInput, "voxel box is empty");
  int axis = 0;
  for (int a = 1; a < 3; ++a)
    if (n[a] > n[axis]) axis = a;
  const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
  const Vec3 lo = spec.box.min_corner;
  const Vec3 ext = spec.box.max_corner - spec.box.min_corner;
  auto center = [&](int a, int k) { return lo[a] + (k + 0.5) / n[a] * ext[a]; };

  VoxelResult res;
  res.ray_axis = axis;
  res.winding.nx = n[0], res.winding.ny = n[1], res.winding.nz = n[2];
  const std::size_t total = static_cast<std::size_t>(n[0]) * n[1] * n[2];
  res.winding.values.assign(total, 0.0f);
  res.occupied.assign(total, 0);

  Vec3 unit{};
  unit[axis] = 1.0;
  const UnitVec3 dir = UnitVec3::from_unit(unit);
  std::vector<double> ts(n[axis]);
  for (int k = 0; k < n[axis]; ++k) ts[k] = (k + 0.5) / n[axis] * ext[axis];

  parallel_for(n[a1] * n[a2], resolve_threads(opts.threads), [&](int col) {
    const int k1 = col % n[a1], k2 = col / n[a1];
    Vec3 o{};
    o[axis] = lo[axis];
    o[a1] = center(a1, k1);
    o[a2] = center(a2, k2);
    const auto w = winding_numbers_along_ray(scene, Ray{o, dir}, ts, opts.stats);
    for (int k = 0; k < n[axis]; ++k) {
      int idx[3];
      idx[axis] = k, idx[a1] = k1, idx[a2] = k2;
      const std::size_t at = res.winding.index(idx[0], idx[1], idx[2]);
      res.winding.values[at] = static_cast<float>(w[k]);
      res.occupied[at] = w[k] >= spec.threshold ? 1 : 0;
    }
  });
  return res;
}

}  // namespace gwn
