#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <vector>

#include "gwn/grid.hpp"
#include "gwn/scene.hpp"

namespace gwn {

/// Counters shared by the engine entry points.
struct QueryStats {
  std::atomic<std::uint64_t> ray_batches{0};    ///< planned rays, one all-hits pass each
  std::atomic<std::uint64_t> seed_rays{0};      ///< rays cast by per-point evaluation
  std::atomic<std::uint64_t> jitters{0};        ///< query points moved off a degeneracy
  std::atomic<std::uint64_t> fallbacks{0};      ///< ray-reuse queries re-run per point
  std::atomic<std::uint64_t> evaluations{0};    ///< winding numbers produced
};

struct EngineOptions {
  int threads = 0;  ///< 0: WN_THREADS if set, else hardware concurrency
  QueryStats* stats = nullptr;
};

/// Worker count after applying the WN_THREADS override.
int resolve_threads(int requested);

/// Runs body(i) for i in [0, n) on `threads` workers.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

/// One-shot winding number at p. Query degeneracies move p by a small random
/// offset (at most `jitter_attempts` times) before DegenerateQuery is thrown.
double winding_number(const Scene& scene, const Vec3& p, QueryStats* stats = nullptr);

/// Winding numbers at r.at(t) for every t, with a single all-hits pass over
/// the scene. ts must be ascending.
std::vector<double> winding_numbers_along_ray(const Scene& scene, const Ray& r,
                                              const std::vector<double>& ts,
                                              QueryStats* stats = nullptr);

/// Pixel (i, j) sits at origin + (i + 0.5)/W u + (j + 0.5)/H v.
struct SliceSpec {
  Vec3 origin;
  Vec3 u;
  Vec3 v;
  int width = 1;
  int height = 1;
};

/// Row-major image, index j * width + i. Casts min(W, H) rays.
Grid2 slice(const Scene& scene, const SliceSpec& spec, const EngineOptions& opts = {});

struct VoxelSpec {
  Aabb box;
  int nx = 1, ny = 1, nz = 1;
  double threshold = 0.5;
};

struct VoxelResult {
  Grid3 winding;
  std::vector<std::uint8_t> occupied;  ///< x-fastest, 1 where w >= threshold
  int ray_axis = 0;
};

/// Winding numbers at voxel centers, one ray per column along the axis with
/// the most voxels (ties x < y < z).
VoxelResult voxelize(const Scene& scene, const VoxelSpec& spec, const EngineOptions& opts = {});

}  // namespace gwn
