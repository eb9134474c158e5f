#pragma once

#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "gwn/arrangement.hpp"

namespace gwn {

/// chi[to] = chi[from] + increment, increment = +-1.
struct RegionEdge {
  int from = -1;
  int to = -1;
  int increment = 0;
};

struct RegionGraph {
  int face_count = 0;
  std::vector<RegionEdge> edges;  ///< one per adjacent face pair, from < to
  std::vector<int> chi;           ///< filled by propagate()

  /// (neighbor, chi[neighbor] - chi[face]) for every edge at `face`.
  std::vector<std::vector<std::pair<int, int>>> adjacency() const;
};

/// All hits of a ray with t >= 0, sorted by t.
using RayCaster = std::function<std::vector<IntersectionRecord>(const Ray&)>;

/// The face left of a loop-oriented arc has chi one larger than the face on its right.
RegionGraph edge_increments(const SphericalArrangement& arr);

struct SeedResult {
  int face = -1;
  int chi = 0;
  Ray ray;
  std::vector<IntersectionRecord> hits;  ///< every hit along the seed ray, sorted by t
  int attempts = 0;
};

/// Signed hit count along a ray, or nullopt if any hit is tangent.
std::optional<int> signed_count(const std::vector<IntersectionRecord>& hits);

/// Casts rays from the arrangement center through `face` until no hit is
/// tangent. Uses the face interior point first, then random directions
/// inside the face. Throws SeedExhausted.
SeedResult seed_chi_face(const SphericalArrangement& arr, int face, const RayCaster& cast,
                         std::mt19937_64& rng, const EpsilonConfig& eps = {});

/// Seeds the largest face.
SeedResult seed_chi(const SphericalArrangement& arr, const RegionGraph& graph,
                    const RayCaster& cast, std::mt19937_64& rng, const EpsilonConfig& eps = {});

/// Random direction inside `face` near its interior point; nullopt after `tries` misses.
std::optional<UnitVec3> random_direction_in_face(const SphericalArrangement& arr, int face,
                                                 std::mt19937_64& rng, int tries = 64);

/// Breadth-first fill of chi from one seeded face. Throws CycleInconsistency.
void propagate(RegionGraph& graph, int seed_face, int seed_chi);

/// Sum of chi times area over 4 pi.
double winding_from_chi(const SphericalArrangement& arr, const RegionGraph& graph);

}  // namespace gwn
