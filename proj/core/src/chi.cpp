#include "gwn/chi.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>
#include <queue>

#include "gwn/errors.hpp"

namespace gwn {

std::vector<std::vector<std::pair<int, int>>> RegionGraph::adjacency() const {
  std::vector<std::vector<std::pair<int, int>>> adj(face_count);
  for (const auto& e : edges) {
    adj[e.from].emplace_back(e.to, e.increment);
    adj[e.to].emplace_back(e.from, -e.increment);
  }
  return adj;
}

RegionGraph edge_increments(const SphericalArrangement& arr) {
  RegionGraph g;
  g.face_count = static_cast<int>(arr.faces.size());
  std::vector<RegionEdge> all;
  all.reserve(arr.edge_count());
  for (int e = 0; e < arr.edge_count(); ++e) {
    const HalfArc& h = arr.half_arcs[2 * e];
    // Half-arc 2e follows its loop; its left face is one higher.
    const int left = h.face;
    const int right = arr.half_arcs[2 * e + 1].face;
    if (left == right)
      throw Error(ErrorKind::InconsistentIncrements, "arc has the same face on both sides");
    const int lo = std::min(left, right), hi = std::max(left, right);
    all.push_back({lo, hi, left == hi ? 1 : -1});
  }
  std::sort(all.begin(), all.end(), [](const RegionEdge& a, const RegionEdge& b) {
    return a.from != b.from ? a.from < b.from : a.to < b.to;
  });
  for (const auto& e : all) {
    if (!g.edges.empty() && g.edges.back().from == e.from && g.edges.back().to == e.to) {
      if (g.edges.back().increment != e.increment)
        throw Error(ErrorKind::InconsistentIncrements, "arcs between two faces disagree");
      continue;
    }
    g.edges.push_back(e);
  }
  return g;
}

std::optional<int> signed_count(const std::vector<IntersectionRecord>& hits) {
  int chi = 0;
  for (const auto& h : hits) {
    if (h.tangency) return std::nullopt;
    chi += h.sign;
  }
  return chi;
}

std::optional<UnitVec3> random_direction_in_face(const SphericalArrangement& arr, int face,
                                                 std::mt19937_64& rng, int tries) {
  const Vec3 center = interior_point(arr, face).vec();
  const Vec3 e1 = any_orthogonal(center);
  const Vec3 e2 = cross(center, e1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  double radius = 0.01;
  for (int k = 0; k < tries; ++k) {
    const double r = radius * std::sqrt(uni(rng));
    const double phi = 2 * std::numbers::pi * uni(rng);
    const Vec3 x = std::cos(r) * center + std::sin(r) * (std::cos(phi) * e1 + std::sin(phi) * e2);
    const UnitVec3 d = UnitVec3::normalize(x);
    try {
      if (arr.locate(d) == face) return d;
    } catch (const Error& err) {
      if (err.kind() != ErrorKind::OnBoundary) throw;
    }
    if (k % 4 == 3) radius = std::min(radius * 2, std::numbers::pi);
  }
  return std::nullopt;
}

SeedResult seed_chi_face(const SphericalArrangement& arr, int face, const RayCaster& cast,
                         std::mt19937_64& rng, const EpsilonConfig& eps) {
  SeedResult out;
  out.face = face;
  UnitVec3 dir = interior_point(arr, face);
  for (int attempt = 0; attempt <= eps.seed_retries; ++attempt) {
    out.attempts = attempt + 1;
    out.ray = Ray{arr.center, dir};
    out.hits = cast(out.ray);
    if (auto chi = signed_count(out.hits)) {
      out.chi = *chi;
      return out;
    }
    auto next = random_direction_in_face(arr, face, rng);
    if (!next) break;
    dir = *next;
  }
  throw Error(ErrorKind::SeedExhausted, "every seed ray was tangent to the surface");
}

SeedResult seed_chi(const SphericalArrangement& arr, const RegionGraph&, const RayCaster& cast,
                    std::mt19937_64& rng, const EpsilonConfig& eps) {
  return seed_chi_face(arr, arr.largest_face(), cast, rng, eps);
}

void propagate(RegionGraph& graph, int seed_face, int seed_chi) {
  const auto adj = graph.adjacency();
  std::vector<char> done(graph.face_count, 0);
  graph.chi.assign(graph.face_count, 0);
  graph.chi.at(seed_face) = seed_chi;
  done[seed_face] = 1;
  std::queue<int> todo;
  todo.push(seed_face);
  while (!todo.empty()) {
    const int f = todo.front();
    todo.pop();
    for (const auto& [g, inc] : adj[f]) {
      const int want = graph.chi[f] + inc;
      if (done[g]) {
        if (graph.chi[g] != want)
          throw Error(ErrorKind::CycleInconsistency, "region graph cycle with conflicting chi");
        continue;
      }
      graph.chi[g] = want;
      done[g] = 1;
      todo.push(g);
    }
  }
  for (char d : done)
    if (!d) throw Error(ErrorKind::CycleInconsistency, "region graph is not connected");
}

double winding_from_chi(const SphericalArrangement& arr, const RegionGraph& graph) {
  double sum = 0;
  for (int f = 0; f < graph.face_count; ++f) sum += graph.chi[f] * arr.faces[f].area;
  return sum / (4 * std::numbers::pi);
}

}  // namespace gwn
