#include "gwn/scene.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>

#include "gwn/errors.hpp"

namespace gwn {

namespace {

// Merges points closer than `tol`, hashing on a grid of that cell size.
class PointWelder {
 public:
  explicit PointWelder(double tol) : tol_(tol > 0 ? tol : 1e-300) {}

  int id(const Vec3& p) {
    const long cx = cell(p.x), cy = cell(p.y), cz = cell(p.z);
    for (long dx = -1; dx <= 1; ++dx)
      for (long dy = -1; dy <= 1; ++dy)
        for (long dz = -1; dz <= 1; ++dz) {
          auto it = grid_.find(key(cx + dx, cy + dy, cz + dz));
          if (it == grid_.end()) continue;
          for (int k : it->second)
            if (norm(points_[k] - p) <= tol_) return k;
        }
    const int k = static_cast<int>(points_.size());
    points_.push_back(p);
    grid_[key(cx, cy, cz)].push_back(k);
    return k;
  }
  const Vec3& point(int k) const { return points_[k]; }

 private:
  long cell(double x) const { return static_cast<long>(std::floor(x / tol_)); }
  static std::uint64_t key(long x, long y, long z) {
    const auto h = [](long v) { return static_cast<std::uint64_t>(v) * 0x9E3779B97F4A7C15ULL; };
    return h(x) ^ (h(y) << 21 | h(y) >> 43) ^ (h(z) << 42 | h(z) >> 22);
  }

  double tol_;
  std::vector<Vec3> points_;
  std::unordered_map<std::uint64_t, std::vector<int>> grid_;
};

int find(std::vector<int>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

Scene::Scene(std::vector<std::shared_ptr<const Surface>> patches, EpsilonConfig eps)
    : patches_(std::move(patches)), eps_(eps) {
  for (const auto& p : patches_) {
    if (!p) throw Error(ErrorKind::InvalidInput, "null patch");
    bounds_.extend(p->bounds());
    patch_loops_.push_back(p->boundary_loops());
  }
  for (const auto& loops : patch_loops_)
    for (const auto& l : loops)
      for (const auto& q : l.points) bounds_.extend(q);
  build_groups();
}

void Scene::build_groups() {
  const int np = static_cast<int>(patches_.size());
  PointWelder welder(1e-9 * std::max(1.0, diagonal()));

  struct DirectedEdge {
    int a, b, patch;
    bool alive = true;
  };
  std::vector<DirectedEdge> edges;
  for (int p = 0; p < np; ++p)
    for (const auto& loop : patch_loops_[p]) {
      std::vector<int> ids;
      for (const auto& q : loop.points) {
        const int k = welder.id(q);
        if (ids.empty() || ids.back() != k) ids.push_back(k);
      }
      while (ids.size() > 1 && ids.back() == ids.front()) ids.pop_back();
      if (ids.size() < 2) continue;
      for (std::size_t i = 0; i < ids.size(); ++i)
        edges.push_back({ids[i], ids[(i + 1) % ids.size()], p});
    }

  // Undirected edge -> uses. Exactly two opposite uses form an interior edge.
  std::map<std::pair<int, int>, std::vector<int>> uses;
  for (int e = 0; e < static_cast<int>(edges.size()); ++e)
    uses[{std::min(edges[e].a, edges[e].b), std::max(edges[e].a, edges[e].b)}].push_back(e);

  std::vector<int> parent(np);
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [key, list] : uses) {
    if (list.size() != 2) continue;
    DirectedEdge& x = edges[list[0]];
    DirectedEdge& y = edges[list[1]];
    if (x.a != y.b) continue;  // same direction: left as boundary
    x.alive = y.alive = false;
    parent[find(parent, x.patch)] = find(parent, y.patch);
  }

  std::map<int, int> group_of_root;
  for (int p = 0; p < np; ++p) {
    auto [it, inserted] = group_of_root.emplace(find(parent, p), static_cast<int>(groups_.size()));
    if (inserted) groups_.emplace_back();
    groups_[it->second].patches.push_back(p);
  }

  for (auto& g : groups_) {
    std::vector<int> mine;
    for (int e = 0; e < static_cast<int>(edges.size()); ++e)
      if (edges[e].alive && find(parent, edges[e].patch) == find(parent, g.patches.front()))
        mine.push_back(e);
    std::map<std::pair<int, int>, int> directed;
    std::multimap<int, int> outgoing;
    for (int e : mine) {
      if (++directed[{edges[e].a, edges[e].b}] > 1)
        throw Error(ErrorKind::NonOrientable, "boundary edge repeated in the same direction");
      outgoing.emplace(edges[e].a, e);
    }
    std::vector<char> used(edges.size(), 0);
    for (int start : mine) {
      if (used[start]) continue;
      BoundaryLoop loop;
      loop.patch_id = edges[start].patch;
      int e = start;
      while (true) {
        used[e] = 1;
        loop.points.push_back(welder.point(edges[e].a));
        const int v = edges[e].b;
        if (v == edges[start].a) break;
        int next = -1;
        auto [lo, hi] = outgoing.equal_range(v);
        for (auto it = lo; it != hi; ++it)
          if (!used[it->second]) {
            next = it->second;
            break;
          }
        if (next < 0) throw Error(ErrorKind::OpenChain, "boundary edges do not close into loops");
        e = next;
      }
      g.loops.push_back(std::move(loop));
    }
  }
}

std::vector<BoundaryLoop> Scene::loops() const {
  std::vector<BoundaryLoop> out;
  for (const auto& g : groups_) out.insert(out.end(), g.loops.begin(), g.loops.end());
  return out;
}

std::vector<IntersectionRecord> Scene::intersect_group(int group, const Ray& r, double t_lo,
                                                       double t_hi) const {
  std::vector<IntersectionRecord> hits;
  for (int p : groups_.at(group).patches) {
    auto h = patches_[p]->intersect(r, t_lo, t_hi);
    hits.insert(hits.end(), h.begin(), h.end());
  }
  std::sort(hits.begin(), hits.end(),
            [](const IntersectionRecord& a, const IntersectionRecord& b) { return a.t < b.t; });
  return hits;
}

Scene Scene::flipped() const {
  std::vector<std::shared_ptr<const Surface>> out;
  for (const auto& p : patches_) out.push_back(p->flipped());
  return Scene(std::move(out), eps_);
}

Scene Scene::transformed(const RigidTransform& xf) const {
  std::vector<std::shared_ptr<const Surface>> out;
  for (const auto& p : patches_) out.push_back(p->transformed(xf));
  return Scene(std::move(out), eps_);
}

}  // namespace gwn
