#include "gwn/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

#include "gwn/errors.hpp"

namespace gwn {

namespace {

std::uint64_t edge_key(int a, int b) {
  const auto lo = static_cast<std::uint64_t>(std::min(a, b));
  const auto hi = static_cast<std::uint64_t>(std::max(a, b));
  return (lo << 32) | hi;
}

struct EdgeUse {
  int tri;
  int from;
  int to;
};

std::unordered_map<std::uint64_t, std::vector<EdgeUse>> edge_uses(const TriangleMesh& mesh) {
  std::unordered_map<std::uint64_t, std::vector<EdgeUse>> uses;
  uses.reserve(mesh.triangles.size() * 2);
  for (int t = 0; t < static_cast<int>(mesh.triangles.size()); ++t) {
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      const int a = tri[k];
      const int b = tri[(k + 1) % 3];
      uses[edge_key(a, b)].push_back({t, a, b});
    }
  }
  return uses;
}

}  // namespace

std::vector<BoundaryLoop> extract_mesh_boundary(const TriangleMesh& mesh) {
  const auto uses = edge_uses(mesh);
  std::multimap<int, int> next;  // boundary edge from -> to
  std::size_t remaining = 0;
  for (const auto& [key, list] : uses) {
    if (list.size() > 2) {
      throw Error(ErrorKind::NonManifoldEdge,
                  "edge (" + std::to_string(list[0].from) + "," + std::to_string(list[0].to) +
                      ") has " + std::to_string(list.size()) + " incident triangles");
    }
    if (list.size() == 1) {
      next.emplace(list[0].from, list[0].to);
      ++remaining;
    }
  }

  std::vector<BoundaryLoop> loops;
  while (!next.empty()) {
    auto it = next.begin();
    const int start = it->first;
    std::vector<int> chain{start};
    int cur = it->second;
    next.erase(it);
    --remaining;
    while (cur != start) {
      chain.push_back(cur);
      auto nx = next.find(cur);
      if (nx == next.end()) {
        throw Error(ErrorKind::OpenChain, "boundary chain starting at vertex " +
                                              std::to_string(start) + " does not close");
      }
      cur = nx->second;
      next.erase(nx);
      --remaining;
    }
    BoundaryLoop loop;
    loop.points.reserve(chain.size());
    for (int v : chain) loop.points.push_back(mesh.vertices[v]);
    loops.push_back(std::move(loop));
  }
  return loops;
}

TriangleMesh orient_consistently(const TriangleMesh& mesh) {
  TriangleMesh out = mesh;
  const auto uses = edge_uses(mesh);
  const int n = static_cast<int>(mesh.triangles.size());
  // -1 unvisited, 0 keep, 1 flip
  std::vector<int> state(n, -1);

  auto directed = [&](int t, int a, int b) {
    // Does triangle t, after applying its state, traverse a->b?
    const auto& tri = mesh.triangles[t];
    for (int k = 0; k < 3; ++k) {
      if (tri[k] == a && tri[(k + 1) % 3] == b) return state[t] == 0;
      if (tri[k] == b && tri[(k + 1) % 3] == a) return state[t] == 1;
    }
    return false;
  };

  for (int seed = 0; seed < n; ++seed) {
    if (state[seed] != -1) continue;
    state[seed] = 0;
    std::deque<int> queue{seed};
    while (!queue.empty()) {
      const int t = queue.front();
      queue.pop_front();
      const auto& tri = mesh.triangles[t];
      for (int k = 0; k < 3; ++k) {
        int a = tri[k];
        int b = tri[(k + 1) % 3];
        if (state[t] == 1) std::swap(a, b);
        const auto& list = uses.at(edge_key(a, b));
        if (list.size() > 2) throw Error(ErrorKind::NonManifoldEdge, "edge with more than 2 triangles");
        for (const EdgeUse& u : list) {
          if (u.tri == t) continue;
          // Neighbor must traverse b->a.
          const bool same_dir_raw = (u.from == a && u.to == b);
          const int required = same_dir_raw ? 1 : 0;
          if (state[u.tri] == -1) {
            state[u.tri] = required;
            queue.push_back(u.tri);
          } else if (directed(u.tri, a, b)) {
            throw Error(ErrorKind::NonOrientable,
                        "triangle " + std::to_string(u.tri) + " needs conflicting orientations");
          }
        }
      }
    }
  }
  for (int t = 0; t < n; ++t) {
    if (state[t] == 1) std::swap(out.triangles[t][1], out.triangles[t][2]);
  }
  return out;
}

TriangleBvh::TriangleBvh(const TriangleMesh& mesh, int leaf_size) {
  const int n = static_cast<int>(mesh.triangles.size());
  if (n == 0) return;
  std::vector<Vec3> centroids(n);
  for (int t = 0; t < n; ++t) {
    const auto& tri = mesh.triangles[t];
    centroids[t] = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * n / std::max(1, leaf_size) + 1);
  build(mesh, centroids, 0, n, std::max(1, leaf_size));
}

int TriangleBvh::build(const TriangleMesh& mesh, const std::vector<Vec3>& centroids, int first,
                       int count, int leaf_size) {
  const int index = static_cast<int>(nodes_.size());
  nodes_.push_back({});
  Aabb box;
  Aabb cbox;
  for (int k = first; k < first + count; ++k) {
    const auto& tri = mesh.triangles[order_[k]];
    for (int v : tri) box.extend(mesh.vertices[v]);
    cbox.extend(centroids[order_[k]]);
  }
  // Conservative padding so edge-grazing rays never skip a leaf.
  box = box.inflated(1e-9 * std::max(1.0, box.diag()));
  nodes_[index].box = box;

  const Vec3 ext = cbox.max_corner - cbox.min_corner;
  int axis = 0;
  if (ext.y > ext[axis]) axis = 1;
  if (ext.z > ext[axis]) axis = 2;
  if (count <= leaf_size || ext[axis] <= 0.0) {
    nodes_[index].first = first;
    nodes_[index].count = count;
    return index;
  }
  const int mid = first + count / 2;
  std::nth_element(order_.begin() + first, order_.begin() + mid, order_.begin() + first + count,
                   [&](int a, int b) { return centroids[a][axis] < centroids[b][axis]; });
  const int left = build(mesh, centroids, first, mid - first, leaf_size);
  const int right = build(mesh, centroids, mid, first + count - mid, leaf_size);
  nodes_[index].left = left;
  nodes_[index].right = right;
  return index;
}

MeshSurface::MeshSurface(TriangleMesh mesh, double tangent_eps)
    : mesh_(std::move(mesh)), tangent_eps_(tangent_eps) {
  const int nv = static_cast<int>(mesh_.vertices.size());
  for (const auto& v : mesh_.vertices) {
    if (!is_finite(v)) throw Error(ErrorKind::InvalidInput, "non-finite mesh vertex");
  }
  for (const auto& tri : mesh_.triangles) {
    for (int v : tri) {
      if (v < 0 || v >= nv) throw Error(ErrorKind::InvalidInput, "triangle index out of range");
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw Error(ErrorKind::InvalidInput, "triangle repeats a vertex");
    }
  }
  for (const auto& [key, list] : edge_uses(mesh_)) {
    if (list.size() == 2 && list[0].from == list[1].from) {
      throw Error(ErrorKind::NonOrientable,
                  "mesh is not consistently oriented (run orient_consistently first)");
    }
  }
  bounds_ = Aabb::of(mesh_.vertices);
  bvh_ = TriangleBvh(mesh_);
  boundary_ = extract_mesh_boundary(mesh_);
}

std::vector<IntersectionRecord> MeshSurface::intersect(const Ray& r, double t_lo,
                                                       double t_hi) const {
  return intersect_ray_mesh(*this, r, t_lo, t_hi);
}

std::unique_ptr<Surface> MeshSurface::flipped() const {
  TriangleMesh m = mesh_;
  for (auto& tri : m.triangles) std::swap(tri[1], tri[2]);
  return std::make_unique<MeshSurface>(std::move(m), tangent_eps_);
}

std::unique_ptr<Surface> MeshSurface::transformed(const RigidTransform& xf) const {
  TriangleMesh m = mesh_;
  for (auto& v : m.vertices) v = xf.apply(v);
  return std::make_unique<MeshSurface>(std::move(m), tangent_eps_);
}

namespace {

// Generic perturbation directions for the ray origin.
constexpr Vec3 kPerturb[3] = {{0.5773502691896258, 0.3015113445777636, 0.7587869917095376},
                              {-0.6193021426911066, 0.7776802306066102, 0.1081666666666667},
                              {0.2345678901234567, 0.4321098765432109, -0.8708132880349498}};

// Side of the ray relative to the directed line a->b, with ties resolved by
// the perturbation o -> o + e1 eps + e2 eps^2 + e3 eps^3. Evaluated on the
// canonical (lower index first) orientation so that both triangles sharing an
// edge see exactly negated values.
int edge_side(const Vec3& o, const Vec3& d, const std::vector<Vec3>& verts, int ia, int ib) {
  const bool swapped = ia > ib;
  const int lo = swapped ? ib : ia;
  const int hi = swapped ? ia : ib;
  const Vec3 A = verts[lo] - o;
  const Vec3 B = verts[hi] - o;
  const Vec3 AxB = cross(A, B);
  const double s = dot(d, AxB);
  const double bound = 32.0 * std::numeric_limits<double>::epsilon() * norm(A) * norm(B);
  int sign = 0;
  if (std::abs(s) > bound) {
    sign = s > 0 ? 1 : -1;
  } else {
    const Vec3 edge = verts[hi] - verts[lo];
    for (const Vec3& e : kPerturb) {
      const double ds = -dot(edge, cross(d, e));
      if (ds != 0.0) {
        sign = ds > 0 ? 1 : -1;
        break;
      }
    }
    if (sign == 0) sign = 1;  // edge parallel to the ray
  }
  return swapped ? -sign : sign;
}

// Ray lying in the triangle's plane: clip the ray line against the triangle
// in the dominant 2D projection and report the entry parameter.
std::optional<double> coplanar_entry(const Vec3& o, const Vec3& d, const Vec3 p[3], const Vec3& n,
                                     double t_lo, double t_hi) {
  int drop = 0;
  if (std::abs(n.y) > std::abs(n[drop])) drop = 1;
  if (std::abs(n.z) > std::abs(n[drop])) drop = 2;
  const int i0 = (drop + 1) % 3;
  const int i1 = (drop + 2) % 3;
  const double orient = n[drop] > 0 ? 1.0 : -1.0;
  double lo = t_lo;
  double hi = t_hi;
  for (int k = 0; k < 3; ++k) {
    const Vec3& a = p[k];
    const Vec3& b = p[(k + 1) % 3];
    // Inside half-plane: cross2(b - a, x - a) * orient >= 0.
    const double ex = b[i0] - a[i0];
    const double ey = b[i1] - a[i1];
    const double c0 = orient * (ex * (o[i1] - a[i1]) - ey * (o[i0] - a[i0]));
    const double c1 = orient * (ex * d[i1] - ey * d[i0]);
    if (c1 == 0.0) {
      if (c0 < 0.0) return std::nullopt;
      continue;
    }
    const double t = -c0 / c1;
    if (c1 > 0) lo = std::max(lo, t);
    else hi = std::min(hi, t);
    if (lo > hi) return std::nullopt;
  }
  return lo;
}

}  // namespace

std::vector<IntersectionRecord> intersect_ray_mesh(const MeshSurface& surface, const Ray& r,
                                                   double t_lo, double t_hi) {
  std::vector<IntersectionRecord> hits;
  const TriangleMesh& mesh = surface.mesh();
  const Vec3& o = r.origin;
  const Vec3& d = r.direction.vec();
  const double scale = std::max(1.0, surface.bounds().diag());
  const double eps_t = surface.tangent_epsilon();

  surface.bvh().traverse(r, t_lo, t_hi, [&](int t) {
    const auto& tri = mesh.triangles[t];
    const Vec3 p[3] = {mesh.vertices[tri[0]], mesh.vertices[tri[1]], mesh.vertices[tri[2]]};
    const Vec3 nraw = cross(p[1] - p[0], p[2] - p[0]);
    const double nlen = norm(nraw);
    if (!(nlen > 0.0)) return;
    const Vec3 n = nraw / nlen;
    const double dn = dot(d, n);
    const double plane = dot(p[0] - o, n);

    if (std::abs(dn) <= eps_t) {
      if (std::abs(plane) <= 1e-12 * scale) {
        if (auto te = coplanar_entry(o, d, p, n, t_lo, t_hi)) {
          hits.push_back({*te, r.at(*te), UnitVec3::from_unit(n), dn >= 0 ? 1 : -1, true});
        }
        return;
      }
      if (dn == 0.0) return;
    }

    const int s0 = edge_side(o, d, mesh.vertices, tri[0], tri[1]);
    const int s1 = edge_side(o, d, mesh.vertices, tri[1], tri[2]);
    if (s1 != s0) return;
    const int s2 = edge_side(o, d, mesh.vertices, tri[2], tri[0]);
    if (s2 != s0) return;

    const double tt = plane / dn;
    if (!(tt >= t_lo && tt <= t_hi)) return;
    IntersectionRecord rec;
    rec.t = tt;
    rec.point = r.at(tt);
    rec.normal = UnitVec3::from_unit(n);
    rec.tangency = std::abs(dn) <= eps_t;
    rec.sign = dn >= 0 ? 1 : -1;
    hits.push_back(rec);
  });
  std::sort(hits.begin(), hits.end(),
            [](const IntersectionRecord& a, const IntersectionRecord& b) { return a.t < b.t; });
  return hits;
}

}  // namespace gwn
