#include "gwn/arrangement.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <cstring>
#include <cmath>
#include <map>
#include <unordered_map>
#include <numbers>
#include <numeric>
#include <random>

#include "gwn/errors.hpp"

namespace gwn {

namespace {

constexpr double kPi = std::numbers::pi;

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) {
    a = find(a), b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }
  void grow(std::size_t n) {
    const auto old = parent_.size();
    parent_.resize(n);
    std::iota(parent_.begin() + static_cast<long>(old), parent_.end(), static_cast<int>(old));
  }

 private:
  std::vector<int> parent_;
};

struct Vec3Hash {
  std::size_t operator()(const Vec3& p) const {
    std::uint64_t h = 0;
    for (double c : {p.x, p.y, p.z}) {
      std::uint64_t bits;
      std::memcpy(&bits, &c, sizeof bits);
      h = (h ^ bits) * 0x100000001B3ULL + (h >> 29);
    }
    return static_cast<std::size_t>(h);
  }
};

struct ProjectedVertex {
  Vec3 point;
  UnitVec3 dir;
};

struct RawArc {
  int a, b;
  UnitVec3 pole;
  int loop;
  double length;
  std::vector<std::pair<double, int>> splits;  // (angle from a, vertex)
};

double sine_from(const Vec3& s, const Vec3& c, const Vec3& pole) { return dot(cross(s, c), pole); }

// Tangent of a great arc with the given pole at point x.
Vec3 tangent(const Vec3& pole, const Vec3& x) { return cross(pole, x); }

class Builder {
 public:
  Builder(const Vec3& center, const EpsilonConfig& eps, bool interior)
      : center_(center), eps_(eps), interior_(interior), snap_(0) {}

  SphericalArrangement run(const std::vector<BoundaryLoop>& loops) {
    std::size_t total = 0;
    for (const auto& loop : loops) total += loop.points.size();
    weld_.reserve(2 * total);
    verts_.reserve(2 * total);
    std::vector<std::vector<int>> seqs;
    for (const auto& loop : loops) seqs.push_back(project_loop(loop));
    snap(seqs);
    for (std::size_t li = 0; li < seqs.size(); ++li) add_arcs(seqs[li], static_cast<int>(li));
    find_crossings();
    SphericalArrangement arr;
    arr.center = center_;
    arr.eps = eps_;
    build_half_arcs(arr);
    trace(arr);
    return arr;
  }

 private:
  int vertex_of(const Vec3& p) {
    auto [it, inserted] = weld_.try_emplace(p, static_cast<int>(verts_.size()));
    if (inserted) verts_.push_back({p, project_to_sphere(center_, p, eps_)});
    return it->second;
  }

  void subdivide(int a, int b, std::vector<int>& out, int depth) {
    const Vec3& da = verts_[a].dir;
    const Vec3& db = verts_[b].dir;
    if (norm(cross(da, db)) < eps_.vertex_merge && dot(da, db) < 0)
      throw Error(ErrorKind::DegenerateProjection, "segment passes through the query point");
    if (dot(da, db) < 0 && depth < 48) {
      const int m = vertex_of(0.5 * (verts_[a].point + verts_[b].point));
      subdivide(a, m, out, depth + 1);
      out.push_back(m);
      subdivide(m, b, out, depth + 1);
    }
  }

  std::vector<int> project_loop(const BoundaryLoop& loop) {
    std::vector<int> ids;
    const auto& pts = loop.points;
    if (pts.size() < 2) return ids;
    std::vector<int> base;
    for (const auto& p : pts) base.push_back(vertex_of(p));
    for (std::size_t i = 0; i < base.size(); ++i) {
      const int a = base[i], b = base[(i + 1) % base.size()];
      ids.push_back(a);
      if (a != b) subdivide(a, b, ids, 0);
    }
    return ids;
  }

  void snap(std::vector<std::vector<int>>& seqs) {
    snap_.grow(verts_.size());
    for (const auto& s : seqs)
      for (std::size_t i = 0; i < s.size(); ++i) {
        const int a = s[i], b = s[(i + 1) % s.size()];
        if (a != b && norm(verts_[a].dir.vec() - verts_[b].dir.vec()) < eps_.vertex_merge)
          snap_.unite(a, b);
      }

    // Any other pair of distinct directions this close cannot be resolved.
    std::vector<std::pair<double, int>> reps;
    for (int i = 0; i < static_cast<int>(verts_.size()); ++i)
      if (snap_.find(i) == i) reps.emplace_back(verts_[i].dir.x(), i);
    std::sort(reps.begin(), reps.end());
    for (std::size_t i = 0; i < reps.size(); ++i)
      for (std::size_t j = i + 1; j < reps.size(); ++j) {
        if (reps[j].first - reps[i].first > eps_.vertex_merge) break;
        if (norm(verts_[reps[i].second].dir.vec() - verts_[reps[j].second].dir.vec()) < eps_.vertex_merge)
          throw Error(ErrorKind::NumericallyUnstableVertex, "distinct boundary points project together");
      }

    for (auto& s : seqs) {
      std::vector<int> clean;
      for (int v : s) {
        v = snap_.find(v);
        if (clean.empty() || clean.back() != v) clean.push_back(v);
      }
      while (clean.size() > 1 && clean.back() == clean.front()) clean.pop_back();
      if (clean.size() == 2)
        throw Error(ErrorKind::DegenerateProjection, "loop projects onto a single arc");
      if (clean.size() < 2) clean.clear();  // collapsed to a point: no area
      s = std::move(clean);
    }
  }

  int arr_vertex(int raw) {
    if (compact_.size() < verts_.size()) compact_.resize(verts_.size(), -1);
    if (compact_[raw] < 0) {
      compact_[raw] = static_cast<int>(dirs_.size());
      dirs_.push_back(verts_[raw].dir);
    }
    return compact_[raw];
  }

  void add_arcs(const std::vector<int>& seq, int loop) {
    for (std::size_t i = 0; i < seq.size(); ++i) {
      const int a = arr_vertex(seq[i]);
      const int b = arr_vertex(seq[(i + 1) % seq.size()]);
      const Vec3 n = cross(dirs_[a], dirs_[b]);
      arcs_.push_back({a, b, UnitVec3::normalize(n), loop, angle_between(dirs_[a], dirs_[b]), {}});
    }
  }

  void test_pair(int i, int j) {
    RawArc& A = arcs_[i];
    RawArc& B = arcs_[j];
    const Vec3 nx = cross(A.pole, B.pole);
    const bool cocircular = norm(nx) < eps_.arc_plane;
    const int shared = (A.a == B.a) + (A.a == B.b) + (A.b == B.a) + (A.b == B.b);
    if (shared > 0) {
      if (!cocircular) return;  // the circles' other meeting point is antipodal
      if (shared >= 2) throw Error(ErrorKind::OverlappingArcs, "repeated arc");
      const int v = (A.a == B.a || A.a == B.b) ? A.a : A.b;
      const Vec3& dv = dirs_[v];
      const Vec3& oa = dirs_[A.a == v ? A.b : A.a];
      const Vec3& ob = dirs_[B.a == v ? B.b : B.a];
      if (dot(oa - dot(oa, dv) * dv, ob - dot(ob, dv) * dv) > 0)
        throw Error(ErrorKind::OverlappingArcs, "arcs overlap along a great circle");
      return;
    }
    if (cocircular) {
      arc_intersections(GreatArc{dirs_[A.a], dirs_[A.b], A.pole},
                        GreatArc{dirs_[B.a], dirs_[B.b], B.pole}, eps_);
      return;
    }
    const Vec3 x = nx / norm(nx);
    const double tol = eps_.vertex_merge;
    for (const Vec3& c : {x, -x}) {
      const double s = std::min({sine_from(dirs_[A.a], c, A.pole), sine_from(c, dirs_[A.b], A.pole),
                                 sine_from(dirs_[B.a], c, B.pole), sine_from(c, dirs_[B.b], B.pole)});
      if (s > tol) {
        const int v = static_cast<int>(dirs_.size());
        dirs_.push_back(UnitVec3::from_unit(c));
        A.splits.emplace_back(angle_between(dirs_[A.a], c), v);
        B.splits.emplace_back(angle_between(dirs_[B.a], c), v);
      } else if (s > -tol) {
        throw Error(ErrorKind::NumericallyUnstableVertex, "crossing too close to an arc endpoint");
      }
    }
  }

  void find_crossings() {
    const int n = static_cast<int>(arcs_.size());
    std::vector<Aabb> boxes(n);
    Aabb all;
    for (int i = 0; i < n; ++i) {
      Aabb b;
      b.extend(dirs_[arcs_[i].a]);
      b.extend(dirs_[arcs_[i].b]);
      boxes[i] = b.inflated(1.0 - std::cos(0.5 * arcs_[i].length) + 2 * eps_.vertex_merge);
      all.extend(b.center());
    }
    // Sweep along the axis where the arcs are most spread out.
    const Vec3 spread = all.max_corner - all.min_corner;
    const int ax = spread.x >= spread.y && spread.x >= spread.z ? 0 : (spread.y >= spread.z ? 1 : 2);
    const int a1 = (ax + 1) % 3, a2 = (ax + 2) % 3;
    std::vector<std::pair<double, int>> order(n);
    for (int i = 0; i < n; ++i) order[i] = {boxes[i].min_corner[ax], i};
    std::sort(order.begin(), order.end());
    std::vector<int> active;
    for (const auto& [lo, i] : order) {
      const Aabb& bi = boxes[i];
      std::erase_if(active, [&](int j) { return boxes[j].max_corner[ax] < lo; });
      for (int j : active) {
        const Aabb& bj = boxes[j];
        if (bi.min_corner[a1] > bj.max_corner[a1] || bj.min_corner[a1] > bi.max_corner[a1] ||
            bi.min_corner[a2] > bj.max_corner[a2] || bj.min_corner[a2] > bi.max_corner[a2])
          continue;
        test_pair(std::min(i, j), std::max(i, j));
      }
      active.push_back(i);
    }
  }

  void build_half_arcs(SphericalArrangement& arr) {
    arr.vertices = dirs_;
    arr.half_arcs.reserve(2 * arcs_.size() + 4 * dirs_.size());
    for (auto& A : arcs_) {
      std::sort(A.splits.begin(), A.splits.end());
      std::vector<int> chain{A.a};
      double prev = 0;
      for (const auto& [t, v] : A.splits) {
        if (t - prev < eps_.vertex_merge)
          throw Error(ErrorKind::NumericallyUnstableVertex, "arrangement vertices collapse");
        chain.push_back(v);
        prev = t;
      }
      if (A.length - prev < eps_.vertex_merge && !A.splits.empty())
        throw Error(ErrorKind::NumericallyUnstableVertex, "arrangement vertices collapse");
      chain.push_back(A.b);
      for (std::size_t k = 0; k + 1 < chain.size(); ++k) {
        const int o = chain[k], t = chain[k + 1];
        const int h = static_cast<int>(arr.half_arcs.size());
        const double len = angle_between(dirs_[o], dirs_[t]);
        HalfArc fwd;
        fwd.origin = o, fwd.target = t, fwd.pole = A.pole, fwd.twin = h + 1;
        fwd.loop = A.loop, fwd.forward = true, fwd.length = len;
        HalfArc rev = fwd;
        rev.origin = t, rev.target = o, rev.pole = -A.pole, rev.twin = h, rev.forward = false;
        arr.half_arcs.push_back(fwd);
        arr.half_arcs.push_back(rev);
      }
    }
  }

  void trace(SphericalArrangement& arr) {
    auto& H = arr.half_arcs;
    const int nv = static_cast<int>(arr.vertices.size());
    if (H.empty()) {
      Face f;
      f.area = 4 * kPi;
      f.interior_point = UnitVec3::from_unit({0, 0, 1});
      arr.faces.push_back(f);
      arr.components = 0;
      return;
    }

    // Outgoing half-arcs at each vertex, counter-clockwise seen from outside.
    // With two of them the order is immaterial.
    std::vector<std::vector<std::pair<double, int>>> out(nv);
    for (int h = 0; h < static_cast<int>(H.size()); ++h) out[H[h].origin].emplace_back(0.0, h);
    std::vector<int> slot(H.size());
    for (int v = 0; v < nv; ++v) {
      auto& fan = out[v];
      if (fan.size() > 2) {
        const Vec3& dv = arr.vertices[v];
        const Vec3 e1 = any_orthogonal(dv);
        const Vec3 e2 = cross(dv, e1);
        for (auto& [angle, h] : fan) {
          const Vec3 t = tangent(H[h].pole, dv);
          angle = std::atan2(dot(t, e2), dot(t, e1));
        }
        std::sort(fan.begin(), fan.end());
        for (std::size_t k = 0; k < fan.size(); ++k) {
          const double gap = fan[(k + 1) % fan.size()].first - fan[k].first;
          if ((k + 1 < fan.size() ? gap : gap + 2 * kPi) < 1e-12)
            throw Error(ErrorKind::OverlappingArcs, "arcs leave a vertex in the same direction");
        }
      }
      for (std::size_t k = 0; k < fan.size(); ++k) slot[fan[k].second] = static_cast<int>(k);
    }
    for (auto& h : H) {
      const auto& fan = out[h.target];
      const int k = slot[h.twin];
      h.next = fan[(k + static_cast<int>(fan.size()) - 1) % fan.size()].second;
    }

    // Boundary cycles and their Gauss-Bonnet areas.
    std::vector<std::vector<int>> cycles;
    std::vector<double> cycle_area;
    for (int h0 = 0; h0 < static_cast<int>(H.size()); ++h0) {
      if (H[h0].cycle >= 0) continue;
      const int c = static_cast<int>(cycles.size());
      std::vector<int> cyc;
      double turning = 0;
      int h = h0;
      do {
        H[h].cycle = c;
        cyc.push_back(h);
        const int n = H[h].next;
        const Vec3& v = arr.vertices[H[h].target];
        turning += turning_angle(v, tangent(H[h].pole, v), tangent(H[n].pole, v));
        h = n;
      } while (h != h0 && cyc.size() <= H.size());
      if (h != h0) throw Error(ErrorKind::NumericallyUnstableVertex, "face cycle does not close");
      cycles.push_back(std::move(cyc));
      cycle_area.push_back(2 * kPi - turning);
    }

    // Connected components of the arc graph.
    UnionFind comp(nv);
    for (const auto& h : H) comp.unite(h.origin, h.target);
    std::vector<int> comp_index(nv, -1);
    std::vector<int> vertex_comp(nv, -1);
    int ncomp_found = 0;
    for (const auto& h : H) {
      int& c = comp_index[comp.find(h.origin)];
      if (c < 0) c = ncomp_found++;
      vertex_comp[h.origin] = c;
    }
    const int ncomp = ncomp_found;
    arr.components = ncomp;
    auto& edge_comp = arr.edge_component;
    edge_comp.resize(H.size() / 2);
    for (std::size_t e = 0; e < edge_comp.size(); ++e) edge_comp[e] = vertex_comp[H[2 * e].origin];

    UnionFind same_face(cycles.size());
    if (ncomp > 1) {
      std::vector<std::vector<int>> comp_vertices(ncomp);
      for (int v = 0; v < nv; ++v)
        if (vertex_comp[v] >= 0) comp_vertices[vertex_comp[v]].push_back(v);
      // contain[k][l]: cycle of component k whose side holds component l.
      std::vector<std::vector<int>> contain(ncomp, std::vector<int>(ncomp, -1));
      for (int k = 0; k < ncomp; ++k)
        for (int l = 0; l < ncomp; ++l) {
          if (k == l) continue;
          for (int v : comp_vertices[l]) {
            try {
              const int h = arr.locate_half_arc(arr.vertices[v], k);
              if (h >= 0) contain[k][l] = H[h].cycle;
              break;
            } catch (const Error& err) {
              if (err.kind() != ErrorKind::OnBoundary) throw;
            }
          }
          if (contain[k][l] < 0)
            throw Error(ErrorKind::NumericallyUnstableVertex, "cannot nest boundary components");
        }
      for (int k = 0; k < ncomp; ++k)
        for (int l = k + 1; l < ncomp; ++l) {
          bool together = true;
          for (int m = 0; m < ncomp && together; ++m)
            if (m != k && m != l && contain[m][k] != contain[m][l]) together = false;
          if (together) same_face.unite(contain[k][l], contain[l][k]);
        }
    }

    std::vector<int> face_index(cycles.size(), -1);
    for (int c = 0; c < static_cast<int>(cycles.size()); ++c) {
      int& fi = face_index[same_face.find(c)];
      if (fi < 0) {
        fi = static_cast<int>(arr.faces.size());
        arr.faces.emplace_back();
      }
      Face& f = arr.faces[fi];
      for (int h : cycles[c]) H[h].face = fi;
      f.boundary_cycles.push_back(std::move(cycles[c]));
      f.area += cycle_area[c];
    }
    for (auto& f : arr.faces) f.area -= 4 * kPi * (static_cast<double>(f.boundary_cycles.size()) - 1);
    if (interior_)
      for (int f = 0; f < static_cast<int>(arr.faces.size()); ++f)
        arr.faces[f].interior_point = interior_point(arr, f);
  }

  Vec3 center_;
  EpsilonConfig eps_;
  std::vector<ProjectedVertex> verts_;
  bool interior_;
  std::unordered_map<Vec3, int, Vec3Hash> weld_;
  UnionFind snap_;
  std::vector<int> compact_;
  std::vector<UnitVec3> dirs_;
  std::vector<RawArc> arcs_;
};

}  // namespace

double turning_angle(const Vec3& v, const Vec3& a, const Vec3& b) {
  return std::atan2(dot(v, cross(a, b)), dot(a, b));
}

GreatArc SphericalArrangement::arc(int h) const {
  const HalfArc& ha = half_arcs[h];
  return GreatArc{vertices[ha.origin], vertices[ha.target], ha.pole};
}

int SphericalArrangement::largest_face() const {
  int best = 0;
  for (int f = 1; f < static_cast<int>(faces.size()); ++f)
    if (faces[f].area > faces[best].area) best = f;
  return best;
}

int SphericalArrangement::locate_half_arc(const UnitVec3& qu, int component) const {
  const Vec3& q = qu.vec();
  const double tol = eps.on_boundary;
  const int ne = edge_count();
  std::vector<int> kept;
  std::vector<double> score;
  for (int e = 0; e < ne; ++e) {
    if (component >= 0 && edge_component[e] != component) continue;
    const HalfArc& h = half_arcs[2 * e];
    const Vec3& s = vertices[h.origin];
    const Vec3& t = vertices[h.target];
    const double d = dot(q, h.pole.vec());
    if (std::abs(d) <= tol && sine_from(s, q, h.pole) >= -tol && sine_from(q, t, h.pole) >= -tol)
      throw Error(ErrorKind::OnBoundary, "point lies on a boundary arc");
    if (norm(q - s) <= tol || norm(q - t) <= tol)
      throw Error(ErrorKind::OnBoundary, "point lies on a boundary vertex");
    kept.push_back(e);
    score.push_back(std::abs(d));
  }
  if (kept.empty()) return -1;

  constexpr double kVertexTol = 1e-11;
  for (int attempt = 0; attempt < 16 && attempt < static_cast<int>(kept.size()); ++attempt) {
    const auto best_it = std::max_element(score.begin(), score.end());
    const int target = kept[best_it - score.begin()];
    *best_it = -1;  // not again
    const Vec3 m = arc(2 * target).midpoint();
    Vec3 N = cross(q, m);
    if (norm(N) < 1e-6) continue;
    N = N / norm(N);

    double best_dist = angle_between(q, m);
    int best_edge = target;
    Vec3 best_point = m;
    bool ambiguous = false;
    for (int e : kept) {
      if (e == target) continue;
      const HalfArc& h = half_arcs[2 * e];
      const Vec3& s = vertices[h.origin];
      const Vec3& t = vertices[h.target];
      const Vec3 nx = cross(N, h.pole.vec());
      if (norm(nx) < 1e-12) {
        // Arc on the walk's great circle: only harmless if it misses the walk.
        if (sine_from(q, s, N) >= -kVertexTol && sine_from(s, m, N) >= -kVertexTol) ambiguous = true;
        if (sine_from(q, t, N) >= -kVertexTol && sine_from(t, m, N) >= -kVertexTol) ambiguous = true;
        if (ambiguous) break;
        continue;
      }
      const Vec3 x = nx / norm(nx);
      for (const Vec3& c : {x, -x}) {
        if (std::min(sine_from(q, c, N), sine_from(c, m, N)) < -kVertexTol) continue;
        const double sa = std::min(sine_from(s, c, h.pole), sine_from(c, t, h.pole));
        if (sa < -kVertexTol) continue;
        if (sa <= kVertexTol) {
          ambiguous = true;
          break;
        }
        const double dist = angle_between(q, c);
        if (dist < best_dist) {
          best_dist = dist;
          best_edge = e;
          best_point = c;
        }
      }
      if (ambiguous) break;
    }
    if (ambiguous) continue;
    const Vec3 motion = cross(N, best_point);
    return dot(motion, half_arcs[2 * best_edge].pole.vec()) > 0 ? 2 * best_edge + 1 : 2 * best_edge;
  }
  throw Error(ErrorKind::OnBoundary, "point location walk is ambiguous");
}

int SphericalArrangement::locate(const UnitVec3& q) const {
  const int h = locate_half_arc(q);
  return h < 0 ? 0 : half_arcs[h].face;
}

double face_area(const SphericalArrangement& arr, const Face& face) {
  if (face.boundary_cycles.empty()) return 4 * kPi;
  double area = 0;
  for (const auto& cyc : face.boundary_cycles) {
    double turning = 0;
    for (int h : cyc) {
      const HalfArc& a = arr.half_arcs[h];
      const HalfArc& n = arr.half_arcs[a.next];
      const Vec3& v = arr.vertices[a.target];
      turning += turning_angle(v, tangent(a.pole, v), tangent(n.pole, v));
    }
    area += 2 * kPi - turning;
  }
  return area - 4 * kPi * (static_cast<double>(face.boundary_cycles.size()) - 1);
}

namespace {

// Angular distance from x to the nearest arc of the arrangement.
double arc_clearance(const SphericalArrangement& arr, const Vec3& x) {
  double best = kPi;
  double best_sin = 1.0;
  for (std::size_t h = 0; h < arr.half_arcs.size(); h += 2) {
    const HalfArc& a = arr.half_arcs[h];
    const Vec3& n = a.pole.vec();
    const double s = dot(n, x);
    if (std::abs(s) >= best_sin) continue;
    const Vec3& p = arr.vertices[a.origin].vec();
    const Vec3& q = arr.vertices[a.target].vec();
    const Vec3 foot = x - s * n;
    double d;
    if (dot(cross(p, foot), n) >= 0 && dot(cross(foot, q), n) >= 0)
      d = std::asin(std::min(1.0, std::abs(s)));
    else
      d = std::min(angle_between(x, p), angle_between(x, q));
    if (d < best) {
      best = d;
      best_sin = best < kPi / 2 ? std::sin(best) : 1.0;
    }
  }
  return best;
}

}  // namespace

UnitVec3 interior_point(const SphericalArrangement& arr, int face_id) {
  const Face& face = arr.faces.at(face_id);
  if (face.boundary_cycles.empty()) return UnitVec3::from_unit({0, 0, 1});

  auto inside = [&](const Vec3& x) {
    try {
      return arr.locate(UnitVec3::normalize(x)) == face_id;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::OnBoundary) return false;
      throw;
    }
  };

  // Candidates step off sampled boundary arcs into the face; the one farthest
  // from every arc wins, so seed rays stay clear of the discretized boundary.
  struct Candidate {
    Vec3 x;
    double clearance;
  };
  std::vector<Candidate> cands;
  auto add = [&](int h, double delta) {
    const Vec3 m = arr.arc(h).midpoint().vec();
    const Vec3 x = std::cos(delta) * m + std::sin(delta) * arr.half_arcs[h].pole.vec();
    cands.push_back({x, arc_clearance(arr, x)});
  };
  int longest = face.boundary_cycles.front().front();
  for (const auto& cyc : face.boundary_cycles)
    for (int h : cyc)
      if (arr.half_arcs[h].length > arr.half_arcs[longest].length) longest = h;
  const double deltas[] = {0.6, 0.25, 0.1, 0.04, 0.015, 0.005};
  for (const auto& cyc : face.boundary_cycles) {
    const std::size_t picks = std::min<std::size_t>(cyc.size(), 10);
    for (std::size_t k = 0; k < picks; ++k)
      for (double d : deltas) add(cyc[k * cyc.size() / picks], d);
  }
  for (double d : deltas) add(longest, d);
  std::stable_sort(cands.begin(), cands.end(),
                   [](const Candidate& a, const Candidate& b) { return a.clearance > b.clearance; });
  for (const auto& c : cands)
    if (c.clearance > 0 && inside(c.x)) return UnitVec3::normalize(c.x);

  const HalfArc& h = arr.half_arcs[longest];
  const Vec3 m = arr.arc(longest).midpoint().vec();
  double delta = std::min(0.1, 0.25 * h.length);
  for (int k = 0; k <= 10; ++k, delta *= 0.5) {
    const Vec3 x = std::cos(delta) * m + std::sin(delta) * h.pole.vec();
    if (inside(x)) return UnitVec3::normalize(x);
  }

  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + static_cast<unsigned>(face_id));
  std::normal_distribution<double> g;
  for (int k = 0; k < 1000; ++k) {
    const Vec3 x{g(rng), g(rng), g(rng)};
    if (norm(x) > 1e-6 && inside(x)) return UnitVec3::normalize(x);
  }
  throw Error(ErrorKind::InteriorPointFailure, "no interior point found");
}

SphericalArrangement build_arrangement(const Vec3& center, const std::vector<BoundaryLoop>& loops,
                                       const EpsilonConfig& eps, bool with_interior_points) {
  return Builder(center, eps, with_interior_points).run(loops);
}

}  // namespace gwn
