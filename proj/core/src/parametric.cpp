#include "gwn/parametric.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "gwn/errors.hpp"

namespace gwn {

namespace {

struct UV {
  double u, v;
};

std::vector<UV> domain_corners(ParamDomain d) {
  if (d == ParamDomain::Simplex) return {{0, 0}, {1, 0}, {0, 1}};
  return {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
}

std::vector<BoundaryLoop> sample_boundary(const ParametricSurface& patch,
                                          const std::vector<int>& per_edge) {
  const auto corners = domain_corners(patch.domain());
  BoundaryLoop loop;
  for (std::size_t e = 0; e < corners.size(); ++e) {
    const UV a = corners[e];
    const UV b = corners[(e + 1) % corners.size()];
    const int n = per_edge[e];
    for (int k = 0; k < n; ++k) {
      const double s = static_cast<double>(k) / n;
      auto [u, v] = clamp_to_domain(patch.domain(), a.u + s * (b.u - a.u), a.v + s * (b.v - a.v));
      loop.points.push_back(patch.sample(u, v).point);
    }
  }
  return {std::move(loop)};
}

}  // namespace

std::pair<double, double> clamp_to_domain(ParamDomain domain, double u, double v) {
  u = std::clamp(u, 0.0, 1.0);
  v = std::clamp(v, 0.0, 1.0);
  if (domain == ParamDomain::Simplex && u + v > 1.0) {
    const double excess = 0.5 * (u + v - 1.0);
    u = std::max(0.0, u - excess);
    v = std::max(0.0, v - excess);
    // One of them may have hit zero; put the remainder on the other.
    if (u + v > 1.0) {
      if (u == 0.0) v = 1.0;
      else u = 1.0 - v;
    }
  }
  return {u, v};
}

std::vector<BoundaryLoop> patch_boundary(const ParametricSurface& patch, int samples_per_edge) {
  if (samples_per_edge < 2) throw Error(ErrorKind::InvalidInput, "samples_per_edge must be >= 2");
  const auto edges = domain_corners(patch.domain()).size();
  return sample_boundary(patch, std::vector<int>(edges, samples_per_edge - 1));
}

std::vector<BoundaryLoop> patch_boundary_segments(const ParametricSurface& patch,
                                                  int total_segments) {
  const int edges = static_cast<int>(domain_corners(patch.domain()).size());
  if (total_segments < edges)
    throw Error(ErrorKind::InvalidInput, "boundary_segments must be at least the edge count");
  // The remainder is spread palindromically: swapping u and v reverses the
  // edge order, so a flipped patch then samples the same points.
  std::vector<int> per_edge(edges, total_segments / edges);
  int rest = total_segments % edges;
  if (rest % 2 == 1 && edges % 2 == 1) {
    ++per_edge[edges / 2];
    --rest;
  }
  for (int e = 0; rest >= 2; ++e, rest -= 2) {
    ++per_edge[e];
    ++per_edge[edges - 1 - e];
  }
  if (rest == 1) ++per_edge[0];
  return sample_boundary(patch, per_edge);
}

std::pair<double, double> ParametricSurface::clamp_param(double u, double v) const {
  auto [cu, cv] = clamp_to_domain(domain(), u, v);
  const double m = domain_margin();
  if (m > 0) {
    if (domain() == ParamDomain::UnitSquare) {
      cu = std::clamp(cu, m, 1.0 - m);
      cv = std::clamp(cv, m, 1.0 - m);
    } else {
      cu = std::max(cu, m);
      cv = std::max(cv, m);
      const double excess = cu + cv - (1.0 - m);
      if (excess > 0) cu -= 0.5 * excess, cv -= 0.5 * excess;
    }
  }
  return {cu, cv};
}

std::pair<Vec3, UnitVec3> ParametricSurface::evaluate(double u, double v) const {
  const PatchSample s = sample(u, v);
  const Vec3 n = cross(s.du, s.dv);
  const double scale = norm(s.du) * norm(s.dv);
  if (!(norm(n) > 1e-14 * scale) || scale == 0.0)
    throw Error(ErrorKind::DegenerateNormal, "parallel partial derivatives");
  return {s.point, UnitVec3::normalize(n)};
}

std::vector<BoundaryLoop> ParametricSurface::boundary_loops() const {
  if (opts_.boundary_segments > 0) return patch_boundary_segments(*this, opts_.boundary_segments);
  return patch_boundary(*this, opts_.samples_per_edge);
}

int ParametricSurface::seed_count(double t_span, double diag, bool may_self_intersect) {
  int n = 2;
  if (diag > 0 && t_span > 0)
    n = std::max(2, static_cast<int>(std::ceil(30.0 * t_span / diag)));
  return may_self_intersect ? 4 * n : n;
}

void ParametricSurface::init_seed_grid(int resolution) {
  seed_grid_.clear();
  for (int i = 0; i <= resolution; ++i) {
    for (int j = 0; j <= resolution; ++j) {
      if (domain() == ParamDomain::Simplex && i + j > resolution) continue;
      auto [cu, cv] = clamp_param(static_cast<double>(i) / resolution,
                                  static_cast<double>(j) / resolution);
      seed_grid_.push_back({cu, cv, sample(cu, cv).point});
    }
  }
}

bool ParametricSurface::solve_root(const Ray& r, double u0, double v0, double t0, double t_lo,
                                   double t_hi, ParamHit& out) const {
  const Vec3& d = r.direction.vec();
  auto [u, v] = clamp_param(u0, v0);
  double t = t0;
  PatchSample s = sample(u, v);
  Vec3 F = s.point - r.at(t);
  double f2 = dot(F, F);
  double lambda = 1e-6;
  const double diag = std::max(1.0, solve_bounds().diag());
  const double stop = 1e-15 * diag;

  for (int it = 0; it < 100 && std::sqrt(f2) > stop; ++it) {
    Eigen::Matrix3d J;
    J << s.du.x, s.dv.x, -d.x, s.du.y, s.dv.y, -d.y, s.du.z, s.dv.z, -d.z;
    const Eigen::Matrix3d JtJ = J.transpose() * J;
    const Eigen::Vector3d g = J.transpose() * Eigen::Vector3d(F.x, F.y, F.z);
    bool accepted = false;
    double step = 0;
    while (lambda < 1e12) {
      Eigen::Matrix3d A = JtJ;
      for (int k = 0; k < 3; ++k) A(k, k) += lambda * std::max(JtJ(k, k), 1e-30);
      const Eigen::Vector3d delta = A.ldlt().solve(-g);
      if (!delta.allFinite()) {
        lambda *= 10;
        continue;
      }
      auto [un, vn] = clamp_param(u + delta(0), v + delta(1));
      const double tn = t + delta(2);
      const PatchSample sn = sample(un, vn);
      const Vec3 Fn = sn.point - r.at(tn);
      const double fn2 = dot(Fn, Fn);
      if (fn2 < f2) {
        step = std::abs(un - u) + std::abs(vn - v) + std::abs(tn - t) / diag;
        u = un, v = vn, t = tn, s = sn, F = Fn, f2 = fn2;
        lambda = std::max(lambda * 0.1, 1e-15);
        accepted = true;
        break;
      }
      lambda *= 10;
    }
    if (!accepted || step < 1e-16) break;
  }

  if (!(std::sqrt(f2) < opts_.residual * diag)) return false;
  if (t < t_lo || t > t_hi) return false;

  out.u = u;
  out.v = v;
  IntersectionRecord& rec = out.record;
  rec.t = t;
  rec.point = s.point;
  const Vec3 n = cross(s.du, s.dv);
  const double scale = norm(s.du) * norm(s.dv);
  if (!(norm(n) > 1e-14 * scale) || scale == 0.0) {
    rec.normal = UnitVec3();
    rec.sign = 0;
    rec.tangency = true;
  } else {
    rec.normal = UnitVec3::normalize(n);
    const double dn = dot(d, rec.normal.vec());
    rec.sign = dn >= 0 ? 1 : -1;
    rec.tangency = std::abs(dn) <= opts_.tangent_eps;
  }
  return true;
}

std::vector<ParamHit> ParametricSurface::intersect_params(const Ray& r, double t_lo,
                                                          double t_hi) const {
  std::vector<ParamHit> hits;
  const Aabb box = solve_bounds();
  if (!box.valid()) return hits;
  const double diag = box.diag();
  const auto clip = ray_aabb_clip(r, box.inflated(1e-9 * std::max(1.0, diag)));
  if (!clip) return hits;
  const double a = std::max(clip->t_min, t_lo);
  const double b = std::min(clip->t_max, t_hi);
  if (!(a <= b)) return hits;

  const int seeds = seed_count(b - a, diag, opts_.may_self_intersect);
  const double h = (b - a) / seeds;
  const Vec3& d = r.direction.vec();
  for (int k = 0; k < seeds; ++k) {
    const double ta = a + k * h;
    const double tb = ta + h;
    // Grid samples nearest to this piece of the ray, tried in order until one
    // converges; a single start can settle on the domain edge beside a root.
    constexpr int kStarts = 3;
    std::array<double, kStarts> best;
    best.fill(std::numeric_limits<double>::infinity());
    std::array<const GridSample*, kStarts> pick{};
    std::array<double, kStarts> t0{};
    for (const auto& g : seed_grid_) {
      double tp = std::clamp(dot(g.point - r.origin, d), ta, tb);
      const Vec3 diff = g.point - r.at(tp);
      double dist = dot(diff, diff);
      const GridSample* cur = &g;
      for (int j = 0; j < kStarts; ++j) {
        if (dist < best[j]) {
          std::swap(dist, best[j]);
          std::swap(cur, pick[j]);
          std::swap(tp, t0[j]);
          if (!cur) break;
        }
      }
    }
    solver_calls_.fetch_add(1, std::memory_order_relaxed);
    for (int j = 0; j < kStarts && pick[j]; ++j) {
      ParamHit hit;
      if (solve_root(r, pick[j]->u, pick[j]->v, t0[j], t_lo, t_hi, hit)) {
        hits.push_back(hit);
        break;
      }
    }
  }

  std::sort(hits.begin(), hits.end(),
            [](const ParamHit& x, const ParamHit& y) { return x.record.t < y.record.t; });
  std::vector<ParamHit> unique;
  for (const auto& hit : hits) {
    if (!unique.empty() && std::abs(hit.record.t - unique.back().record.t) < opts_.dedup) {
      // Keep the tangency flag if any copy saw one.
      unique.back().record.tangency = unique.back().record.tangency || hit.record.tangency;
      continue;
    }
    unique.push_back(hit);
  }
  return unique;
}

std::vector<IntersectionRecord> ParametricSurface::intersect(const Ray& r, double t_lo,
                                                             double t_hi) const {
  std::vector<IntersectionRecord> out;
  for (auto& h : intersect_params(r, t_lo, t_hi)) out.push_back(h.record);
  return out;
}

}  // namespace gwn
