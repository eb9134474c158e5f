#pragma once

#include <atomic>
#include <cstdint>
#include <utility>
#include <vector>

#include "gwn/surface.hpp"

namespace gwn {

enum class ParamDomain {
  Simplex,     ///< u, v >= 0, u + v <= 1
  UnitSquare,  ///< [0, 1]^2
};

struct PatchSample {
  Vec3 point;
  Vec3 du;
  Vec3 dv;
};

struct ParametricOptions {
  int samples_per_edge = 200;  ///< boundary samples per domain edge, endpoints included
  int boundary_segments = 0;   ///< when > 0, total loop segments spread over the edges
  bool may_self_intersect = false;
  double tangent_eps = 1e-12;
  double dedup = 1e-9;
  double residual = 1e-10;
};

/// Root of f(u, v) = O + t R.
struct ParamHit {
  double u = 0;
  double v = 0;
  IntersectionRecord record;
};

/// Base for surfaces given by a map f: domain -> R^3. Supplies boundary
/// sampling and the multi-start ray solver; subclasses provide f and its
/// partials.
class ParametricSurface : public Surface {
 public:
  explicit ParametricSurface(ParametricOptions opts) : opts_(opts) {}
  ParametricSurface(const ParametricSurface&) = delete;
  ParametricSurface& operator=(const ParametricSurface&) = delete;

  virtual ParamDomain domain() const = 0;
  virtual PatchSample sample(double u, double v) const = 0;

  /// Point and unit normal normalize(f_u x f_v). Throws DegenerateNormal.
  std::pair<Vec3, UnitVec3> evaluate(double u, double v) const;

  std::vector<BoundaryLoop> boundary_loops() const override;
  std::vector<IntersectionRecord> intersect(const Ray& r, double t_lo,
                                            double t_hi) const override;
  using Surface::intersect;

  /// Roots with their parameters, sorted by t.
  std::vector<ParamHit> intersect_params(const Ray& r, double t_lo, double t_hi) const;

  const ParametricOptions& options() const { return opts_; }
  /// Nearest point of the usable domain (the domain shrunk by the margin).
  std::pair<double, double> clamp_param(double u, double v) const;
  /// Number of Newton/LM solves started so far (one per seed).
  std::uint64_t solver_calls() const { return solver_calls_.load(); }

  /// Seeds for a clipped t-window of the given length, relative to the box diagonal.
  static int seed_count(double t_span, double diag, bool may_self_intersect);

 protected:
  /// Must be called by subclass constructors once sample() is usable.
  void init_seed_grid(int resolution = 16);
  /// Box used to clip rays before solving.
  virtual Aabb solve_bounds() const { return bounds(); }
  /// Solver iterates stay this far inside the domain.
  virtual double domain_margin() const { return 0.0; }

  ParametricOptions opts_;

 private:
  struct GridSample {
    double u;
    double v;
    Vec3 point;
  };
  bool solve_root(const Ray& r, double u0, double v0, double t0, double t_lo, double t_hi,
                  ParamHit& out) const;

  std::vector<GridSample> seed_grid_;
  mutable std::atomic<std::uint64_t> solver_calls_{0};
};

/// Boundary of the parameter domain mapped through f, sampled uniformly per
/// edge and oriented counter-clockwise in (u, v).
std::vector<BoundaryLoop> patch_boundary(const ParametricSurface& patch, int samples_per_edge);
/// Same loop with `total_segments` segments spread as evenly as possible over
/// the edges, symmetric under reversing the edge order whenever the count allows.
std::vector<BoundaryLoop> patch_boundary_segments(const ParametricSurface& patch,
                                                  int total_segments);

/// Nearest point of the domain.
std::pair<double, double> clamp_to_domain(ParamDomain domain, double u, double v);

}  // namespace gwn
