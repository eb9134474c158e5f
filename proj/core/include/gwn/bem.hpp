#pragma once

#include <Eigen/Dense>
#include <array>
#include <atomic>
#include <cstdint>
#include <functional>
#include <memory>

#include "gwn/parametric.hpp"

namespace gwn {

struct Vec2 {
  double x = 0, y = 0;
  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
  friend double norm(Vec2 a) { return std::sqrt(dot(a, a)); }
};

/// Straight constant element on the boundary of [0,1]^2, traversed counter-clockwise.
struct BemElement {
  Vec2 a, b;
  Vec2 mid;
  Vec2 normal;  ///< outward
  double length = 0;
};

/// `count` elements spread over the four sides, first element starting at (0,0).
std::vector<BemElement> square_elements(int count);

/// -(1/2pi) ln |xi - eta|. Throws SingularPoint when the points coincide.
double fundamental_solution(Vec2 xi, Vec2 eta);

/// Collocation matrices at element midpoints. H carries the boundary jump
/// on its diagonal, so the system reads G q = H f.
struct BemSystem {
  Eigen::MatrixXd G;
  Eigen::MatrixXd H;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
};

BemSystem assemble(const std::vector<BemElement>& elements, int order = 16);

/// Solves for the flux of each coordinate with one factorization of G.
/// Throws SingularSystem.
std::vector<Vec3> solve_neumann(BemSystem& system, const std::vector<Vec3>& dirichlet);

/// Total number of dense factorizations performed in this process.
std::uint64_t bem_dense_solves();

/// Harmonic map of [0,1]^2 whose boundary values follow a closed 3D loop.
class BemPatch {
 public:
  /// The loop is laid onto the boundary of the square proportionally to arc
  /// length, starting at (0,0) and running counter-clockwise.
  BemPatch(const BoundaryLoop& loop, int elements, int order = 16);
  /// Boundary data from a function on the square's boundary.
  static std::shared_ptr<BemPatch> from_boundary_function(const std::function<Vec3(Vec2)>& g,
                                                          int elements, int order = 16,
                                                          int loop_samples = 200);

  const std::vector<BemElement>& elements() const { return elements_; }
  const std::vector<Vec3>& dirichlet() const { return dirichlet_; }
  const std::vector<Vec3>& neumann() const { return neumann_; }
  const BoundaryLoop& loop() const { return loop_; }
  int order() const { return order_; }
  const BemSystem& system() const { return system_; }

 private:
  BemPatch() = default;
  void solve();

  BoundaryLoop loop_;
  std::vector<BemElement> elements_;
  std::vector<Vec3> dirichlet_;
  std::vector<Vec3> neumann_;
  BemSystem system_;
  int order_ = 16;
};

/// Representation formula at an interior point. Throws OutsideDomain unless
/// xi lies strictly inside the square.
Vec3 eval_surface(const BemPatch& patch, Vec2 xi);
/// Value together with d/du and d/dv.
PatchSample eval_partials(const BemPatch& patch, Vec2 xi);

/// Ray-intersectable view of a solved patch. Flipping and rigid motion share
/// the solved patch instead of solving again.
class BemSurface final : public ParametricSurface {
 public:
  explicit BemSurface(std::shared_ptr<const BemPatch> patch, ParametricOptions opts = {});

  std::string kind() const override { return "bem"; }
  ParamDomain domain() const override { return ParamDomain::UnitSquare; }
  PatchSample sample(double u, double v) const override;
  Aabb bounds() const override { return bounds_; }
  std::vector<BoundaryLoop> boundary_loops() const override;
  std::unique_ptr<Surface> flipped() const override;
  std::unique_ptr<Surface> transformed(const RigidTransform& xf) const override;

  const BemPatch& patch() const { return *patch_; }

 protected:
  Aabb solve_bounds() const override;
  double domain_margin() const override { return 1e-6; }

 private:
  BemSurface(std::shared_ptr<const BemPatch> patch, ParametricOptions opts, bool swap,
             RigidTransform xf);

  std::shared_ptr<const BemPatch> patch_;
  bool swap_uv_ = false;
  RigidTransform xf_;
  Aabb bounds_;
};

std::vector<IntersectionRecord> intersect_ray_bem(const BemSurface& patch, const Ray& r);

}  // namespace gwn
