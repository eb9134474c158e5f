#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "gwn/surface.hpp"

namespace gwn {

struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

/// Boundary edges (used by exactly one triangle) chained into closed loops
/// that follow the adjacent triangle's winding.
std::vector<BoundaryLoop> extract_mesh_boundary(const TriangleMesh& mesh);

/// Flip triangles so that every interior edge is traversed once in each
/// direction. The lowest-index triangle of each connected component keeps
/// its winding.
TriangleMesh orient_consistently(const TriangleMesh& mesh);

/// Median-split bounding volume hierarchy over triangle centroids.
class TriangleBvh {
 public:
  struct Node {
    Aabb box;
    int left = -1;
    int right = -1;
    int first = 0;
    int count = 0;
  };

  TriangleBvh() = default;
  explicit TriangleBvh(const TriangleMesh& mesh, int leaf_size = 4);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<int>& order() const { return order_; }

  template <class Visit>
  void traverse(const Ray& r, double t_lo, double t_hi, Visit&& visit) const;

 private:
  int build(const TriangleMesh& mesh, const std::vector<Vec3>& centroids, int first, int count,
            int leaf_size);

  std::vector<Node> nodes_;
  std::vector<int> order_;
};

class MeshSurface final : public Surface {
 public:
  /// Validates indices and orientation consistency, builds the BVH and
  /// extracts the boundary.
  explicit MeshSurface(TriangleMesh mesh, double tangent_eps = 1e-12);

  std::string kind() const override { return "mesh"; }
  Aabb bounds() const override { return bounds_; }
  std::vector<BoundaryLoop> boundary_loops() const override { return boundary_; }
  std::vector<IntersectionRecord> intersect(const Ray& r, double t_lo,
                                            double t_hi) const override;
  using Surface::intersect;
  std::unique_ptr<Surface> flipped() const override;
  std::unique_ptr<Surface> transformed(const RigidTransform& xf) const override;

  const TriangleMesh& mesh() const { return mesh_; }
  const TriangleBvh& bvh() const { return bvh_; }
  double tangent_epsilon() const { return tangent_eps_; }

 private:
  TriangleMesh mesh_;
  TriangleBvh bvh_;
  std::vector<BoundaryLoop> boundary_;
  Aabb bounds_;
  double tangent_eps_;
};

template <class Visit>
void TriangleBvh::traverse(const Ray& r, double t_lo, double t_hi, Visit&& visit) const {
  if (nodes_.empty()) return;
  const Vec3& d = r.direction.vec();
  const Vec3 inv{1.0 / d.x, 1.0 / d.y, 1.0 / d.z};
  int stack[64];
  int top = 0;
  stack[top++] = 0;
  while (top > 0) {
    const Node& n = nodes_[stack[--top]];
    double t0 = t_lo;
    double t1 = t_hi;
    bool hit = true;
    for (int i = 0; i < 3 && hit; ++i) {
      if (d[i] == 0.0) {
        hit = r.origin[i] >= n.box.min_corner[i] && r.origin[i] <= n.box.max_corner[i];
        continue;
      }
      double ta = (n.box.min_corner[i] - r.origin[i]) * inv[i];
      double tb = (n.box.max_corner[i] - r.origin[i]) * inv[i];
      if (ta > tb) std::swap(ta, tb);
      t0 = ta > t0 ? ta : t0;
      t1 = tb < t1 ? tb : t1;
      hit = t0 <= t1;
    }
    if (!hit) continue;
    if (n.left < 0) {
      for (int k = 0; k < n.count; ++k) visit(order_[n.first + k]);
    } else {
      stack[top++] = n.left;
      stack[top++] = n.right;
    }
  }
}

/// All hits of r with the mesh for t in the window, ascending in t.
///
/// Edge and vertex hits are resolved by a symbolic perturbation of the ray
/// origin, so a ray through a shared edge or vertex of a consistently oriented
/// mesh is counted exactly once.
std::vector<IntersectionRecord> intersect_ray_mesh(const MeshSurface& mesh, const Ray& r,
                                                   double t_lo, double t_hi);

/// Wavefront OBJ (v/f records; polygons are fan-triangulated, 1-based and
/// negative indices supported).
TriangleMesh read_obj(const std::string& path);
void write_obj(const std::string& path, const TriangleMesh& mesh);

}  // namespace gwn
