#pragma once

#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "gwn/geometry.hpp"
#include "gwn/transform.hpp"

namespace gwn {

/// Closed polyline; the last point connects back to the first. Oriented by
/// the right-hand rule with respect to the owning patch's normal.
struct BoundaryLoop {
  std::vector<Vec3> points;
  int patch_id = 0;
};

/// One ray/surface crossing. sign = Sign(direction . normal) unless tangency.
struct IntersectionRecord {
  double t = 0;
  Vec3 point;
  UnitVec3 normal;
  int sign = 0;
  bool tangency = false;
};

/// Uniform contract for every surface backend.
class Surface {
 public:
  virtual ~Surface() = default;

  virtual std::string kind() const = 0;
  virtual Aabb bounds() const = 0;
  virtual std::vector<BoundaryLoop> boundary_loops() const = 0;

  /// All hits with t in [t_lo, t_hi], sorted by t.
  virtual std::vector<IntersectionRecord> intersect(const Ray& r, double t_lo,
                                                    double t_hi) const = 0;
  std::vector<IntersectionRecord> intersect(const Ray& r) const {
    return intersect(r, 0.0, INFINITY);
  }

  /// Same surface with reversed normal (and therefore reversed boundary).
  virtual std::unique_ptr<Surface> flipped() const = 0;
  virtual std::unique_ptr<Surface> transformed(const RigidTransform& xf) const = 0;
};

}  // namespace gwn
