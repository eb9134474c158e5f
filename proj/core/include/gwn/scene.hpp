#pragma once

#include <memory>
#include <vector>

#include "gwn/epsilon.hpp"
#include "gwn/surface.hpp"

namespace gwn {

/// Patches glued along shared, oppositely oriented boundary edges. The
/// winding number of a scene is the sum over its groups.
struct PatchGroup {
  std::vector<int> patches;
  std::vector<BoundaryLoop> loops;  ///< boundary after interior edges cancel
};

class Scene {
 public:
  Scene() = default;
  explicit Scene(std::vector<std::shared_ptr<const Surface>> patches, EpsilonConfig eps = {});

  const std::vector<std::shared_ptr<const Surface>>& patches() const { return patches_; }
  const std::vector<PatchGroup>& groups() const { return groups_; }
  /// Every boundary loop of every group.
  std::vector<BoundaryLoop> loops() const;
  const Aabb& bounds() const { return bounds_; }
  double diagonal() const { return bounds_.valid() ? bounds_.diag() : 0.0; }
  const EpsilonConfig& epsilons() const { return eps_; }

  /// Hits of every patch in a group with t in [t_lo, t_hi], sorted by t.
  std::vector<IntersectionRecord> intersect_group(int group, const Ray& r, double t_lo = 0.0,
                                                  double t_hi = INFINITY) const;

  Scene flipped() const;
  Scene transformed(const RigidTransform& xf) const;

 private:
  void build_groups();

  std::vector<std::shared_ptr<const Surface>> patches_;
  std::vector<std::vector<BoundaryLoop>> patch_loops_;
  std::vector<PatchGroup> groups_;
  Aabb bounds_;
  EpsilonConfig eps_;
};

}  // namespace gwn
