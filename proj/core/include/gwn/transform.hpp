#pragma once

#include <array>

#include "gwn/geometry.hpp"

namespace gwn {

/// x -> R x + t with R orthonormal.
struct RigidTransform {
  std::array<Vec3, 3> rows{Vec3{1, 0, 0}, Vec3{0, 1, 0}, Vec3{0, 0, 1}};
  Vec3 translation{};

  Vec3 apply(const Vec3& p) const { return rotate(p) + translation; }
  Vec3 rotate(const Vec3& v) const { return {dot(rows[0], v), dot(rows[1], v), dot(rows[2], v)}; }

  /// Rotation by `angle` radians about `axis` followed by translation.
  static RigidTransform axis_angle(const Vec3& axis, double angle, const Vec3& translation = {});
};

}  // namespace gwn
