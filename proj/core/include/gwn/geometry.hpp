#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "gwn/epsilon.hpp"

namespace gwn {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  constexpr Vec3() = default;
  constexpr Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  constexpr double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
  constexpr double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }

  constexpr Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  constexpr Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  constexpr Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

  friend constexpr Vec3 operator+(Vec3 a, const Vec3& b) { return a += b; }
  friend constexpr Vec3 operator-(Vec3 a, const Vec3& b) { return a -= b; }
  friend constexpr Vec3 operator-(const Vec3& a) { return {-a.x, -a.y, -a.z}; }
  friend constexpr Vec3 operator*(Vec3 a, double s) { return a *= s; }
  friend constexpr Vec3 operator*(double s, Vec3 a) { return a *= s; }
  friend constexpr Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
  friend constexpr bool operator==(const Vec3&, const Vec3&) = default;
};

constexpr double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
constexpr double triple(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }
inline bool is_finite(const Vec3& a) {
  return std::isfinite(a.x) && std::isfinite(a.y) && std::isfinite(a.z);
}

/// A direction on the unit sphere. Construction normalizes; the raw vector
/// is exposed read-only so arithmetic happens on Vec3.
class UnitVec3 {
 public:
  constexpr UnitVec3() : v_(0, 0, 1) {}

  /// Throws DegenerateProjection when |v| <= tiny.
  static UnitVec3 normalize(const Vec3& v, double tiny = 1e-300);
  /// Caller guarantees |v| = 1.
  static constexpr UnitVec3 from_unit(const Vec3& v) { return UnitVec3(v); }

  constexpr const Vec3& vec() const { return v_; }
  constexpr operator const Vec3&() const { return v_; }
  constexpr double x() const { return v_.x; }
  constexpr double y() const { return v_.y; }
  constexpr double z() const { return v_.z; }
  constexpr UnitVec3 operator-() const { return UnitVec3(-v_); }

 private:
  constexpr explicit UnitVec3(const Vec3& v) : v_(v) {}
  Vec3 v_;
};

struct Ray {
  Vec3 origin;
  UnitVec3 direction;

  Vec3 at(double t) const { return origin + t * direction.vec(); }
};

struct Aabb {
  Vec3 min_corner{INFINITY, INFINITY, INFINITY};
  Vec3 max_corner{-INFINITY, -INFINITY, -INFINITY};

  static Aabb of(const std::vector<Vec3>& pts);

  bool valid() const {
    return min_corner.x <= max_corner.x && min_corner.y <= max_corner.y &&
           min_corner.z <= max_corner.z;
  }
  void extend(const Vec3& p);
  void extend(const Aabb& b);
  Aabb inflated(double r) const;
  Vec3 center() const { return 0.5 * (min_corner + max_corner); }
  double diag() const { return valid() ? norm(max_corner - min_corner) : 0.0; }
  bool contains(const Vec3& p, double tol = 0.0) const;
};

/// Minor great-circle arc: runs counter-clockwise around `pole` from start to end.
struct GreatArc {
  UnitVec3 start;
  UnitVec3 end;
  UnitVec3 pole;

  /// Arc through two non-parallel unit vectors; pole = normalize(start x end).
  static GreatArc between(const UnitVec3& start, const UnitVec3& end);
  /// Arc with an explicit pole. Needed for half circles, where start and end
  /// do not determine the plane.
  static GreatArc with_pole(const UnitVec3& start, const UnitVec3& end, const UnitVec3& pole,
                            const EpsilonConfig& eps = {});

  double length() const;
  /// Angle of the point (assumed on the arc plane) measured from start around pole, in (-pi, pi].
  double angle_of(const Vec3& p) const;
  UnitVec3 point_at(double angle) const;
  UnitVec3 midpoint() const { return point_at(0.5 * length()); }
};

UnitVec3 project_to_sphere(const Vec3& center, const Vec3& x, const EpsilonConfig& eps = {});

/// Transversal crossings interior to both arcs. An intersection exactly at an
/// endpoint belongs to the arc that starts there; an arc's own end point is
/// excluded. Throws OverlappingArcs when the arcs share a great circle and overlap.
std::vector<UnitVec3> arc_intersections(const GreatArc& a, const GreatArc& b,
                                        const EpsilonConfig& eps = {});

struct RayInterval {
  double t_min;
  double t_max;
};

/// Slab clip restricted to t >= 0.
std::optional<RayInterval> ray_aabb_clip(const Ray& r, const Aabb& box);

/// Geodesic distance between unit vectors, robust near 0 and pi.
double angle_between(const Vec3& a, const Vec3& b);

/// Any unit vector orthogonal to n.
Vec3 any_orthogonal(const Vec3& n);

}  // namespace gwn
