#include "gwn/geometry.hpp"

#include <algorithm>
#include <numbers>

#include "gwn/errors.hpp"
#include "gwn/transform.hpp"

namespace gwn {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DegenerateProjection: return "DegenerateProjection";
    case ErrorKind::OverlappingArcs: return "OverlappingArcs";
    case ErrorKind::NonManifoldEdge: return "NonManifoldEdge";
    case ErrorKind::OpenChain: return "OpenChain";
    case ErrorKind::NonOrientable: return "NonOrientable";
    case ErrorKind::DegenerateNormal: return "DegenerateNormal";
    case ErrorKind::NumericallyUnstableVertex: return "NumericallyUnstableVertex";
    case ErrorKind::InteriorPointFailure: return "InteriorPointFailure";
    case ErrorKind::OnBoundary: return "OnBoundary";
    case ErrorKind::InconsistentIncrements: return "InconsistentIncrements";
    case ErrorKind::SeedExhausted: return "SeedExhausted";
    case ErrorKind::CycleInconsistency: return "CycleInconsistency";
    case ErrorKind::GridMismatch: return "GridMismatch";
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::SingularSystem: return "SingularSystem";
    case ErrorKind::OutsideDomain: return "OutsideDomain";
    case ErrorKind::OnSurface: return "OnSurface";
    case ErrorKind::DegenerateQuery: return "DegenerateQuery";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::Io: return "Io";
  }
  return "Unknown";
}

UnitVec3 UnitVec3::normalize(const Vec3& v, double tiny) {
  const double n = norm(v);
  if (!(n > tiny)) throw Error(ErrorKind::DegenerateProjection, "cannot normalize a zero vector");
  return UnitVec3(v / n);
}

Aabb Aabb::of(const std::vector<Vec3>& pts) {
  Aabb box;
  for (const auto& p : pts) box.extend(p);
  return box;
}

void Aabb::extend(const Vec3& p) {
  for (int i = 0; i < 3; ++i) {
    min_corner[i] = std::min(min_corner[i], p[i]);
    max_corner[i] = std::max(max_corner[i], p[i]);
  }
}

void Aabb::extend(const Aabb& b) {
  if (!b.valid()) return;
  extend(b.min_corner);
  extend(b.max_corner);
}

Aabb Aabb::inflated(double r) const {
  if (!valid()) return *this;
  const Vec3 d{r, r, r};
  return {min_corner - d, max_corner + d};
}

bool Aabb::contains(const Vec3& p, double tol) const {
  for (int i = 0; i < 3; ++i) {
    if (p[i] < min_corner[i] - tol || p[i] > max_corner[i] + tol) return false;
  }
  return true;
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(norm(cross(a, b)), dot(a, b));
}

Vec3 any_orthogonal(const Vec3& n) {
  const Vec3 axis = std::abs(n.x) < 0.6 ? Vec3{1, 0, 0} : (std::abs(n.y) < 0.6 ? Vec3{0, 1, 0} : Vec3{0, 0, 1});
  const Vec3 o = cross(n, axis);
  return o / norm(o);
}

GreatArc GreatArc::between(const UnitVec3& start, const UnitVec3& end) {
  const Vec3 c = cross(start, end);
  if (norm(c) < 1e-15) throw Error(ErrorKind::InvalidInput, "arc endpoints are parallel");
  return {start, end, UnitVec3::normalize(c)};
}

GreatArc GreatArc::with_pole(const UnitVec3& start, const UnitVec3& end, const UnitVec3& pole,
                             const EpsilonConfig& eps) {
  if (std::abs(dot(start, pole)) > eps.arc_plane || std::abs(dot(end, pole)) > eps.arc_plane) {
    throw Error(ErrorKind::InvalidInput, "arc endpoints are not on the pole's great circle");
  }
  GreatArc arc{start, end, pole};
  if (!(arc.length() > 0.0)) throw Error(ErrorKind::InvalidInput, "zero-length arc");
  return arc;
}

double GreatArc::angle_of(const Vec3& p) const {
  const Vec3 tangent = cross(pole, start);
  return std::atan2(dot(p, tangent), dot(p, start.vec()));
}

double GreatArc::length() const {
  double a = angle_of(end);
  if (a <= 0.0) a += 2.0 * std::numbers::pi;
  return a;
}

UnitVec3 GreatArc::point_at(double angle) const {
  const Vec3 tangent = cross(pole, start);
  return UnitVec3::normalize(std::cos(angle) * start.vec() + std::sin(angle) * tangent);
}

UnitVec3 project_to_sphere(const Vec3& center, const Vec3& x, const EpsilonConfig& eps) {
  const Vec3 d = x - center;
  const double n = norm(d);
  if (!(n > eps.degenerate_projection)) {
    throw Error(ErrorKind::DegenerateProjection, "point coincides with the projection center");
  }
  return UnitVec3::from_unit(d / n);
}

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Half-open membership: [start, end).
bool on_arc_half_open(const GreatArc& arc, const Vec3& x, double tol) {
  const double len = arc.length();
  double a = arc.angle_of(x);
  if (a < -tol) a += kTwoPi;
  return a >= -tol && a < len - tol;
}

double wrap_positive(double a) {
  while (a < 0) a += kTwoPi;
  while (a >= kTwoPi) a -= kTwoPi;
  return a;
}

double interval_overlap(double s0, double l0, double s1, double l1) {
  const double lo = std::max(s0, s1);
  const double hi = std::min(s0 + l0, s1 + l1);
  return hi - lo;
}

}  // namespace

std::vector<UnitVec3> arc_intersections(const GreatArc& a, const GreatArc& b,
                                        const EpsilonConfig& eps) {
  const Vec3 d = cross(a.pole, b.pole);
  const double dn = norm(d);
  const double tol = eps.arc_plane;
  if (dn < eps.arc_plane) {
    // Same great circle: express b as an interval on a's circle.
    const double la = a.length();
    const double lb = b.length();
    const bool same_sense = dot(a.pole, b.pole) > 0;
    const double s = wrap_positive(a.angle_of(same_sense ? b.start : b.end));
    const double overlap = std::max(interval_overlap(0, la, s, lb),
                                    interval_overlap(kTwoPi, la, s, lb));
    if (overlap > tol) throw Error(ErrorKind::OverlappingArcs, "arcs share a great circle and overlap");
    return {};
  }
  std::vector<UnitVec3> out;
  const Vec3 x = d / dn;
  for (const Vec3& c : {x, -x}) {
    if (on_arc_half_open(a, c, tol) && on_arc_half_open(b, c, tol)) {
      out.push_back(UnitVec3::from_unit(c));
    }
  }
  return out;
}

std::optional<RayInterval> ray_aabb_clip(const Ray& r, const Aabb& box) {
  if (!box.valid()) return std::nullopt;
  double t0 = 0.0;
  double t1 = INFINITY;
  for (int i = 0; i < 3; ++i) {
    const double o = r.origin[i];
    const double dir = r.direction.vec()[i];
    if (dir == 0.0) {
      if (o < box.min_corner[i] || o > box.max_corner[i]) return std::nullopt;
      continue;
    }
    double ta = (box.min_corner[i] - o) / dir;
    double tb = (box.max_corner[i] - o) / dir;
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
    if (t0 > t1) return std::nullopt;
  }
  return RayInterval{t0, t1};
}

}  // namespace gwn

namespace gwn {

RigidTransform RigidTransform::axis_angle(const Vec3& axis, double angle, const Vec3& translation) {
  const Vec3 k = UnitVec3::normalize(axis).vec();
  const double c = std::cos(angle), s = std::sin(angle), t = 1.0 - c;
  RigidTransform xf;
  xf.rows = {Vec3{c + t * k.x * k.x, t * k.x * k.y - s * k.z, t * k.x * k.z + s * k.y},
             Vec3{t * k.x * k.y + s * k.z, c + t * k.y * k.y, t * k.y * k.z - s * k.x},
             Vec3{t * k.x * k.z - s * k.y, t * k.y * k.z + s * k.x, c + t * k.z * k.z}};
  xf.translation = translation;
  return xf;
}

}  // namespace gwn
