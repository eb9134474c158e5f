#pragma once

#include <vector>

#include "gwn/epsilon.hpp"
#include "gwn/geometry.hpp"
#include "gwn/surface.hpp"

namespace gwn {

/// Directed sub-arc of a projected boundary segment. Half-arcs come in
/// pairs: 2e runs along the source loop, 2e + 1 against it. The face on the
/// left (the pole side) of a half-arc is `face`.
struct HalfArc {
  int origin = -1;
  int target = -1;
  UnitVec3 pole;
  int twin = -1;
  int next = -1;
  int cycle = -1;
  int face = -1;
  int loop = -1;         ///< index of the source loop
  bool forward = true;   ///< runs in the source loop's direction
  double length = 0;
};

struct Face {
  std::vector<std::vector<int>> boundary_cycles;  ///< half-arc ids, face on the left
  double area = 0;
  UnitVec3 interior_point;
};

class SphericalArrangement {
 public:
  Vec3 center;
  std::vector<UnitVec3> vertices;
  std::vector<HalfArc> half_arcs;
  std::vector<Face> faces;
  int components = 0;  ///< connected components of the arc graph
  std::vector<int> edge_component;  ///< component of each undirected edge

  int edge_count() const { return static_cast<int>(half_arcs.size() / 2); }
  GreatArc arc(int h) const;

  /// Face containing q. Throws OnBoundary within `eps.on_boundary` of an arc.
  int locate(const UnitVec3& q) const;

  /// Half-arc with q on its left, found by walking a geodesic from q to an
  /// arc. With component >= 0 only that component's arcs are considered.
  /// Returns -1 when there are no arcs.
  int locate_half_arc(const UnitVec3& q, int component = -1) const;

  /// Index of the face with the largest area, lowest id on ties.
  int largest_face() const;

  EpsilonConfig eps;
};

/// Projects the loops onto the unit sphere around `center` and builds the
/// induced subdivision. Face interior points are filled in only when
/// `with_interior_points` is set; interior_point() computes one on demand.
SphericalArrangement build_arrangement(const Vec3& center, const std::vector<BoundaryLoop>& loops,
                                       const EpsilonConfig& eps = {},
                                       bool with_interior_points = true);

/// Gauss-Bonnet area of a face from its boundary cycles.
double face_area(const SphericalArrangement& arr, const Face& face);

/// A point strictly inside face `face_id`, verified by point location.
UnitVec3 interior_point(const SphericalArrangement& arr, int face_id);

/// Signed turning angle at vertex v from incoming tangent a to outgoing tangent b.
double turning_angle(const Vec3& v, const Vec3& a, const Vec3& b);

}  // namespace gwn
