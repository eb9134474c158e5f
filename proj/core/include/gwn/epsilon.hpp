#pragma once

namespace gwn {

/// Every tolerance used by the library lives here so tests can tighten or
/// loosen them in one place.
struct EpsilonConfig {
  double degenerate_projection = 1e-12;  ///< |x - center| below this cannot be projected
  double unit_norm = 1e-12;
  double arc_plane = 1e-10;        ///< endpoint/pole orthogonality and coplanar-arc test
  double vertex_merge = 1e-9;      ///< arrangement vertices closer than this (radians) collapse
  double on_boundary = 1e-9;       ///< point-location refuses points this close to an arc
  double tangent_parametric = 1e-12;
  double tangent_bem = 1e-2;
  double dedup = 1e-9;             ///< ray roots closer than this in t are one root
  double solver_residual = 1e-10;  ///< accepted |f(u,v) - O - tR|
  double surface_hit = 1e-9;       ///< a hit this close to the query point means p is on M
  double jitter_scale = 1e-7;      ///< fraction of the scene diagonal
  int jitter_attempts = 3;
  int seed_retries = 32;
};

}  // namespace gwn
