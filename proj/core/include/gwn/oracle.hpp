#pragma once

#include <iosfwd>
#include <vector>

#include "gwn/engine.hpp"
#include "gwn/mesh.hpp"
#include "gwn/parametric.hpp"

namespace gwn {

/// Signed solid angle of triangle (a, b, c) seen from p, in steradians.
double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p);

/// Exact winding number of a triangle mesh: summed triangle solid angles
/// over 4 pi. Throws OnSurface when p is within 1e-12 of a triangle.
double direct_winding_mesh(const TriangleMesh& mesh, const Vec3& p);

/// Regular triangulation of the parameter domain mapped through the patch.
/// Simplex: res^2 triangles; square: 2 res^2 triangles. Orientation follows
/// the patch normal.
TriangleMesh tessellate_mesh(const ParametricSurface& patch, int resolution);
MeshSurface tessellate(const ParametricSurface& patch, int resolution);

struct OracleRow {
  Vec3 point;
  double oracle = 0;
  double oneshot = 0;
  double diff = 0;
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double max_error = 0;
  double rmse = 0;

  void write_csv(std::ostream& os) const;
};

/// Direct-sum winding number of a whole scene: meshes as given, parametric
/// patches tessellated at `resolution`.
double direct_winding_scene(const Scene& scene, const Vec3& p, int resolution = 64);

/// Evaluates both paths at every query and aggregates the differences.
OracleReport compare(const Scene& scene, const std::vector<Vec3>& queries, int resolution = 64,
                     const EngineOptions& opts = {});

/// Aggregates precomputed oracle/one-shot pairs.
OracleReport make_report(const std::vector<Vec3>& points, const std::vector<double>& oracle,
                         const std::vector<double>& oneshot);

}  // namespace gwn
