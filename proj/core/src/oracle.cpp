#include "gwn/oracle.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <ostream>

#include "gwn/errors.hpp"

namespace gwn {

namespace {

double point_triangle_distance(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c) {
  // Closest point on a triangle (Ericson, Real-Time Collision Detection 5.1.5).
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = dot(ab, ap), d2 = dot(ac, ap);
  if (d1 <= 0 && d2 <= 0) return norm(ap);
  const Vec3 bp = p - b;
  const double d3 = dot(ab, bp), d4 = dot(ac, bp);
  if (d3 >= 0 && d4 <= d3) return norm(bp);
  const double vc = d1 * d4 - d3 * d2;
  if (vc <= 0 && d1 >= 0 && d3 <= 0) return norm(p - (a + (d1 / (d1 - d3)) * ab));
  const Vec3 cp = p - c;
  const double d5 = dot(ab, cp), d6 = dot(ac, cp);
  if (d6 >= 0 && d5 <= d6) return norm(cp);
  const double vb = d5 * d2 - d1 * d6;
  if (vb <= 0 && d2 >= 0 && d6 <= 0) return norm(p - (a + (d2 / (d2 - d6)) * ac));
  const double va = d3 * d6 - d5 * d4;
  if (va <= 0 && (d4 - d3) >= 0 && (d5 - d6) >= 0)
    return norm(p - (b + ((d4 - d3) / ((d4 - d3) + (d5 - d6))) * (c - b)));
  const double denom = 1.0 / (va + vb + vc);
  return norm(p - (a + (vb * denom) * ab + (vc * denom) * ac));
}

}  // namespace

double triangle_solid_angle(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& p) {
  const Vec3 x = a - p, y = b - p, z = c - p;
  const double lx = norm(x), ly = norm(y), lz = norm(z);
  const double num = triple(x, y, z);
  const double den = lx * ly * lz + dot(x, y) * lz + dot(y, z) * lx + dot(z, x) * ly;
  return 2.0 * std::atan2(num, den);
}

double direct_winding_mesh(const TriangleMesh& mesh, const Vec3& p) {
  double sum = 0;
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const double s = triangle_solid_angle(a, b, c, p);
    // Cheap reject first: only a tiny solid angle numerator can mean contact.
    if (std::abs(triple(a - p, b - p, c - p)) < 1e-12 * (1 + norm(a - p) * norm(b - p) * norm(c - p)) &&
        point_triangle_distance(p, a, b, c) < 1e-12)
      throw Error(ErrorKind::OnSurface, "query point lies on the mesh");
    sum += s;
  }
  return sum / (4 * std::numbers::pi);
}

TriangleMesh tessellate_mesh(const ParametricSurface& patch, int res) {
  if (res < 1) throw Error(ErrorKind::InvalidInput, "tessellation resolution must be >= 1");
  TriangleMesh m;
  if (patch.domain() == ParamDomain::Simplex) {
    // Row j holds res - j + 1 vertices with v = j / res.
    std::vector<int> row_start;
    for (int j = 0; j <= res; ++j) {
      row_start.push_back(static_cast<int>(m.vertices.size()));
      for (int i = 0; i <= res - j; ++i) {
        auto [u, v] = patch.clamp_param(static_cast<double>(i) / res, static_cast<double>(j) / res);
        m.vertices.push_back(patch.sample(u, v).point);
      }
    }
    for (int j = 0; j < res; ++j)
      for (int i = 0; i < res - j; ++i) {
        const int a = row_start[j] + i, b = a + 1, c = row_start[j + 1] + i;
        m.triangles.push_back({a, b, c});
        if (i + 1 < res - j) m.triangles.push_back({b, c + 1, c});
      }
  } else {
    for (int j = 0; j <= res; ++j)
      for (int i = 0; i <= res; ++i) {
        auto [u, v] = patch.clamp_param(static_cast<double>(i) / res, static_cast<double>(j) / res);
        m.vertices.push_back(patch.sample(u, v).point);
      }
    const int w = res + 1;
    for (int j = 0; j < res; ++j)
      for (int i = 0; i < res; ++i) {
        const int a = j * w + i;
        m.triangles.push_back({a, a + 1, a + w + 1});
        m.triangles.push_back({a, a + w + 1, a + w});
      }
  }
  return m;
}

MeshSurface tessellate(const ParametricSurface& patch, int resolution) {
  return MeshSurface(tessellate_mesh(patch, resolution));
}

double direct_winding_scene(const Scene& scene, const Vec3& p, int resolution) {
  double w = 0;
  for (const auto& s : scene.patches()) {
    if (const auto* mesh = dynamic_cast<const MeshSurface*>(s.get())) {
      w += direct_winding_mesh(mesh->mesh(), p);
    } else if (const auto* par = dynamic_cast<const ParametricSurface*>(s.get())) {
      w += direct_winding_mesh(tessellate_mesh(*par, resolution), p);
    } else {
      throw Error(ErrorKind::InvalidInput, "no oracle for surface kind " + s->kind());
    }
  }
  return w;
}

OracleReport make_report(const std::vector<Vec3>& points, const std::vector<double>& oracle,
                         const std::vector<double>& oneshot) {
  if (points.size() != oracle.size() || points.size() != oneshot.size())
    throw Error(ErrorKind::InvalidInput, "report columns differ in length");
  OracleReport rep;
  double sq = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const double d = std::abs(oneshot[i] - oracle[i]);
    rep.rows.push_back({points[i], oracle[i], oneshot[i], d});
    rep.max_error = std::max(rep.max_error, d);
    sq += d * d;
  }
  rep.rmse = points.empty() ? 0.0 : std::sqrt(sq / static_cast<double>(points.size()));
  return rep;
}

OracleReport compare(const Scene& scene, const std::vector<Vec3>& queries, int resolution,
                     const EngineOptions& opts) {
  // Tessellate once, not per query.
  std::vector<TriangleMesh> meshes;
  for (const auto& s : scene.patches()) {
    if (const auto* mesh = dynamic_cast<const MeshSurface*>(s.get())) meshes.push_back(mesh->mesh());
    else if (const auto* par = dynamic_cast<const ParametricSurface*>(s.get()))
      meshes.push_back(tessellate_mesh(*par, resolution));
    else throw Error(ErrorKind::InvalidInput, "no oracle for surface kind " + s->kind());
  }
  std::vector<double> oracle(queries.size()), oneshot(queries.size());
  parallel_for(static_cast<int>(queries.size()), resolve_threads(opts.threads), [&](int i) {
    double w = 0;
    for (const auto& m : meshes) w += direct_winding_mesh(m, queries[i]);
    oracle[i] = w;
    oneshot[i] = winding_number(scene, queries[i], opts.stats);
  });
  return make_report(queries, oracle, oneshot);
}

void OracleReport::write_csv(std::ostream& os) const {
  os << "x,y,z,oracle,oneshot,diff\n" << std::setprecision(17);
  for (const auto& r : rows)
    os << r.point.x << ',' << r.point.y << ',' << r.point.z << ',' << r.oracle << ','
       << r.oneshot << ',' << r.diff << '\n';
}

}  // namespace gwn
