#include "gwn/cli/scene_file.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include <json.hpp>

#include "gwn/bem.hpp"
#include "gwn/bezier.hpp"
#include "gwn/coons.hpp"
#include "gwn/errors.hpp"
#include "gwn/mesh.hpp"

namespace gwn::cli {
namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::InvalidInput, where + ": " + what);
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(where, std::string("missing \"") + key + "\"");
  return *it;
}

double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  return j.get<double>();
}

int positive_int(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() <= 0 || j.get<long long>() > (1 << 24))
    schema_error(where, "expected a positive integer");
  return j.get<int>();
}

Vec3 point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 3) schema_error(where, "expected [x, y, z]");
  return {number(j[0], where), number(j[1], where), number(j[2], where)};
}

std::vector<Vec3> points(const json& j, const std::string& where) {
  if (!j.is_array()) schema_error(where, "expected an array of points");
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(point(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

BezierCurve curve(const json& j, const std::string& where) {
  const auto pts = points(j, where);
  if (pts.size() == 4) return BezierCurve({pts[0], pts[1], pts[2], pts[3]});
  if (pts.size() == 3) return BezierCurve::from_quadratic({pts[0], pts[1], pts[2]});
  if (pts.size() == 2) return BezierCurve::line(pts[0], pts[1]);
  schema_error(where, "a curve needs 2, 3 or 4 control points");
}

TriangleMesh mesh_payload(const json& p, const std::filesystem::path& base_dir,
                          const std::string& where) {
  if (p.contains("path")) {
    const json& path = p["path"];
    if (!path.is_string()) schema_error(where + ".path", "expected a string");
    std::filesystem::path file = path.get<std::string>();
    if (file.is_relative()) file = base_dir / file;
    return read_obj(file.string());
  }
  TriangleMesh mesh;
  mesh.vertices = points(require(p, "vertices", where), where + ".vertices");
  const json& tris = require(p, "triangles", where);
  if (!tris.is_array()) schema_error(where + ".triangles", "expected an array");
  for (const auto& t : tris) {
    if (!t.is_array() || t.size() != 3) schema_error(where + ".triangles", "expected [i, j, k]");
    std::array<int, 3> tri{};
    for (int k = 0; k < 3; ++k) {
      if (!t[k].is_number_integer()) schema_error(where + ".triangles", "expected integers");
      tri[k] = t[k].get<int>();
    }
    mesh.triangles.push_back(tri);
  }
  return mesh;
}

SceneSettings read_settings(const json& doc) {
  SceneSettings s;
  if (doc.contains("boundary_samples_per_edge")) {
    s.boundary_samples_per_edge =
        positive_int(doc["boundary_samples_per_edge"], "boundary_samples_per_edge");
    if (s.boundary_samples_per_edge < 2)
      schema_error("boundary_samples_per_edge", "must be at least 2");
  }
  if (doc.contains("boundary_segments"))
    s.boundary_segments = positive_int(doc["boundary_segments"], "boundary_segments");
  if (doc.contains("may_self_intersect")) {
    if (!doc["may_self_intersect"].is_boolean())
      schema_error("may_self_intersect", "expected a boolean");
    s.may_self_intersect = doc["may_self_intersect"].get<bool>();
  }
  if (doc.contains("epsilons")) {
    const json& e = doc["epsilons"];
    if (!e.is_object()) schema_error("epsilons", "expected an object");
    for (const auto& [key, value] : e.items()) {
      const double x = number(value, "epsilons." + key);
      if (!(x > 0)) schema_error("epsilons." + key, "must be positive");
      if (key == "tangent_parametric")
        s.epsilons.tangent_parametric = x;
      else if (key == "tangent_bem")
        s.epsilons.tangent_bem = x;
      else if (key == "dedup")
        s.epsilons.dedup = x;
      else
        schema_error("epsilons", "unknown key \"" + key + "\"");
    }
  }
  return s;
}

}  // namespace

Scene parse_scene(const std::string& json_text, const std::filesystem::path& base_dir,
                  SceneSettings* settings_out) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::InvalidInput, std::string("scene is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) schema_error("scene", "expected an object");
  const SceneSettings settings = read_settings(doc);

  ParametricOptions popts;
  popts.samples_per_edge = settings.boundary_samples_per_edge;
  popts.boundary_segments = settings.boundary_segments;
  popts.may_self_intersect = settings.may_self_intersect;
  popts.tangent_eps = settings.epsilons.tangent_parametric;
  popts.dedup = settings.epsilons.dedup;
  popts.residual = settings.epsilons.solver_residual;
  ParametricOptions bem_opts = popts;
  bem_opts.tangent_eps = settings.epsilons.tangent_bem;

  const json& list = require(doc, "patches", "scene");
  if (!list.is_array() || list.empty()) schema_error("patches", "expected a non-empty array");

  std::vector<std::shared_ptr<const Surface>> patches;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string where = "patches[" + std::to_string(i) + "]";
    const json& p = list[i];
    if (!p.is_object()) schema_error(where, "expected an object");
    const json& type = require(p, "type", where);
    if (!type.is_string()) schema_error(where + ".type", "expected a string");
    const std::string kind = type.get<std::string>();

    if (kind == "mesh_obj") {
      patches.push_back(std::make_shared<MeshSurface>(mesh_payload(p, base_dir, where),
                                                      settings.epsilons.tangent_parametric));
    } else if (kind == "bezier_triangle") {
      const auto ctrl = points(require(p, "control", where), where + ".control");
      if (ctrl.size() != 10) schema_error(where + ".control", "expected 10 control points");
      BezierTrianglePatch patch;
      std::copy(ctrl.begin(), ctrl.end(), patch.control.begin());
      patches.push_back(std::make_shared<BezierTriangleSurface>(patch, popts));
    } else if (kind == "coons") {
      const json& curves = require(p, "curves", where);
      if (!curves.is_array() || curves.size() != 4)
        schema_error(where + ".curves", "expected 4 curves");
      CoonsPatch patch{curve(curves[0], where + ".curves[0]"), curve(curves[1], where + ".curves[1]"),
                       curve(curves[2], where + ".curves[2]"), curve(curves[3], where + ".curves[3]")};
      patch.validate();
      patches.push_back(std::make_shared<CoonsSurface>(patch, popts));
    } else if (kind == "bem_loop") {
      BoundaryLoop loop;
      loop.points = points(require(p, "loop", where), where + ".loop");
      if (loop.points.size() < 3) schema_error(where + ".loop", "needs at least 3 points");
      const int elements = p.contains("elements") ? positive_int(p["elements"], where + ".elements") : 200;
      const int order = p.contains("order") ? positive_int(p["order"], where + ".order") : 16;
      if (elements < 8) schema_error(where + ".elements", "needs at least 8 elements");
      auto solved = std::make_shared<const BemPatch>(loop, elements, order);
      patches.push_back(std::make_shared<BemSurface>(solved, bem_opts));
    } else {
      schema_error(where + ".type", "unknown patch type \"" + kind + "\"");
    }
  }

  if (settings_out) *settings_out = settings;
  return Scene(std::move(patches), settings.epsilons);
}

Scene load_scene(const std::filesystem::path& path, SceneSettings* settings_out) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scene(text.str(), path.parent_path(), settings_out);
}

}  // namespace gwn::cli
