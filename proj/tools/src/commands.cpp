#include "gwn/cli/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gwn/cli/scene_file.hpp"
#include "gwn/engine.hpp"
#include "gwn/errors.hpp"
#include "gwn/grid.hpp"
#include "gwn/oracle.hpp"

namespace gwn::cli {
namespace {

// Raised for problems with command-line values; maps to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(const char* spec, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

std::vector<double> parse_list(const std::string& text, std::size_t count, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError(what + ": cannot parse \"" + item + "\"");
    }
    if (!std::isfinite(out.back())) throw UsageError(what + ": values must be finite");
  }
  if (out.size() != count)
    throw UsageError(what + ": expected " + std::to_string(count) + " comma-separated values");
  return out;
}

Vec3 parse_vec3(const std::string& text, const std::string& what) {
  const auto v = parse_list(text, 3, what);
  return {v[0], v[1], v[2]};
}

std::pair<int, int> parse_resolution(const std::string& text) {
  const auto x = text.find_first_of("xX");
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t a = 0, b = 0;
    const int w = std::stoi(text.substr(0, x), &a);
    const int h = std::stoi(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1 || w <= 0 || h <= 0) throw std::invalid_argument(text);
    return {w, h};
  } catch (const std::exception&) {
    throw UsageError("--res: expected WxH with positive sizes, got \"" + text + "\"");
  }
}

// One x,y,z per line; a first line that does not parse is taken as a header.
std::vector<Vec3> read_queries(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  std::vector<Vec3> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.push_back(parse_vec3(line, path + ":" + std::to_string(lineno)));
    } catch (const UsageError&) {
      if (lineno == 1) continue;
      throw Error(ErrorKind::InvalidInput, path + ":" + std::to_string(lineno) + ": expected x,y,z");
    }
  }
  return out;
}

Scene load(const std::string& path) {
  try {
    return load_scene(path);
  } catch (const Error& e) {
    // A scene that cannot be assembled is an input problem whatever the cause.
    if (e.kind() == ErrorKind::Io || e.kind() == ErrorKind::InvalidInput) throw;
    throw Error(ErrorKind::InvalidInput, std::string("scene rejected: ") + e.what());
  }
}

struct Common {
  std::string scene;
  int threads = 0;
};

int cmd_query(const Common& c, const std::string& point, bool oracle, int oracle_res,
              std::ostream& out) {
  const Vec3 p = parse_vec3(point, "--point");
  const Scene scene = load(c.scene);
  const double w = winding_number(scene, p);
  out << "w=" << fmt("%.9f", w) << '\n';
  if (oracle) {
    const double o = direct_winding_scene(scene, p, oracle_res);
    out << "oracle=" << fmt("%.9f", o) << '\n' << "diff=" << fmt("%.3e", std::abs(w - o)) << '\n';
  }
  return kExitOk;
}

int cmd_slice(const Common& c, const std::string& origin, const std::string& u,
              const std::string& v, const std::string& res, const std::string& out_path,
              const std::string& range, std::ostream& out) {
  SliceSpec spec;
  spec.origin = parse_vec3(origin, "--origin");
  spec.u = parse_vec3(u, "--u");
  spec.v = parse_vec3(v, "--v");
  std::tie(spec.width, spec.height) = parse_resolution(res);
  const double scale = norm(spec.u) * norm(spec.v);
  if (!(scale > 0) || norm(cross(spec.u, spec.v)) <= 1e-12 * scale)
    throw UsageError("slice plane: --u and --v must be non-zero and not parallel");
  const auto r = parse_list(range, 2, "--range");
  if (!(r[1] > r[0])) throw UsageError("--range: need lo < hi");

  const Scene scene = load(c.scene);
  QueryStats stats;
  const Grid2 image = slice(scene, spec, {c.threads, &stats});
  write_pgm(out_path, image, r[0], r[1]);
  out << "rays=" << stats.ray_batches.load() << '\n'
      << "fallbacks=" << stats.fallbacks.load() << '\n';
  return kExitOk;
}

int cmd_voxelize(const Common& c, int n, const std::string& box_text, double threshold,
                 const std::string& out_path, const std::string& occ_path, std::ostream& out) {
  if (n <= 0) throw UsageError("--res: must be positive");
  const Scene scene = load(c.scene);
  VoxelSpec spec;
  spec.nx = spec.ny = spec.nz = n;
  spec.threshold = threshold;
  if (!box_text.empty()) {
    const auto b = parse_list(box_text, 6, "--box");
    spec.box.min_corner = {b[0], b[1], b[2]};
    spec.box.max_corner = {b[3], b[4], b[5]};
    if (!(b[3] > b[0] && b[4] > b[1] && b[5] > b[2]))
      throw UsageError("--box: need min < max on every axis");
  } else {
    spec.box = scene.bounds().inflated(0.05 * scene.diagonal());
  }
  QueryStats stats;
  const VoxelResult result = voxelize(scene, spec, {c.threads, &stats});
  write_grid(out_path, result.winding);
  if (!occ_path.empty()) write_occupancy(occ_path, result.occupied);
  std::size_t occupied = 0;
  for (auto o : result.occupied) occupied += o;
  out << "rays=" << stats.ray_batches.load() << '\n' << "occupied=" << occupied << '\n';
  return kExitOk;
}

int cmd_boolean(const std::string& op, const std::vector<std::string>& inputs,
                const std::string& out_path, std::ostream& out) {
  BooleanOp parsed;
  try {
    parsed = parse_boolean_op(op);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  if (inputs.size() != 2) throw UsageError("boolean: expected exactly two input grids");
  const Grid3 result = combine(read_grid(inputs[0]), read_grid(inputs[1]), parsed);
  write_grid(out_path, result);
  out << "voxels=" << result.values.size() << '\n';
  return kExitOk;
}

int cmd_compare(const Common& c, const std::string& queries_path, const std::string& out_path,
                int res, std::ostream& out) {
  const auto queries = read_queries(queries_path);
  const Scene scene = load(c.scene);
  const OracleReport report = compare(scene, queries, res, {c.threads, nullptr});
  std::ofstream csv(out_path);
  if (!csv) throw Error(ErrorKind::Io, "cannot write " + out_path);
  report.write_csv(csv);
  out << "queries=" << report.rows.size() << '\n'
      << "max=" << fmt("%.3e", report.max_error) << '\n'
      << "rmse=" << fmt("%.3e", report.rmse) << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Generalized winding numbers from surface boundaries", "gwn"};
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub, bool scene) {
    if (scene) sub->add_option("--scene", common.scene, "scene JSON file")->required();
    sub->add_option("--threads", common.threads, "worker threads (0: all; WN_THREADS overrides)");
  };

  std::string point;
  bool with_oracle = false;
  int oracle_res = 64;
  auto* query = app.add_subcommand("query", "winding number at one point");
  add_common(query, true);
  query->add_option("--point", point, "x,y,z")->required();
  query->add_flag("--oracle", with_oracle, "also print the tessellated direct sum");
  query->add_option("--oracle-res", oracle_res, "tessellation resolution of the oracle");

  std::string origin, u_axis, v_axis, res2, slice_out, range = "-0.25,1.25";
  auto* slice_cmd = app.add_subcommand("slice", "winding numbers over a planar grid");
  add_common(slice_cmd, true);
  slice_cmd->add_option("--origin", origin, "corner of the slice, x,y,z")->required();
  slice_cmd->add_option("--u", u_axis, "first edge vector, x,y,z")->required();
  slice_cmd->add_option("--v", v_axis, "second edge vector, x,y,z")->required();
  slice_cmd->add_option("--res", res2, "WxH")->required();
  slice_cmd->add_option("--out", slice_out, "16-bit PGM output")->required();
  slice_cmd->add_option("--range", range, "lo,hi mapped to black and white");

  int vox_res = 0;
  std::string box, vox_out, occ_out;
  double threshold = 0.5;
  auto* vox = app.add_subcommand("voxelize", "winding numbers at voxel centers");
  add_common(vox, true);
  vox->add_option("--res", vox_res, "voxels per axis")->required();
  vox->add_option("--box", box, "x0,y0,z0,x1,y1,z1 (default: padded scene bounds)");
  vox->add_option("--threshold", threshold, "occupied when w >= threshold");
  vox->add_option("--out", vox_out, "float32 grid output")->required();
  vox->add_option("--occ", occ_out, "bit-packed occupancy output");

  std::string op, bool_out;
  std::vector<std::string> inputs;
  auto* boolean = app.add_subcommand("boolean", "combine two winding grids");
  boolean->add_option("--op", op, "union or intersection")->required();
  boolean->add_option("inputs", inputs, "two grid files")->required()->expected(2);
  boolean->add_option("--out", bool_out, "output grid")->required();

  std::string queries, report_out;
  int compare_res = 64;
  auto* cmp = app.add_subcommand("compare", "one-shot values against the direct sum");
  add_common(cmp, true);
  cmp->add_option("--queries", queries, "CSV of x,y,z")->required();
  cmp->add_option("--out", report_out, "CSV report")->required();
  cmp->add_option("--res", compare_res, "tessellation resolution of the oracle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (query->parsed()) return cmd_query(common, point, with_oracle, oracle_res, out);
    if (slice_cmd->parsed())
      return cmd_slice(common, origin, u_axis, v_axis, res2, slice_out, range, out);
    if (vox->parsed()) return cmd_voxelize(common, vox_res, box, threshold, vox_out, occ_out, out);
    if (boolean->parsed()) return cmd_boolean(op, inputs, bool_out, out);
    if (cmp->parsed()) {
      if (compare_res <= 0) throw UsageError("--res: must be positive");
      return cmd_compare(common, queries, report_out, compare_res, out);
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::InvalidInput:
      case ErrorKind::Io:
      case ErrorKind::GridMismatch:
        return kExitInput;
      case ErrorKind::DegenerateQuery:
        return kExitDegenerate;
      default:
        return kExitFailure;
    }
  }
  return kExitFailure;
}

}  // namespace gwn::cli
