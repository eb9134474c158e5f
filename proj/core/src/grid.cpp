#include "gwn/grid.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "gwn/errors.hpp"

namespace gwn {

namespace {

void put_u32(std::ostream& os, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                     static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
  os.write(b, 4);
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  if (!is.read(reinterpret_cast<char*>(b), 4)) throw Error(ErrorKind::Io, "truncated grid file");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(ErrorKind::Io, "cannot write " + path);
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(ErrorKind::Io, "cannot read " + path);
  return is;
}

}  // namespace

std::vector<double> combine(const std::vector<double>& a, const std::vector<double>& b,
                            BooleanOp op) {
  if (a.size() != b.size()) throw Error(ErrorKind::GridMismatch, "fields differ in size");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i)
    out[i] = op == BooleanOp::Union ? a[i] + b[i] : a[i] * b[i];
  return out;
}

Grid3 combine(const Grid3& a, const Grid3& b, BooleanOp op) {
  if (a.nx != b.nx || a.ny != b.ny || a.nz != b.nz || a.values.size() != b.values.size())
    throw Error(ErrorKind::GridMismatch, "grids differ in size");
  Grid3 out = a;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    out.values[i] = op == BooleanOp::Union ? a.values[i] + b.values[i] : a.values[i] * b.values[i];
  return out;
}

BooleanOp parse_boolean_op(const std::string& name) {
  if (name == "union") return BooleanOp::Union;
  if (name == "intersection") return BooleanOp::Intersection;
  throw Error(ErrorKind::InvalidInput, "unknown boolean op: " + name);
}

void write_grid(const std::string& path, const Grid3& g) {
  auto os = open_out(path);
  os.write("WNG1", 4);
  put_u32(os, static_cast<std::uint32_t>(g.nx));
  put_u32(os, static_cast<std::uint32_t>(g.ny));
  put_u32(os, static_cast<std::uint32_t>(g.nz));
  for (float v : g.values) put_u32(os, std::bit_cast<std::uint32_t>(v));
  if (!os) throw Error(ErrorKind::Io, "write failed: " + path);
}

Grid3 read_grid(const std::string& path) {
  auto is = open_in(path);
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "WNG1", 4) != 0)
    throw Error(ErrorKind::Io, "not a WNG1 grid: " + path);
  Grid3 g;
  g.nx = static_cast<int>(get_u32(is));
  g.ny = static_cast<int>(get_u32(is));
  g.nz = static_cast<int>(get_u32(is));
  const std::size_t n = static_cast<std::size_t>(g.nx) * g.ny * g.nz;
  g.values.resize(n);
  for (auto& v : g.values) v = std::bit_cast<float>(get_u32(is));
  return g;
}

void write_occupancy(const std::string& path, const std::vector<std::uint8_t>& occupied) {
  std::vector<char> bytes((occupied.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < occupied.size(); ++i)
    if (occupied[i]) bytes[i / 8] = static_cast<char>(bytes[i / 8] | (1 << (i % 8)));
  auto os = open_out(path);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw Error(ErrorKind::Io, "write failed: " + path);
}

std::vector<std::uint8_t> read_occupancy(const std::string& path, std::size_t count) {
  auto is = open_in(path);
  std::vector<char> bytes((count + 7) / 8);
  if (!is.read(bytes.data(), static_cast<std::streamsize>(bytes.size())))
    throw Error(ErrorKind::Io, "truncated occupancy file");
  std::vector<std::uint8_t> out(count);
  for (std::size_t i = 0; i < count; ++i) out[i] = (bytes[i / 8] >> (i % 8)) & 1;
  return out;
}

std::uint16_t quantize(double w, double lo, double hi) {
  double s = (w - lo) / (hi - lo);
  if (!(s > 0)) s = 0;
  if (s > 1) s = 1;
  return static_cast<std::uint16_t>(std::lround(s * 65535.0));
}

void write_pgm(const std::string& path, const Grid2& image, double lo, double hi) {
  if (!(hi > lo)) throw Error(ErrorKind::InvalidInput, "PGM range must satisfy lo < hi");
  auto os = open_out(path);
  os << "P5\n" << image.width << ' ' << image.height << "\n65535\n";
  for (int j = image.height - 1; j >= 0; --j)
    for (int i = 0; i < image.width; ++i) {
      const std::uint16_t q = quantize(image.at(i, j), lo, hi);
      const char b[2] = {static_cast<char>(q >> 8), static_cast<char>(q & 0xff)};
      os.write(b, 2);
    }
  if (!os) throw Error(ErrorKind::Io, "write failed: " + path);
}

std::vector<std::uint16_t> read_pgm(const std::string& path, int& width, int& height) {
  auto is = open_in(path);
  std::string magic;
  int maxval = 0;
  is >> magic >> width >> height >> maxval;
  if (magic != "P5" || maxval != 65535 || width <= 0 || height <= 0)
    throw Error(ErrorKind::Io, "not a 16-bit binary PGM: " + path);
  is.get();
  std::vector<std::uint16_t> out(static_cast<std::size_t>(width) * height);
  for (auto& v : out) {
    unsigned char b[2];
    if (!is.read(reinterpret_cast<char*>(b), 2)) throw Error(ErrorKind::Io, "truncated PGM");
    v = static_cast<std::uint16_t>((b[0] << 8) | b[1]);
  }
  return out;
}

}  // namespace gwn
