#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace gwn {

struct Grid2 {
  int width = 0;
  int height = 0;
  std::vector<double> values;  ///< row-major, j * width + i

  double at(int i, int j) const { return values[static_cast<std::size_t>(j) * width + i]; }
};

struct Grid3 {
  int nx = 0, ny = 0, nz = 0;
  std::vector<float> values;  ///< x-fastest

  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * ny + j) * nx + i;
  }
};

enum class BooleanOp { Union, Intersection };

/// Union adds, intersection multiplies. Throws GridMismatch on size mismatch.
std::vector<double> combine(const std::vector<double>& a, const std::vector<double>& b,
                            BooleanOp op);
Grid3 combine(const Grid3& a, const Grid3& b, BooleanOp op);

BooleanOp parse_boolean_op(const std::string& name);

/// "WNG1", three little-endian u32 sizes, then little-endian float32 values.
void write_grid(const std::string& path, const Grid3& grid);
Grid3 read_grid(const std::string& path);

/// Bit-packed occupancy, x-fastest, least significant bit first.
void write_occupancy(const std::string& path, const std::vector<std::uint8_t>& occupied);
std::vector<std::uint8_t> read_occupancy(const std::string& path, std::size_t count);

/// Binary 16-bit PGM; w is mapped linearly from [lo, hi] to [0, 65535].
/// Row j = height - 1 is written first so +v points up.
void write_pgm(const std::string& path, const Grid2& image, double lo, double hi);
/// Raw 16-bit samples in file order.
std::vector<std::uint16_t> read_pgm(const std::string& path, int& width, int& height);

std::uint16_t quantize(double w, double lo, double hi);

}  // namespace gwn
