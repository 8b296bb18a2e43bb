#pragma once

// Occupancy rasters for pre-fractals and percolation lattices, plus binary
// PGM (P5) input/output.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "fractalkit/error.hpp"

namespace fractalkit {

struct RasterCaps {
  static constexpr std::size_t max_cells_2d = std::size_t{1} << 26;
  static constexpr std::size_t max_cells_3d = std::size_t{1} << 22;
};

/// Square occupancy grid, row-major from the top-left.
class Grid2D {
 public:
  Grid2D() = default;
  Grid2D(std::size_t side, unsigned base = 2) : side_(side), base_(base), cells_(checked_area(side), 0) {}

  std::size_t side() const { return side_; }
  unsigned base() const { return base_; }

  bool at(std::size_t row, std::size_t col) const { return cells_[row * side_ + col] != 0; }
  void set(std::size_t row, std::size_t col, bool on = true) { cells_[row * side_ + col] = on ? 1 : 0; }

  std::size_t count() const { return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1)); }
  const std::vector<std::uint8_t>& cells() const { return cells_; }

  friend bool operator==(const Grid2D& a, const Grid2D& b) { return a.side_ == b.side_ && a.cells_ == b.cells_; }

 private:
  static std::size_t checked_area(std::size_t side) {
    if (side == 0) throw InvalidArgument("grid side must be positive");
    if (side > RasterCaps::max_cells_2d / side) throw CapacityError("2D raster exceeds cell capacity");
    return side * side;
  }

  std::size_t side_ = 0;
  unsigned base_ = 2;
  std::vector<std::uint8_t> cells_;
};

/// Cubic voxel grid indexed (x, y, z).
class Grid3D {
 public:
  Grid3D(std::size_t side, unsigned base) : side_(side), base_(base) {
    if (side == 0) throw InvalidArgument("grid side must be positive");
    if (side > RasterCaps::max_cells_3d / side / side) throw CapacityError("3D raster exceeds voxel capacity");
    cells_.assign(side * side * side, 0);
  }

  std::size_t side() const { return side_; }
  unsigned base() const { return base_; }
  bool at(std::size_t x, std::size_t y, std::size_t z) const { return cells_[(x * side_ + y) * side_ + z] != 0; }
  void set(std::size_t x, std::size_t y, std::size_t z, bool on = true) {
    cells_[(x * side_ + y) * side_ + z] = on ? 1 : 0;
  }
  std::size_t count() const { return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), 1)); }

 private:
  std::size_t side_;
  unsigned base_;
  std::vector<std::uint8_t> cells_;
};

/// Binary P5: one byte per cell, 255 occupied, 0 empty.
inline void write_pgm(std::ostream& os, const Grid2D& g) {
  os << "P5\n" << g.side() << ' ' << g.side() << "\n255\n";
  std::vector<char> row(g.side());
  for (std::size_t r = 0; r < g.side(); ++r) {
    for (std::size_t c = 0; c < g.side(); ++c) row[c] = g.at(r, c) ? static_cast<char>(255) : 0;
    os.write(row.data(), static_cast<std::streamsize>(row.size()));
  }
}

/// Reads a square P5 image; any non-zero byte counts as occupied.
inline Grid2D read_pgm(std::istream& is) {
  auto token = [&]() {
    std::string t;
    char c;
    while (is.get(c)) {
      if (c == '#') {
        std::string skip;
        std::getline(is, skip);
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(c))) {
        if (!t.empty()) break;
        continue;
      }
      t.push_back(c);
    }
    return t;
  };
  if (token() != "P5") throw InvalidArgument("PGM: expected P5 magic");
  std::size_t w = 0, h = 0, maxval = 0;
  try {
    w = std::stoul(token());
    h = std::stoul(token());
    maxval = std::stoul(token());
  } catch (const std::exception&) {
    throw InvalidArgument("PGM: malformed header");
  }
  if (w != h || w == 0) throw InvalidArgument("PGM: image must be square and non-empty");
  if (maxval == 0 || maxval > 255) throw InvalidArgument("PGM: only 8-bit images supported");
  Grid2D g(w);
  std::vector<char> row(w);
  for (std::size_t r = 0; r < h; ++r) {
    if (!is.read(row.data(), static_cast<std::streamsize>(w))) throw InvalidArgument("PGM: truncated pixel data");
    for (std::size_t c = 0; c < w; ++c) g.set(r, c, row[c] != 0);
  }
  return g;
}

}  // namespace fractalkit
