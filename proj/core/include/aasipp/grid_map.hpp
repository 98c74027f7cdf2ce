#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "aasipp/geometry.hpp"

namespace aasipp {

/// Static occupancy grid. Cells outside [0,width) x [0,height) count as
/// blocked.
class GridMap {
 public:
  /// An obstacle-free grid.
  GridMap(int width, int height);
  /// `blocked` is row-major, one entry per cell.
  GridMap(int width, int height, std::vector<std::uint8_t> blocked);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t cell_count() const { return blocked_.size(); }

  bool in_bounds(CellIndex c) const {
    return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
  }
  bool is_traversable(CellIndex c) const { return in_bounds(c) && blocked_[index(c)] == 0; }

  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  CellIndex cell(std::size_t index) const {
    return {static_cast<int>(index % static_cast<std::size_t>(width_)),
            static_cast<int>(index / static_cast<std::size_t>(width_))};
  }

  void set_blocked(CellIndex c, bool blocked);

  std::size_t free_cell_count() const;
  std::vector<CellIndex> free_cells() const;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> blocked_;
};

class MapParseError : public std::runtime_error {
 public:
  MapParseError(const std::string& what, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Reads the octile map format: `type octile`, `height H`, `width W`,
/// `map`, then H rows of W characters. '.' and 'G' are free; '@', 'O',
/// 'T', 'S' and 'W' are blocked. Throws MapParseError with a 1-based
/// line/column on malformed input.
GridMap parse_map(std::istream& in);
GridMap parse_map(std::string_view text);
GridMap load_map(const std::filesystem::path& path);

std::string format_map(const GridMap& grid);

/// True iff every cell swept by an r-disk moving between the two cell
/// centres is traversable.
bool move_is_feasible(const GridMap& grid, CellIndex from, CellIndex to);

/// Same check with a caller-provided scratch buffer for the swept cells.
bool move_is_feasible(const GridMap& grid, CellIndex from, CellIndex to,
                      std::vector<CellIndex>& scratch);

}  // namespace aasipp
