#include "aasipp/grid_map.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <sstream>

namespace aasipp {

GridMap::GridMap(int width, int height) : GridMap(width, height, {}) {}

GridMap::GridMap(int width, int height, std::vector<std::uint8_t> blocked)
    : width_(width), height_(height), blocked_(std::move(blocked)) {
  if (width < 1 || height < 1) throw std::invalid_argument("grid dimensions must be positive");
  const auto n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (blocked_.empty()) blocked_.assign(n, 0);
  if (blocked_.size() != n) throw std::invalid_argument("occupancy size does not match dimensions");
}

void GridMap::set_blocked(CellIndex c, bool blocked) {
  if (!in_bounds(c)) throw std::out_of_range("cell outside grid");
  blocked_[index(c)] = blocked ? 1 : 0;
}

std::size_t GridMap::free_cell_count() const {
  return static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), 0));
}

std::vector<CellIndex> GridMap::free_cells() const {
  std::vector<CellIndex> cells;
  cells.reserve(free_cell_count());
  for (std::size_t i = 0; i < blocked_.size(); ++i) {
    if (blocked_[i] == 0) cells.push_back(cell(i));
  }
  return cells;
}

MapParseError::MapParseError(const std::string& what, int line, int column)
    : std::runtime_error("map:" + std::to_string(line) + ":" + std::to_string(column) + ": " + what),
      line_(line),
      column_(column) {}

namespace {

bool next_line(std::istream& in, std::string& line) {
  if (!std::getline(in, line)) return false;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

int parse_dimension(std::istream& in, std::string_view key, int line_no) {
  std::string line;
  if (!next_line(in, line)) throw MapParseError("missing '" + std::string(key) + "' line", line_no, 1);
  std::istringstream fields(line);
  std::string name;
  long value = 0;
  if (!(fields >> name) || name != key) {
    throw MapParseError("expected '" + std::string(key) + " <n>'", line_no, 1);
  }
  if (!(fields >> value) || value < 1 || value > (1 << 20)) {
    throw MapParseError("invalid " + std::string(key) + " value", line_no,
                        static_cast<int>(key.size()) + 2);
  }
  std::string extra;
  if (fields >> extra) throw MapParseError("trailing characters", line_no, 1);
  return static_cast<int>(value);
}

}  // namespace

GridMap parse_map(std::istream& in) {
  std::string line;
  if (!next_line(in, line)) throw MapParseError("empty map file", 1, 1);
  {
    std::istringstream fields(line);
    std::string key;
    std::string type;
    if (!(fields >> key >> type) || key != "type") throw MapParseError("expected 'type octile'", 1, 1);
    if (type != "octile") throw MapParseError("unsupported map type '" + type + "'", 1, 6);
  }
  const int height = parse_dimension(in, "height", 2);
  const int width = parse_dimension(in, "width", 3);
  if (!next_line(in, line) || line != "map") throw MapParseError("expected 'map'", 4, 1);

  std::vector<std::uint8_t> blocked(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
  for (int row = 0; row < height; ++row) {
    const int line_no = 5 + row;
    if (!next_line(in, line)) {
      throw MapParseError("map declares height " + std::to_string(height) + " but provides " +
                              std::to_string(row) + " rows",
                          line_no, 1);
    }
    if (static_cast<int>(line.size()) != width) {
      throw MapParseError("row has " + std::to_string(line.size()) + " characters, expected " +
                              std::to_string(width),
                          line_no, static_cast<int>(std::min<std::size_t>(line.size(), width)) + 1);
    }
    for (int col = 0; col < width; ++col) {
      std::uint8_t value = 0;
      switch (line[static_cast<std::size_t>(col)]) {
        case '.':
        case 'G':
          value = 0;
          break;
        case '@':
        case 'O':
        case 'T':
        case 'S':
        case 'W':
          value = 1;
          break;
        default:
          throw MapParseError(std::string("unknown map character '") + line[static_cast<std::size_t>(col)] +
                                  "'",
                              line_no, col + 1);
      }
      blocked[static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col)] =
          value;
    }
  }
  while (next_line(in, line)) {
    if (!line.empty()) throw MapParseError("extra rows after map body", 5 + height, 1);
  }
  return GridMap(width, height, std::move(blocked));
}

GridMap parse_map(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_map(in);
}

GridMap load_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open map file " + path.string());
  return parse_map(in);
}

std::string format_map(const GridMap& grid) {
  std::string out = "type octile\nheight " + std::to_string(grid.height()) + "\nwidth " +
                    std::to_string(grid.width()) + "\nmap\n";
  for (int row = 0; row < grid.height(); ++row) {
    for (int col = 0; col < grid.width(); ++col) out += grid.is_traversable({col, row}) ? '.' : '@';
    out += '\n';
  }
  return out;
}

bool move_is_feasible(const GridMap& grid, CellIndex from, CellIndex to, std::vector<CellIndex>& scratch) {
  if (!grid.is_traversable(from) || !grid.is_traversable(to)) return false;
  swept_cells(from, to, scratch);
  return std::all_of(scratch.begin(), scratch.end(), [&](CellIndex c) { return grid.is_traversable(c); });
}

bool move_is_feasible(const GridMap& grid, CellIndex from, CellIndex to) {
  std::vector<CellIndex> scratch;
  return move_is_feasible(grid, from, to, scratch);
}

}  // namespace aasipp
