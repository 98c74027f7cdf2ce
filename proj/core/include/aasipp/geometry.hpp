#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <vector>

namespace aasipp {

// Lengths are in cell widths: one cell is 2r wide, agents move one cell
// width per time unit, so distance and duration are interchangeable.
inline constexpr double kAgentRadius = 0.5;
inline constexpr double kAgentDiameter = 2.0 * kAgentRadius;
inline constexpr double kEps = 1e-9;

struct CellIndex {
  int col = 0;
  int row = 0;

  friend constexpr auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
  friend constexpr Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Point operator*(double k, Point a) { return {k * a.x, k * a.y}; }
};

inline constexpr double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline constexpr double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }

/// Cell (col, row) is centred on the integer point (col, row) and spans
/// [col - 0.5, col + 0.5] x [row - 0.5, row + 0.5].
inline constexpr Point center(CellIndex c) {
  return {static_cast<double>(c.col), static_cast<double>(c.row)};
}

inline double distance(CellIndex a, CellIndex b) { return distance(center(a), center(b)); }

struct Segment {
  Point a;
  Point b;

  double length() const { return distance(a, b); }
  bool degenerate() const { return a == b; }
};

inline Segment segment_between(CellIndex from, CellIndex to) { return {center(from), center(to)}; }

/// Projection of p onto s, clamped to the segment. Degenerate segments
/// return their single point.
Point closest_point_on_segment(Point p, const Segment& s);

double dist_point_segment(Point p, const Segment& s);

/// Distance between a segment and the closed square of cell c; zero when
/// they intersect.
double dist_segment_cell(const Segment& s, CellIndex c);

struct CircleHit {
  Point point;
  double arclength = 0.0;  // measured from s.a
};

/// Points where the circle boundary crosses s, ordered by arclength from
/// s.a. A tangency yields a single point. A segment lying entirely inside
/// the circle yields nothing; callers test endpoint containment themselves.
std::vector<CircleHit> circle_segment_intersections(Point center, double radius, const Segment& s);

/// Cells whose open interior meets the open region swept by a disk of
/// radius kAgentRadius whose centre travels along [from, to]. Cells at
/// distance exactly r (within kEps) are not swept.
///
/// The traversal walks the dominant axis one column (or row) at a time:
/// the two cells straddling the line form the batch, and the cells just
/// above and below the batch are admitted by a distance check against
/// their nearest corner. Output is ordered by the dominant coordinate, then
/// by the minor coordinate, both ascending.
std::vector<CellIndex> swept_cells(CellIndex from, CellIndex to);

/// Buffer-reusing variant for hot loops; clears `out` first.
void swept_cells(CellIndex from, CellIndex to, std::vector<CellIndex>& out);

/// Segment form; endpoints are rounded to the nearest cell centre.
std::vector<CellIndex> swept_cells(const Segment& s);

}  // namespace aasipp
