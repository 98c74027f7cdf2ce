#include "aasipp/geometry.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>

namespace aasipp {

Point closest_point_on_segment(Point p, const Segment& s) {
  const Point d = s.b - s.a;
  const double len2 = dot(d, d);
  if (len2 == 0.0) return s.a;
  const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
  if (t == 0.0) return s.a;
  if (t == 1.0) return s.b;
  return s.a + t * d;
}

double dist_point_segment(Point p, const Segment& s) {
  return distance(p, closest_point_on_segment(p, s));
}

namespace {

double dist_point_cell(Point p, CellIndex c) {
  const double ex = std::max(0.0, std::abs(p.x - c.col) - 0.5);
  const double ey = std::max(0.0, std::abs(p.y - c.row) - 0.5);
  return std::hypot(ex, ey);
}

// Liang-Barsky clip of the segment against the closed cell square.
bool segment_hits_cell(const Segment& s, CellIndex c) {
  const Point d = s.b - s.a;
  const std::array<double, 4> p = {-d.x, d.x, -d.y, d.y};
  const std::array<double, 4> q = {s.a.x - (c.col - 0.5), (c.col + 0.5) - s.a.x,
                                   s.a.y - (c.row - 0.5), (c.row + 0.5) - s.a.y};
  double t0 = 0.0;
  double t1 = 1.0;
  for (std::size_t i = 0; i < 4; ++i) {
    if (p[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double r = q[i] / p[i];
    if (p[i] < 0.0) {
      t0 = std::max(t0, r);
    } else {
      t1 = std::min(t1, r);
    }
    if (t0 > t1) return false;
  }
  return true;
}

long floor_div(long num, long den) {
  long q = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --q;
  return q;
}

constexpr double kSweepLimit = kAgentRadius - kEps;

}  // namespace

double dist_segment_cell(const Segment& s, CellIndex c) {
  if (segment_hits_cell(s, c)) return 0.0;
  double best = std::min(dist_point_cell(s.a, c), dist_point_cell(s.b, c));
  for (const double dx : {-0.5, 0.5}) {
    for (const double dy : {-0.5, 0.5}) {
      best = std::min(best, dist_point_segment({c.col + dx, c.row + dy}, s));
    }
  }
  return best;
}

std::vector<CircleHit> circle_segment_intersections(Point c, double radius, const Segment& s) {
  std::vector<CircleHit> hits;
  const Point d = s.b - s.a;
  const double len = norm(d);
  if (len == 0.0) {
    if (std::abs(distance(s.a, c) - radius) < kEps) hits.push_back({s.a, 0.0});
    return hits;
  }
  const Point w = s.a - c;
  const double half_b = dot(d, w) / len;
  const double cc = dot(w, w) - radius * radius;
  const double disc = half_b * half_b - cc;
  if (disc < -kEps) return hits;

  auto push = [&](double arc) {
    if (arc < -kEps || arc > len + kEps) return;
    arc = std::clamp(arc, 0.0, len);
    hits.push_back({s.a + (arc / len) * d, arc});
  };
  if (disc <= kEps) {
    push(-half_b);
    return hits;
  }
  const double root = std::sqrt(disc);
  push(-half_b - root);
  push(-half_b + root);
  return hits;
}

void swept_cells(CellIndex from, CellIndex to, std::vector<CellIndex>& out) {
  out.clear();
  if (from == to) {
    out.push_back(from);
    return;
  }
  const Segment seg = segment_between(from, to);

  // Work in (major, minor) coordinates so the walk always advances along
  // the axis with the larger extent.
  const bool steep = std::abs(to.row - from.row) > std::abs(to.col - from.col);
  auto major = [steep](CellIndex c) { return steep ? c.row : c.col; };
  auto minor = [steep](CellIndex c) { return steep ? c.col : c.row; };
  auto make = [steep](long u, long v) {
    return steep ? CellIndex{static_cast<int>(v), static_cast<int>(u)}
                 : CellIndex{static_cast<int>(u), static_cast<int>(v)};
  };

  CellIndex lo = from;
  CellIndex hi = to;
  if (major(lo) > major(hi)) std::swap(lo, hi);
  const long u0 = major(lo);
  const long v0 = minor(lo);
  const long du = major(hi) - u0;
  const long dv = minor(hi) - v0;

  auto corner_dist = [&](long u, double v_edge) {
    // Nearest corners of a cell directly above or below the batch lie on the
    // edge facing the line, at u - 0.5 and u + 0.5.
    const Point left = steep ? Point{v_edge, u - 0.5} : Point{u - 0.5, v_edge};
    const Point right = steep ? Point{v_edge, u + 0.5} : Point{u + 0.5, v_edge};
    return std::min(dist_point_segment(left, seg), dist_point_segment(right, seg));
  };

  out.reserve(static_cast<std::size_t>(3 * (du + 1)));
  for (long u = u0; u <= u0 + du; ++u) {
    // Row of the line at the column centre, rounded down: v0 + (u-u0)*dv/du.
    const long base = v0 + floor_div((u - u0) * dv, du);

    if (corner_dist(u, base - 0.5) < kSweepLimit) out.push_back(make(u, base - 1));
    for (long v = base; v <= base + 1; ++v) {
      if (dist_segment_cell(seg, make(u, v)) < kSweepLimit) out.push_back(make(u, v));
    }
    if (corner_dist(u, base + 1.5) < kSweepLimit) out.push_back(make(u, base + 2));
  }
}

std::vector<CellIndex> swept_cells(CellIndex from, CellIndex to) {
  std::vector<CellIndex> out;
  swept_cells(from, to, out);
  return out;
}

std::vector<CellIndex> swept_cells(const Segment& s) {
  auto to_cell = [](Point p) {
    return CellIndex{static_cast<int>(std::lround(p.x)), static_cast<int>(std::lround(p.y))};
  };
  return swept_cells(to_cell(s.a), to_cell(s.b));
}

}  // namespace aasipp
