#include "aasipp/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aasipp {

namespace {

// Agents collide when their centres are closer than one diameter.
constexpr double kCollisionRadius = kAgentDiameter;
// Half-width of the window a single constraint forbids, in time units (4r).
constexpr double kConstraintWindow = 2.0 * kAgentDiameter;

bool strictly_inside(Point p, Point c) { return distance(p, c) < kCollisionRadius - kEps; }

void push_nonempty(std::vector<TimeInterval>& out, double start, double end) {
  if (end - start > kEps) out.push_back({start, end});
}

void move_occupancy(Point a, Point b, double depart, Point c, std::vector<TimeInterval>& out) {
  const Segment seg{a, b};
  const double len = seg.length();
  const bool a_in = strictly_inside(a, c);
  const bool b_in = strictly_inside(b, c);
  if (a_in && b_in) {
    push_nonempty(out, depart, depart + len);
    return;
  }
  const auto hits = circle_segment_intersections(c, kCollisionRadius, seg);
  if (a_in) {
    if (!hits.empty()) push_nonempty(out, depart, depart + hits.back().arclength);
  } else if (b_in) {
    if (!hits.empty()) push_nonempty(out, depart + hits.front().arclength, depart + len);
  } else if (hits.size() == 2) {
    push_nonempty(out, depart + hits[0].arclength, depart + hits[1].arclength);
  }
}

}  // namespace

std::vector<TimeInterval> merge_intervals(std::vector<TimeInterval> intervals) {
  std::sort(intervals.begin(), intervals.end(), [](const TimeInterval& x, const TimeInterval& y) {
    return x.start < y.start || (x.start == y.start && x.end < y.end);
  });
  std::vector<TimeInterval> merged;
  merged.reserve(intervals.size());
  for (const auto& iv : intervals) {
    if (!merged.empty() && iv.start <= merged.back().end + kEps) {
      merged.back().end = std::max(merged.back().end, iv.end);
    } else {
      merged.push_back(iv);
    }
  }
  return merged;
}

std::vector<TimeInterval> complement_intervals(std::span<const TimeInterval> collisions) {
  std::vector<TimeInterval> safe;
  double cursor = 0.0;
  for (const auto& c : collisions) {
    if (c.start > cursor + kEps) safe.push_back({cursor, c.start});
    cursor = std::max(cursor, c.end);
    if (cursor == kInfinity) return safe;
  }
  safe.push_back({cursor, kInfinity});
  return safe;
}

void occupancy_intervals(const Trajectory& obstacle, Point point, std::vector<TimeInterval>& out) {
  const auto& wps = obstacle.waypoints();
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const Waypoint& w = wps[i];
    const Point here = center(w.cell);
    if (w.wait > 0.0 && strictly_inside(here, point)) {
      if (std::isinf(w.wait)) {
        out.push_back({w.arrival, kInfinity});
      } else {
        push_nonempty(out, w.arrival, w.departure());
      }
    }
    if (i + 1 < wps.size()) move_occupancy(here, center(wps[i + 1].cell), w.departure(), point, out);
  }
}

std::vector<TimeInterval> safe_intervals(CellIndex cell, std::span<const Trajectory> obstacles) {
  std::vector<TimeInterval> collisions;
  for (const auto& obstacle : obstacles) occupancy_intervals(obstacle, center(cell), collisions);
  const auto merged = merge_intervals(std::move(collisions));
  return complement_intervals(merged);
}

ConstraintTable::ConstraintTable(int width, int height) : width_(width), height_(height) {
  if (width < 1 || height < 1) throw std::invalid_argument("table dimensions must be positive");
  cells_.resize(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
}

std::span<const Constraint> ConstraintTable::constraints(CellIndex c) const {
  if (!in_bounds(c)) return {};
  return cells_[index(c)].constraints;
}

std::span<const TimeInterval> ConstraintTable::collision_intervals(CellIndex c) const {
  if (!in_bounds(c)) return {};
  return cells_[index(c)].collisions;
}

std::span<const TimeInterval> ConstraintTable::safe_intervals(CellIndex c) const {
  if (!in_bounds(c)) return {};
  return cells_[index(c)].safe;
}

void ConstraintTable::add(const Trajectory& obstacle) {
  const int id = static_cast<int>(obstacle_count_++);
  const auto& wps = obstacle.waypoints();
  std::vector<std::size_t> dirty;
  std::vector<CellIndex> swept;

  auto cell_data = [&](CellIndex c) -> CellData* {
    if (!in_bounds(c)) return nullptr;
    CellData& data = cells_[index(c)];
    dirty.push_back(index(c));
    data.touched = true;
    return &data;
  };

  for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
    const Waypoint& from = wps[i];
    const Waypoint& to = wps[i + 1];
    const Segment seg = segment_between(from.cell, to.cell);
    const double depart = from.departure();
    swept_cells(from.cell, to.cell, swept);
    for (const CellIndex c : swept) {
      CellData* data = cell_data(c);
      if (data == nullptr) continue;
      const Point p = closest_point_on_segment(center(c), seg);
      const double along = distance(seg.a, p);
      if (along < kEps && from.wait > 0.0) {
        // The obstacle sits on p for the whole wait: one constraint per 2r.
        double t = from.arrival;
        for (; t < depart - kEps; t += kAgentDiameter) data->constraints.push_back({p, t, false, id});
        data->constraints.push_back({p, depart, false, id});
      } else {
        data->constraints.push_back({p, depart + along, false, id});
      }
      move_occupancy(seg.a, seg.b, depart, center(c), data->collisions);
      if (c == from.cell && from.wait > 0.0) {
        push_nonempty(data->collisions, from.arrival, depart);
      }
    }
  }

  const Waypoint& last = wps.back();
  if (CellData* data = cell_data(last.cell)) {
    data->constraints.push_back({center(last.cell), last.arrival, true, id});
    data->collisions.push_back({last.arrival, kInfinity});
  }

  std::sort(dirty.begin(), dirty.end());
  dirty.erase(std::unique(dirty.begin(), dirty.end()), dirty.end());
  for (const std::size_t k : dirty) {
    CellData& data = cells_[k];
    data.collisions = merge_intervals(std::move(data.collisions));
    data.safe = complement_intervals(data.collisions);
  }
}

ConstraintTable build_table(int width, int height, std::span<const Trajectory> obstacles) {
  ConstraintTable table(width, height);
  for (const auto& obstacle : obstacles) table.add(obstacle);
  return table;
}

void relevant_constraints(const Segment& move, std::span<const CellIndex> move_cells,
                          const ConstraintTable& table, std::vector<Constraint>& out) {
  out.clear();
  for (const CellIndex c : move_cells) {
    if (!table.touched(c)) continue;
    for (const Constraint& k : table.constraints(c)) {
      if (dist_point_segment(k.p, move) < kCollisionRadius - kEps) out.push_back(k);
    }
  }
}

std::vector<Constraint> relevant_constraints(CellIndex from, CellIndex to, const ConstraintTable& table) {
  const auto cells = swept_cells(from, to);
  std::vector<Constraint> out;
  relevant_constraints(segment_between(from, to), cells, table, out);
  return out;
}

std::vector<TimeInterval> collision_intervals_for_move(const Segment& move,
                                                       std::span<const Constraint> constraints) {
  std::vector<TimeInterval> intervals;
  intervals.reserve(constraints.size());
  for (const Constraint& k : constraints) {
    const Point foot = closest_point_on_segment(k.p, move);
    const double offset = distance(move.b, foot);
    const double start = k.time - kConstraintWindow + offset;
    const double end = k.half_infinite ? kInfinity : k.time + kConstraintWindow + offset;
    intervals.push_back({start, end});
  }
  return merge_intervals(std::move(intervals));
}

std::optional<double> earliest_arrival(std::span<const TimeInterval> collisions, double start_t, double end_t,
                                       const TimeInterval& interval) {
  double t = std::max(start_t, interval.start);
  for (const TimeInterval& c : collisions) {
    if (c.start >= t - kEps) break;
    if (t < c.end - kEps) {
      t = c.end;
      break;
    }
  }
  if (std::isinf(t)) return std::nullopt;
  if (t > end_t + kEps || t > interval.end + kEps || t < interval.start - kEps) return std::nullopt;
  return t;
}

}  // namespace aasipp
