#pragma once

// Brute-force references used by the unit and acceptance tests. They only
// share the basic types and Trajectory::position_at with the library.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <vector>

#include "aasipp/grid_map.hpp"
#include "aasipp/trajectory.hpp"

namespace aasipp::oracle {

inline double point_box_distance(double x, double y, CellIndex c) {
  const double dx = std::max(std::abs(x - c.col) - 0.5, 0.0);
  const double dy = std::max(std::abs(y - c.row) - 0.5, 0.0);
  return std::hypot(dx, dy);
}

/// Minimum distance between a segment and a cell's square, by ternary search
/// on the (convex) distance along the segment.
inline double segment_box_distance(Point a, Point b, CellIndex c) {
  auto at = [&](double t) { return point_box_distance(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), c); };
  double lo = 0.0;
  double hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (at(m1) < at(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return std::min({at(lo), at(0.0), at(1.0)});
}

/// Cells hit by an open disk of radius 0.5 whose centre runs along a->b.
/// The segment is sampled every `step`, refined with the projections of
/// nearby cell corners so that corner tangencies are not missed.
inline std::set<CellIndex> sampled_swept_cells(Point a, Point b, double step = 1e-3) {
  const double r = 0.5;
  const double len = std::hypot(b.x - a.x, b.y - a.y);
  std::vector<double> ts;
  const int n = std::max(1, static_cast<int>(std::ceil(len / step)));
  for (int i = 0; i <= n; ++i) ts.push_back(static_cast<double>(i) / n);
  const int c0 = static_cast<int>(std::floor(std::min(a.x, b.x))) - 2;
  const int c1 = static_cast<int>(std::ceil(std::max(a.x, b.x))) + 2;
  const int r0 = static_cast<int>(std::floor(std::min(a.y, b.y))) - 2;
  const int r1 = static_cast<int>(std::ceil(std::max(a.y, b.y))) + 2;
  if (len > 0.0) {
    for (int col = c0; col <= c1; ++col) {
      for (int row = r0; row <= r1; ++row) {
        const double cx = col + 0.5;
        const double cy = row + 0.5;
        const double t = ((cx - a.x) * (b.x - a.x) + (cy - a.y) * (b.y - a.y)) / (len * len);
        if (t > 0.0 && t < 1.0) ts.push_back(t);
      }
    }
  }
  std::set<CellIndex> out;
  for (const double t : ts) {
    const double x = a.x + t * (b.x - a.x);
    const double y = a.y + t * (b.y - a.y);
    const int cx = static_cast<int>(std::lround(x));
    const int cy = static_cast<int>(std::lround(y));
    for (int col = cx - 1; col <= cx + 1; ++col) {
      for (int row = cy - 1; row <= cy + 1; ++row) {
        if (point_box_distance(x, y, {col, row}) < r - 1e-9) out.insert({col, row});
      }
    }
  }
  return out;
}

/// Times when some obstacle centre is closer than `radius` to `p`, sampled.
inline bool occupied(std::span<const Trajectory> obstacles, Point p, double t, double radius = 1.0) {
  for (const auto& o : obstacles) {
    if (distance(o.position_at(t), p) < radius) return true;
  }
  return false;
}

/// First sampled time the two centres are closer than 1 - 1e-6.
inline std::optional<double> sampled_first_conflict(const Trajectory& a, const Trajectory& b, double step = 1e-4) {
  const double horizon = std::max(a.final_arrival(), b.final_arrival()) + 1.0;
  const auto n = static_cast<long>(std::ceil(horizon / step));
  for (long k = 0; k <= n; ++k) {
    const double t = static_cast<double>(k) * step;
    if (distance(a.position_at(t), b.position_at(t)) < 1.0 - 1e-6) return t;
  }
  return std::nullopt;
}

inline std::vector<CellIndex> move_offsets(bool octile) {
  std::vector<CellIndex> out{{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  if (octile) out.insert(out.end(), {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}});
  return out;
}

/// Cells reachable from `start` over feasible unit moves.
inline std::set<CellIndex> flood_fill(const GridMap& grid, CellIndex start, bool octile) {
  std::set<CellIndex> seen;
  if (!grid.is_traversable(start)) return seen;
  std::deque<CellIndex> queue{start};
  seen.insert(start);
  const auto offsets = move_offsets(octile);
  while (!queue.empty()) {
    const CellIndex c = queue.front();
    queue.pop_front();
    for (const CellIndex d : offsets) {
      const CellIndex n{c.col + d.col, c.row + d.row};
      if (seen.contains(n) || !move_is_feasible(grid, c, n)) continue;
      seen.insert(n);
      queue.push_back(n);
    }
  }
  return seen;
}

/// Cardinal moves and short waits on a time lattice of `dt`, with a
/// deliberately pessimistic collision model: the agent must stay at least
/// 1 + margin away from every position an obstacle holds within +-2 time
/// units of the current time. Anything this model accepts, the planner's
/// windowed constraints accept as well, so its optimum bounds the planner's
/// cost from above. Returns the cost of the best plan, if any.
class TimeExpandedOracle {
 public:
  TimeExpandedOracle(const GridMap& grid, std::vector<Trajectory> obstacles, double dt = 0.25, double horizon = 30.0)
      : grid_(grid), obstacles_(std::move(obstacles)), dt_(dt), steps_(static_cast<int>(horizon / dt)) {
    for (const auto& o : obstacles_) settle_ = std::max(settle_, o.final_arrival());
  }

  std::optional<double> solve(CellIndex start, CellIndex goal) const {
    const int per_move = static_cast<int>(std::lround(1.0 / dt_));
    if (!safe_at(center(start), 0.0)) return std::nullopt;
    std::set<std::pair<int, CellIndex>> seen{{0, start}};
    // Layers in time order; the first goal accepted is optimal.
    std::map<int, std::vector<CellIndex>> layers;
    layers[0].push_back(start);
    for (int k = 0; k <= steps_; ++k) {
      auto it = layers.find(k);
      if (it == layers.end()) continue;
      for (const CellIndex c : it->second) {
        const double t = k * dt_;
        if (c == goal && parked_safely(goal, t)) return t;
        if (k + 1 <= steps_ && safe_path(center(c), center(c), t, t + dt_) && seen.insert({k + 1, c}).second) {
          layers[k + 1].push_back(c);
        }
        for (const CellIndex d : move_offsets(false)) {
          const CellIndex n{c.col + d.col, c.row + d.row};
          if (!grid_.is_traversable(n) || !move_is_feasible(grid_, c, n)) continue;
          if (k + per_move > steps_) continue;
          if (!safe_path(center(c), center(n), t, t + 1.0)) continue;
          if (seen.insert({k + per_move, n}).second) layers[k + per_move].push_back(n);
        }
      }
    }
    return std::nullopt;
  }

 private:
  static constexpr double kSample = 0.05;
  static constexpr double kClearance = 1.0 + 0.06;
  static constexpr double kWindow = 2.0;

  bool safe_at(Point p, double t) const {
    for (const auto& o : obstacles_) {
      const int n = static_cast<int>(std::ceil(2.0 * kWindow / kSample));
      for (int i = 0; i <= n; ++i) {
        const double s = std::max(0.0, t - kWindow + i * kSample);
        if (distance(o.position_at(s), p) < kClearance) return false;
      }
    }
    return true;
  }

  bool safe_path(Point a, Point b, double t0, double t1) const {
    const int n = std::max(1, static_cast<int>(std::ceil((t1 - t0) / kSample)));
    for (int i = 0; i <= n; ++i) {
      const double u = static_cast<double>(i) / n;
      if (!safe_at(a + u * (b - a), t0 + u * (t1 - t0))) return false;
    }
    return true;
  }

  bool parked_safely(CellIndex goal, double t) const {
    return safe_path(center(goal), center(goal), t, std::max(t, settle_) + kWindow + 1.0);
  }

  const GridMap& grid_;
  std::vector<Trajectory> obstacles_;
  double dt_;
  int steps_;
  double settle_ = 0.0;
};

}  // namespace aasipp::oracle
