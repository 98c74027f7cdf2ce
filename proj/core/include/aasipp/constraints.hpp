#pragma once

#include <optional>
#include <span>
#include <vector>

#include "aasipp/geometry.hpp"
#include "aasipp/trajectory.hpp"

namespace aasipp {

/// A time window; `end` may be +inf. Collision intervals are read as closed
/// and safe intervals as the open gaps between them, so arriving exactly on
/// a collision-interval endpoint is allowed.
struct TimeInterval {
  double start = 0.0;
  double end = kInfinity;

  bool unbounded() const { return end == kInfinity; }
  friend bool operator==(const TimeInterval&, const TimeInterval&) = default;
};

/// Sorts by start and unions intervals that overlap or touch within kEps.
std::vector<TimeInterval> merge_intervals(std::vector<TimeInterval> intervals);

/// Gaps of [0, inf) not covered by `collisions` (which must be merged).
std::vector<TimeInterval> complement_intervals(std::span<const TimeInterval> collisions);

/// Times at which the obstacle centre is strictly closer than 2r to `point`,
/// one (unmerged) interval per trajectory piece that comes that close.
void occupancy_intervals(const Trajectory& obstacle, Point point, std::vector<TimeInterval>& out);

/// Safe intervals of a parked agent at `cell`, computed directly from the
/// obstacle trajectories with radius-2r circle intersections.
std::vector<TimeInterval> safe_intervals(CellIndex cell, std::span<const Trajectory> obstacles);

/// Obstacle centre at `p` at time `time`; with `half_infinite` the obstacle
/// stays at `p` from `time` onwards.
struct Constraint {
  Point p;
  double time = 0.0;
  bool half_infinite = false;
  int obstacle = -1;
};

/// Per-cell constraints and safe intervals induced by a growing set of
/// obstacle trajectories. Each trajectory is traced once, when added.
class ConstraintTable {
 public:
  ConstraintTable(int width, int height);

  /// Adds a planned trajectory as a moving obstacle. Every cell swept by
  /// one of its segments receives a constraint at the segment point closest
  /// to the cell centre; waits at a segment start are expanded into
  /// constraints spaced 2r apart in time, and the goal receives a
  /// half-infinite constraint.
  void add(const Trajectory& obstacle);

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t obstacle_count() const { return obstacle_count_; }

  bool in_bounds(CellIndex c) const {
    return c.col >= 0 && c.row >= 0 && c.col < width_ && c.row < height_;
  }

  /// True iff some obstacle segment sweeps `c`.
  bool touched(CellIndex c) const { return in_bounds(c) && cells_[index(c)].touched; }

  std::span<const Constraint> constraints(CellIndex c) const;
  std::span<const TimeInterval> collision_intervals(CellIndex c) const;
  /// [[0, inf)] for cells no obstacle comes near.
  std::span<const TimeInterval> safe_intervals(CellIndex c) const;

 private:
  struct CellData {
    bool touched = false;
    std::vector<Constraint> constraints;
    std::vector<TimeInterval> collisions;
    std::vector<TimeInterval> safe{TimeInterval{}};
  };

  std::size_t index(CellIndex c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }

  int width_;
  int height_;
  std::size_t obstacle_count_ = 0;
  std::vector<CellData> cells_;
};

ConstraintTable build_table(int width, int height, std::span<const Trajectory> obstacles);

/// Constraints attached to cells swept by both an obstacle and the move,
/// keeping only those closer than 2r to the move segment.
std::vector<Constraint> relevant_constraints(CellIndex from, CellIndex to, const ConstraintTable& table);

/// Variant for a move whose swept cells are already known.
void relevant_constraints(const Segment& move, std::span<const CellIndex> move_cells,
                          const ConstraintTable& table, std::vector<Constraint>& out);

/// Arrival times at move.b that bring the agent within the 4r window of a
/// constraint: [time - 4r + offset, time + 4r + offset] where offset is the
/// distance from move.b back to the move point closest to the constraint.
/// Sorted and merged.
std::vector<TimeInterval> collision_intervals_for_move(const Segment& move,
                                                       std::span<const Constraint> constraints);

/// Earliest arrival no earlier than `start_t` inside `interval` that is not
/// strictly inside a collision interval, or nullopt when it would exceed
/// `end_t` or the end of `interval`.
std::optional<double> earliest_arrival(std::span<const TimeInterval> collisions, double start_t, double end_t,
                                       const TimeInterval& interval);

}  // namespace aasipp
