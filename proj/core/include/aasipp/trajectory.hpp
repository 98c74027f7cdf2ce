#pragma once

#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "aasipp/geometry.hpp"

namespace aasipp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Waypoint {
  CellIndex cell;
  double arrival = 0.0;
  double wait = 0.0;  // +inf on the final waypoint

  double departure() const { return arrival + wait; }
};

/// A path of straight segments between cell centres plus the waits taken at
/// each segment start. The agent moves at unit speed, arrives at the last
/// waypoint and stays there forever.
class Trajectory {
 public:
  /// Validates the timing invariants: first arrival 0, distinct consecutive
  /// cells, arrival[i+1] = departure[i] + segment length, terminal wait
  /// infinite. Throws std::invalid_argument otherwise.
  explicit Trajectory(std::vector<Waypoint> waypoints);

  /// Agent sitting on `cell` from time zero onwards.
  static Trajectory stationary(CellIndex cell);

  const std::vector<Waypoint>& waypoints() const { return waypoints_; }
  std::size_t segment_count() const { return waypoints_.size() - 1; }
  Segment segment(std::size_t i) const {
    return segment_between(waypoints_[i].cell, waypoints_[i + 1].cell);
  }

  CellIndex start() const { return waypoints_.front().cell; }
  CellIndex goal() const { return waypoints_.back().cell; }
  double final_arrival() const { return waypoints_.back().arrival; }

  /// Piecewise-linear position; the goal centre after the final arrival.
  Point position_at(double time) const;

  /// Segment lengths plus finite waits, i.e. the final arrival time.
  double cost() const { return final_arrival(); }

 private:
  std::vector<Waypoint> waypoints_;
};

/// Incremental construction from a start cell, mostly for tests and tools.
class TrajectoryBuilder {
 public:
  explicit TrajectoryBuilder(CellIndex start);
  TrajectoryBuilder& wait(double duration);
  TrajectoryBuilder& move_to(CellIndex cell);
  Trajectory build() const;

 private:
  std::vector<Waypoint> waypoints_;
};

double solution_cost(std::span<const Trajectory> trajectories);

/// One line per waypoint: `col row arrival_time wait_duration`, the terminal
/// wait written as `inf`.
void write_waypoints(std::ostream& out, const Trajectory& trajectory);
Trajectory read_waypoints(std::istream& in, std::size_t count);

/// Shortest decimal text that parses back to exactly `value`; `inf` for
/// positive infinity.
std::string format_number(double value);

}  // namespace aasipp
