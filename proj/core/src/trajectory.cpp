#include "aasipp/trajectory.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace aasipp {

namespace {

constexpr double kTimingTolerance = 1e-7;

}  // namespace

Trajectory::Trajectory(std::vector<Waypoint> waypoints) : waypoints_(std::move(waypoints)) {
  if (waypoints_.empty()) throw std::invalid_argument("trajectory needs at least one waypoint");
  if (waypoints_.front().arrival != 0.0) throw std::invalid_argument("trajectory must start at time 0");
  if (!std::isinf(waypoints_.back().wait)) throw std::invalid_argument("terminal wait must be infinite");
  for (std::size_t i = 0; i + 1 < waypoints_.size(); ++i) {
    const Waypoint& cur = waypoints_[i];
    const Waypoint& next = waypoints_[i + 1];
    if (cur.cell == next.cell) throw std::invalid_argument("consecutive waypoints share a cell");
    if (!(cur.wait >= 0.0) || std::isinf(cur.wait)) throw std::invalid_argument("invalid wait duration");
    const double expected = cur.departure() + distance(cur.cell, next.cell);
    if (std::abs(next.arrival - expected) > kTimingTolerance * std::max(1.0, expected)) {
      throw std::invalid_argument("arrival time inconsistent with unit speed");
    }
  }
}

Trajectory Trajectory::stationary(CellIndex cell) { return Trajectory({{cell, 0.0, kInfinity}}); }

Point Trajectory::position_at(double time) const {
  // Last waypoint whose arrival is <= time.
  const auto it = std::upper_bound(waypoints_.begin(), waypoints_.end(), time,
                                   [](double t, const Waypoint& w) { return t < w.arrival; });
  if (it == waypoints_.begin()) return center(waypoints_.front().cell);
  const Waypoint& cur = *(it - 1);
  if (it == waypoints_.end() || time <= cur.departure()) return center(cur.cell);
  const Point a = center(cur.cell);
  const Point b = center(it->cell);
  const double len = distance(a, b);
  const double s = std::clamp((time - cur.departure()) / len, 0.0, 1.0);
  return a + s * (b - a);
}

TrajectoryBuilder::TrajectoryBuilder(CellIndex start) { waypoints_.push_back({start, 0.0, 0.0}); }

TrajectoryBuilder& TrajectoryBuilder::wait(double duration) {
  waypoints_.back().wait += duration;
  return *this;
}

TrajectoryBuilder& TrajectoryBuilder::move_to(CellIndex cell) {
  const Waypoint& last = waypoints_.back();
  waypoints_.push_back({cell, last.departure() + distance(last.cell, cell), 0.0});
  return *this;
}

Trajectory TrajectoryBuilder::build() const {
  auto copy = waypoints_;
  copy.back().wait = kInfinity;
  return Trajectory(std::move(copy));
}

double solution_cost(std::span<const Trajectory> trajectories) {
  double total = 0.0;
  for (const auto& t : trajectories) total += t.cost();
  return total;
}

std::string format_number(double value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf.data(), end);
}

void write_waypoints(std::ostream& out, const Trajectory& trajectory) {
  for (const auto& w : trajectory.waypoints()) {
    out << w.cell.col << ' ' << w.cell.row << ' ' << format_number(w.arrival) << ' '
        << format_number(w.wait) << '\n';
  }
}

Trajectory read_waypoints(std::istream& in, std::size_t count) {
  std::vector<Waypoint> waypoints;
  waypoints.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Waypoint w;
    std::string arrival;
    std::string wait;
    if (!(in >> w.cell.col >> w.cell.row >> arrival >> wait)) {
      throw std::runtime_error("truncated waypoint list");
    }
    w.arrival = std::stod(arrival);
    w.wait = wait == "inf" ? kInfinity : std::stod(wait);
    waypoints.push_back(w);
  }
  return Trajectory(std::move(waypoints));
}

}  // namespace aasipp
