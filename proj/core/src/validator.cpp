#include "aasipp/validator.hpp"

#include <algorithm>
#include <cmath>

namespace aasipp {

namespace {

// Motion on [t0, t1): position p0 + v * (t - t0).
struct Piece {
  double t0;
  double t1;
  Point p0;
  Point v;
};

std::vector<Piece> pieces(const Trajectory& traj) {
  std::vector<Piece> out;
  const auto& wps = traj.waypoints();
  for (std::size_t i = 0; i < wps.size(); ++i) {
    const Waypoint& w = wps[i];
    const Point here = center(w.cell);
    if (i + 1 == wps.size()) {
      out.push_back({w.arrival, kInfinity, here, {0.0, 0.0}});
      break;
    }
    if (w.wait > 0.0) out.push_back({w.arrival, w.departure(), here, {0.0, 0.0}});
    const Point there = center(wps[i + 1].cell);
    const double len = distance(here, there);
    out.push_back({w.departure(), wps[i + 1].arrival, here, (1.0 / len) * (there - here)});
  }
  return out;
}

Point at(const Piece& p, double t) { return p.p0 + (t - p.t0) * p.v; }

}  // namespace

std::optional<Conflict> first_conflict(const Trajectory& a, const Trajectory& b) {
  return first_conflict(a, b, 0.0, kInfinity);
}

std::optional<Conflict> first_conflict(const Trajectory& a, const Trajectory& b, double from, double to) {
  const auto pa = pieces(a);
  const auto pb = pieces(b);
  const double limit2 = kConflictDistance * kConflictDistance;
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pa.size() && j < pb.size()) {
    const Piece& x = pa[i];
    const Piece& y = pb[j];
    const double lo = std::max({x.t0, y.t0, from});
    const double hi = std::min({x.t1, y.t1, to});
    // Pieces are half-open; the window's closing instant is checked on its own.
    if (lo < hi || (lo == hi && lo == to && x.t1 > to && y.t1 > to)) {
      // d(s) = D + V s for s in [0, hi - lo]
      const Point D = at(x, lo) - at(y, lo);
      const Point V = x.v - y.v;
      const double dd = dot(D, D);
      const double dv = dot(D, V);
      const double vv = dot(V, V);
      const double span = hi - lo;
      std::optional<double> entry;
      if (dd < limit2) {
        entry = 0.0;
      } else if (vv > 0.0 && dv < 0.0) {
        const double disc = dv * dv - vv * (dd - limit2);
        if (disc > 0.0) {
          const double s = (-dv - std::sqrt(disc)) / vv;
          if (s < span) entry = std::max(0.0, s);
        }
      }
      if (entry) {
        const double closest = vv > 0.0 ? std::clamp(-dv / vv, 0.0, span) : 0.0;
        const double t = lo + *entry;
        return Conflict{t, 0, 1, at(x, t), at(y, t), lo + closest};
      }
    }
    if (x.t1 < y.t1) {
      ++i;
    } else if (y.t1 < x.t1) {
      ++j;
    } else {
      ++i;
      ++j;
    }
  }
  return std::nullopt;
}

std::string_view violation_name(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::BlockedSegment:
      return "blocked-segment";
    case ViolationKind::BlockedCell:
      return "blocked-cell";
    case ViolationKind::WrongStart:
      return "wrong-start";
    case ViolationKind::WrongGoal:
      return "wrong-goal";
    case ViolationKind::MissingTrajectory:
      return "missing-trajectory";
  }
  return "unknown";
}

ValidationReport validate_solution(const Instance& instance, std::span<const Trajectory> trajectories) {
  ValidationReport report;
  const GridMap& grid = *instance.grid;
  std::vector<CellIndex> scratch;
  for (std::size_t k = 0; k < instance.agents.size(); ++k) {
    const int agent = static_cast<int>(k);
    const Agent& want = instance.agents[k];
    if (k >= trajectories.size()) {
      report.static_violations.push_back({agent, -1, want.start, ViolationKind::MissingTrajectory});
      continue;
    }
    const Trajectory& traj = trajectories[k];
    if (traj.start() != want.start) {
      report.static_violations.push_back({agent, -1, traj.start(), ViolationKind::WrongStart});
    }
    if (traj.goal() != want.goal) {
      report.static_violations.push_back({agent, -1, traj.goal(), ViolationKind::WrongGoal});
    }
    const auto& wps = traj.waypoints();
    for (std::size_t w = 0; w < wps.size(); ++w) {
      if (!grid.is_traversable(wps[w].cell)) {
        report.static_violations.push_back({agent, static_cast<int>(w), wps[w].cell, ViolationKind::BlockedCell});
      }
    }
    for (std::size_t s = 0; s + 1 < wps.size(); ++s) {
      if (!move_is_feasible(grid, wps[s].cell, wps[s + 1].cell, scratch)) {
        report.static_violations.push_back(
            {agent, static_cast<int>(s), wps[s + 1].cell, ViolationKind::BlockedSegment});
      }
    }
  }
  const std::size_t n = std::min(trajectories.size(), instance.agents.size());
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (auto c = first_conflict(trajectories[p], trajectories[q])) {
        c->agent_a = static_cast<int>(p);
        c->agent_b = static_cast<int>(q);
        report.conflicts.push_back(*c);
      }
    }
  }
  report.ok = report.conflicts.empty() && report.static_violations.empty();
  return report;
}

ValidationReport validate_solution(const Instance& instance, const Solution& solution) {
  return validate_solution(instance, solution.trajectories);
}

}  // namespace aasipp
