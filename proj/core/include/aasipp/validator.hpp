#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aasipp/geometry.hpp"
#include "aasipp/prioritized.hpp"
#include "aasipp/trajectory.hpp"

namespace aasipp {

/// Centre distance below which two agents are in conflict.
inline constexpr double kConflictDistance = kAgentDiameter - 1e-9;

struct Conflict {
  /// Earliest time the centres are closer than kConflictDistance.
  double time = 0.0;
  int agent_a = 0;
  int agent_b = 0;
  Point position_a;
  Point position_b;
  /// Time of closest approach within the first offending pair of motion
  /// pieces.
  double closest_time = 0.0;
};

/// Exact check over the piecewise-affine motions. Agent indices in the
/// result are 0 and 1.
std::optional<Conflict> first_conflict(const Trajectory& a, const Trajectory& b);

/// Same, restricted to the closed time window [from, to].
std::optional<Conflict> first_conflict(const Trajectory& a, const Trajectory& b, double from, double to);

enum class ViolationKind { BlockedSegment, BlockedCell, WrongStart, WrongGoal, MissingTrajectory };

std::string_view violation_name(ViolationKind kind);

struct StaticViolation {
  int agent = 0;
  /// Segment index for BlockedSegment, waypoint index for BlockedCell, -1
  /// otherwise.
  int segment = -1;
  CellIndex cell;
  ViolationKind kind = ViolationKind::BlockedSegment;
};

struct ValidationReport {
  std::vector<Conflict> conflicts;
  std::vector<StaticViolation> static_violations;
  bool ok = true;
};

/// Pairwise conflicts over all agents plus static checks of every
/// trajectory against the instance's grid, start and goal.
ValidationReport validate_solution(const Instance& instance, std::span<const Trajectory> trajectories);
ValidationReport validate_solution(const Instance& instance, const Solution& solution);

}  // namespace aasipp
