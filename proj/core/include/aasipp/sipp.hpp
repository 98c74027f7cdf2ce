#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "aasipp/constraints.hpp"
#include "aasipp/grid_map.hpp"
#include "aasipp/trajectory.hpp"

namespace aasipp {

enum class Connectivity { Cardinal4, Octile8 };

struct PlannerMode {
  Connectivity connectivity = Connectivity::Octile8;
  /// Also try to reach each neighbour straight from the parent of the state
  /// being expanded.
  bool any_angle = true;

  static constexpr PlannerMode cardinal() { return {Connectivity::Cardinal4, false}; }
  static constexpr PlannerMode any_angle_mode() { return {Connectivity::Octile8, true}; }

  friend constexpr bool operator==(const PlannerMode&, const PlannerMode&) = default;
};

/// "aa" and "cardinal" for the two standard modes.
std::string_view mode_name(PlannerMode mode);

enum class PlanStatus { Success, StartBlocked, GoalBlocked, StartInCollision, GoalUnreachable, Timeout };

std::string_view status_name(PlanStatus status);

using Clock = std::chrono::steady_clock;
using Deadline = std::optional<Clock::time_point>;

/// A (cell, safe interval) search node.
struct SearchState {
  CellIndex cfg;
  std::size_t interval_index = 0;
  TimeInterval interval;
  double g = kInfinity;
  double time = kInfinity;  // earliest arrival inside `interval`
  double f = kInfinity;
  int parent = -1;
};

struct TraceEntry {
  CellIndex cfg;
  TimeInterval interval;
  double g = 0.0;
  double time = 0.0;
  double f = 0.0;
};

struct PlanResult {
  PlanStatus status = PlanStatus::GoalUnreachable;
  std::optional<Trajectory> trajectory;
  std::size_t expansions = 0;

  bool ok() const { return status == PlanStatus::Success; }
};

/// Euclidean for octile / any-angle search, Manhattan for cardinal moves.
double heuristic(CellIndex cfg, CellIndex goal, PlannerMode mode);

/// Turns a start-to-goal chain of states into a trajectory, inserting a wait
/// before each move whose arrival is later than the move alone explains.
Trajectory reconstruct(std::span<const SearchState> chain);

/// Safe-interval A* over one grid and one fixed set of moving obstacles.
/// Both the grid and the table must outlive the planner.
class SippPlanner {
 public:
  SippPlanner(const GridMap& grid, const ConstraintTable& table, PlannerMode mode);

  PlanResult plan(CellIndex start, CellIndex goal, Deadline deadline = std::nullopt);

  /// When set, every expansion is appended to `trace`.
  void set_trace(std::vector<TraceEntry>* trace) { trace_ = trace; }

  std::vector<CellIndex> neighbors(CellIndex cfg) const;

  /// States reachable at `cfg` by moving straight from `from`, one per safe
  /// interval of `cfg` that admits a collision-free arrival. The returned
  /// states carry g = from.g + elapsed time and no parent.
  std::vector<SearchState> get_successors(CellIndex cfg, const SearchState& from);

 private:
  struct OpenEntry {
    double f;
    double g;
    CellIndex cfg;
    std::size_t interval_index;
    int node;
    std::uint32_t version;
  };
  struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const;
  };
  struct Node {
    SearchState state;
    std::uint32_t version = 0;
    bool closed = false;
  };

  void reset_index();
  int node_for(CellIndex cfg, std::size_t interval_index);
  void generate(CellIndex cfg, int from, std::span<const CellIndex> move_cells);
  void relax(CellIndex cfg, std::size_t interval_index, double time, int from);

  const GridMap& grid_;
  const ConstraintTable& table_;
  PlannerMode mode_;
  std::vector<TraceEntry>* trace_ = nullptr;

  CellIndex goal_{};
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> cell_offset_;
  std::vector<int> node_index_;
  std::vector<OpenEntry> open_;

  std::vector<CellIndex> swept_;
  std::vector<CellIndex> shortcut_swept_;
  std::vector<Constraint> relevant_;
};

/// Convenience wrapper: builds the constraint table from `obstacles` first.
PlanResult plan(const GridMap& grid, std::span<const Trajectory> obstacles, CellIndex start, CellIndex goal,
                PlannerMode mode, Deadline deadline = std::nullopt);

}  // namespace aasipp
