#include "aasipp/sipp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace aasipp {

std::string_view mode_name(PlannerMode mode) {
  if (mode == PlannerMode::any_angle_mode()) return "aa";
  if (mode == PlannerMode::cardinal()) return "cardinal";
  if (mode.connectivity == Connectivity::Octile8) return mode.any_angle ? "octile-aa" : "octile";
  return mode.any_angle ? "cardinal-aa" : "cardinal";
}

std::string_view status_name(PlanStatus status) {
  switch (status) {
    case PlanStatus::Success:
      return "success";
    case PlanStatus::StartBlocked:
      return "start-blocked";
    case PlanStatus::GoalBlocked:
      return "goal-blocked";
    case PlanStatus::StartInCollision:
      return "start-in-collision";
    case PlanStatus::GoalUnreachable:
      return "goal-unreachable";
    case PlanStatus::Timeout:
      return "timeout";
  }
  return "unknown";
}

double heuristic(CellIndex cfg, CellIndex goal, PlannerMode mode) {
  if (mode.connectivity == Connectivity::Cardinal4 && !mode.any_angle) {
    return std::abs(cfg.col - goal.col) + std::abs(cfg.row - goal.row);
  }
  return distance(cfg, goal);
}

Trajectory reconstruct(std::span<const SearchState> chain) {
  if (chain.empty()) throw std::invalid_argument("empty state chain");
  std::vector<Waypoint> waypoints;
  waypoints.reserve(chain.size());
  for (std::size_t i = 0; i < chain.size(); ++i) {
    Waypoint w{chain[i].cfg, i == 0 ? 0.0 : chain[i].time, kInfinity};
    if (i + 1 < chain.size()) {
      const double move = distance(chain[i].cfg, chain[i + 1].cfg);
      const double wait = chain[i + 1].time - chain[i].time - move;
      w.wait = wait > kEps ? wait : 0.0;
    }
    waypoints.push_back(w);
  }
  return Trajectory(std::move(waypoints));
}

bool SippPlanner::OpenOrder::operator()(const OpenEntry& a, const OpenEntry& b) const {
  // std::push_heap keeps the "largest" on top, so return true when `a`
  // should be expanded after `b`.
  if (a.f != b.f) return a.f > b.f;
  if (a.g != b.g) return a.g < b.g;
  if (a.cfg != b.cfg) return a.cfg > b.cfg;
  return a.interval_index > b.interval_index;
}

SippPlanner::SippPlanner(const GridMap& grid, const ConstraintTable& table, PlannerMode mode)
    : grid_(grid), table_(table), mode_(mode) {
  if (grid.width() != table.width() || grid.height() != table.height()) {
    throw std::invalid_argument("constraint table does not match grid dimensions");
  }
}

std::vector<CellIndex> SippPlanner::neighbors(CellIndex cfg) const {
  static constexpr int kCardinal[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  static constexpr int kDiagonal[4][2] = {{1, 1}, {-1, 1}, {-1, -1}, {1, -1}};
  std::vector<CellIndex> out;
  out.reserve(8);
  for (const auto& d : kCardinal) out.push_back({cfg.col + d[0], cfg.row + d[1]});
  if (mode_.connectivity == Connectivity::Octile8) {
    for (const auto& d : kDiagonal) out.push_back({cfg.col + d[0], cfg.row + d[1]});
  }
  return out;
}

namespace {

// Screen each safe interval of the destination against the window of
// feasible arrivals, then push the arrival past the move's collision
// intervals.
template <typename Emit>
void successor_times(const ConstraintTable& table, CellIndex cfg, const SearchState& from,
                     std::span<const CellIndex> move_cells, std::vector<Constraint>& relevant, Emit&& emit) {
  const Segment move = segment_between(from.cfg, cfg);
  const double move_time = move.length();
  const double start_t = from.time + move_time;
  const double end_t = from.interval.end + move_time;

  relevant_constraints(move, move_cells, table, relevant);
  const auto collisions = collision_intervals_for_move(move, relevant);

  const auto intervals = table.safe_intervals(cfg);
  for (std::size_t i = 0; i < intervals.size(); ++i) {
    const TimeInterval& iv = intervals[i];
    if (iv.start > end_t || iv.end < start_t) continue;
    if (const auto t = earliest_arrival(collisions, start_t, end_t, iv)) emit(i, iv, *t);
  }
}

}  // namespace

std::vector<SearchState> SippPlanner::get_successors(CellIndex cfg, const SearchState& from) {
  std::vector<SearchState> out;
  if (!move_is_feasible(grid_, from.cfg, cfg, swept_)) return out;
  successor_times(table_, cfg, from, swept_, relevant_, [&](std::size_t i, const TimeInterval& iv, double t) {
    const double g = from.g + (t - from.time);
    out.push_back({cfg, i, iv, g, t, g + heuristic(cfg, goal_, mode_), -1});
  });
  return out;
}

void SippPlanner::reset_index() {
  const std::size_t cells = grid_.cell_count();
  cell_offset_.assign(cells + 1, 0);
  for (std::size_t k = 0; k < cells; ++k) {
    cell_offset_[k + 1] =
        cell_offset_[k] + static_cast<std::uint32_t>(table_.safe_intervals(grid_.cell(k)).size());
  }
  node_index_.assign(cell_offset_.back(), -1);
  nodes_.clear();
  open_.clear();
}

int SippPlanner::node_for(CellIndex cfg, std::size_t interval_index) {
  int& slot = node_index_[cell_offset_[grid_.index(cfg)] + interval_index];
  if (slot < 0) {
    slot = static_cast<int>(nodes_.size());
    Node node;
    node.state.cfg = cfg;
    node.state.interval_index = interval_index;
    node.state.interval = table_.safe_intervals(cfg)[interval_index];
    nodes_.push_back(node);
  }
  return slot;
}

void SippPlanner::relax(CellIndex cfg, std::size_t interval_index, double time, int from) {
  const int id = node_for(cfg, interval_index);
  const SearchState& parent = nodes_[static_cast<std::size_t>(from)].state;
  // Cost of the step is the move plus any wait it forces, i.e. elapsed time.
  const double g = parent.g + (time - parent.time);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  if (!(g < node.state.g - kEps)) return;
  node.state.g = g;
  node.state.time = time;
  node.state.parent = from;
  node.state.f = g + heuristic(cfg, goal_, mode_);
  node.closed = false;
  ++node.version;
  open_.push_back({node.state.f, g, cfg, interval_index, id, node.version});
  std::push_heap(open_.begin(), open_.end(), OpenOrder{});
}

void SippPlanner::generate(CellIndex cfg, int from, std::span<const CellIndex> move_cells) {
  // Copy: relax() may grow nodes_ and invalidate references.
  const SearchState source = nodes_[static_cast<std::size_t>(from)].state;
  successor_times(table_, cfg, source, move_cells, relevant_,
                  [&](std::size_t i, const TimeInterval&, double t) { relax(cfg, i, t, from); });
}

PlanResult SippPlanner::plan(CellIndex start, CellIndex goal, Deadline deadline) {
  PlanResult result;
  if (!grid_.is_traversable(start)) {
    result.status = PlanStatus::StartBlocked;
    return result;
  }
  if (!grid_.is_traversable(goal)) {
    result.status = PlanStatus::GoalBlocked;
    return result;
  }
  const auto start_intervals = table_.safe_intervals(start);
  if (start_intervals.empty() || start_intervals.front().start > kEps) {
    result.status = PlanStatus::StartInCollision;
    return result;
  }

  goal_ = goal;
  reset_index();
  {
    const int id = node_for(start, 0);
    Node& node = nodes_[static_cast<std::size_t>(id)];
    node.state.g = 0.0;
    node.state.time = 0.0;
    node.state.f = heuristic(start, goal, mode_);
    open_.push_back({node.state.f, 0.0, start, 0, id, node.version});
  }

  while (!open_.empty()) {
    std::pop_heap(open_.begin(), open_.end(), OpenOrder{});
    const OpenEntry top = open_.back();
    open_.pop_back();
    Node& node = nodes_[static_cast<std::size_t>(top.node)];
    if (node.closed || node.version != top.version) continue;
    node.closed = true;
    ++result.expansions;

    if (deadline && (result.expansions & 0xFF) == 1 && Clock::now() > *deadline) {
      result.status = PlanStatus::Timeout;
      return result;
    }

    const SearchState s = node.state;
    if (trace_ != nullptr) trace_->push_back({s.cfg, s.interval, s.g, s.time, s.f});

    if (s.cfg == goal && s.interval.unbounded()) {
      std::vector<SearchState> chain;
      for (int id = top.node; id >= 0; id = nodes_[static_cast<std::size_t>(id)].state.parent) {
        chain.push_back(nodes_[static_cast<std::size_t>(id)].state);
      }
      std::reverse(chain.begin(), chain.end());
      result.trajectory = reconstruct(chain);
      result.status = PlanStatus::Success;
      return result;
    }

    for (const CellIndex cfg : neighbors(s.cfg)) {
      if (!move_is_feasible(grid_, s.cfg, cfg, swept_)) continue;
      // Shortcut first so that it wins ties against the grid move.
      if (mode_.any_angle && s.parent >= 0) {
        const CellIndex grand = nodes_[static_cast<std::size_t>(s.parent)].state.cfg;
        if (grand != cfg && move_is_feasible(grid_, grand, cfg, shortcut_swept_)) {
          generate(cfg, s.parent, shortcut_swept_);
        }
      }
      generate(cfg, top.node, swept_);
    }
  }
  result.status = PlanStatus::GoalUnreachable;
  return result;
}

PlanResult plan(const GridMap& grid, std::span<const Trajectory> obstacles, CellIndex start, CellIndex goal,
                PlannerMode mode, Deadline deadline) {
  const ConstraintTable table = build_table(grid.width(), grid.height(), obstacles);
  SippPlanner planner(grid, table, mode);
  return planner.plan(start, goal, deadline);
}

}  // namespace aasipp
