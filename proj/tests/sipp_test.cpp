#include <gtest/gtest.h>

#include <random>

#include "aasipp/sipp.hpp"
#include "aasipp/validator.hpp"
#include "oracles.hpp"
#include "scenes.hpp"

namespace aasipp {
namespace {

constexpr PlannerMode kAa = PlannerMode::any_angle_mode();
constexpr PlannerMode kCardinal = PlannerMode::cardinal();

TEST(Plan, StraightLineOnEmptyGrid) {
  const GridMap g(8, 8);
  const auto aa = plan(g, {}, {0, 0}, {3, 4}, kAa);
  ASSERT_TRUE(aa.ok());
  EXPECT_NEAR(aa.trajectory->cost(), 5.0, 1e-9);
  EXPECT_EQ(aa.trajectory->waypoints().size(), 2u);
  const auto card = plan(g, {}, {0, 0}, {3, 4}, kCardinal);
  ASSERT_TRUE(card.ok());
  EXPECT_NEAR(card.trajectory->cost(), 7.0, 1e-9);
}

TEST(Plan, StartEqualsGoal) {
  const GridMap g(4, 4);
  const auto r = plan(g, {}, {1, 1}, {1, 1}, kAa);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.trajectory->cost(), 0.0);
}

TEST(Plan, ReportsDistinctFailures) {
  GridMap g(6, 6);
  g.set_blocked({0, 0}, true);
  g.set_blocked({5, 5}, true);
  EXPECT_EQ(plan(g, {}, {0, 0}, {3, 3}, kAa).status, PlanStatus::StartBlocked);
  EXPECT_EQ(plan(g, {}, {3, 3}, {5, 5}, kAa).status, PlanStatus::GoalBlocked);
  EXPECT_EQ(plan(g, {}, {3, 3}, {9, 9}, kAa).status, PlanStatus::GoalBlocked);

  const std::vector<Trajectory> parked{Trajectory::stationary({1, 1})};
  EXPECT_EQ(plan(g, parked, {1, 1}, {3, 3}, kAa).status, PlanStatus::StartInCollision);
  // Goal permanently occupied: no unbounded interval there.
  const std::vector<Trajectory> on_goal{Trajectory::stationary({3, 3})};
  EXPECT_EQ(plan(g, on_goal, {1, 1}, {3, 3}, kAa).status, PlanStatus::GoalUnreachable);

  GridMap wall(5, 3);
  for (int r = 0; r < 3; ++r) wall.set_blocked({2, r}, true);
  EXPECT_EQ(plan(wall, {}, {0, 1}, {4, 1}, kAa).status, PlanStatus::GoalUnreachable);
}

TEST(Plan, ExpiredDeadlineTimesOut) {
  const GridMap g(16, 16);
  const auto r = plan(g, {}, {0, 0}, {15, 15}, kAa, Clock::now() - std::chrono::seconds(1));
  EXPECT_EQ(r.status, PlanStatus::Timeout);
}

TEST(Plan, CorridorCrossingForcesWait) {
  // Plus-shaped free area: row 2 and column 2.
  GridMap g(5, 5);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) g.set_blocked({c, r}, r != 2 && c != 2);
  }
  const std::vector<Trajectory> obs{TrajectoryBuilder({2, 0}).move_to({2, 4}).build()};
  for (const PlannerMode mode : {kAa, kCardinal}) {
    const auto r = plan(g, obs, {0, 2}, {4, 2}, mode);
    ASSERT_TRUE(r.ok());
    const Trajectory& t = *r.trajectory;
    EXPECT_GT(t.cost(), 4.0 + 1e-6);  // straight line alone would collide
    EXPECT_FALSE(first_conflict(t, obs[0]).has_value());
    double waited = 0.0;
    for (const auto& w : t.waypoints()) waited += std::isinf(w.wait) ? 0.0 : w.wait;
    EXPECT_NEAR(t.cost(), 4.0 + waited, 1e-9);

    const oracle::TimeExpandedOracle lattice(g, obs);
    const auto bound = lattice.solve({0, 2}, {4, 2});
    ASSERT_TRUE(bound.has_value());
    EXPECT_LE(t.cost(), *bound + 1e-6);
  }
}

TEST(Plan, MatchesLatticeBoundOnSmallScenes) {
  std::mt19937 rng(77);
  std::uniform_int_distribution<int> coord(0, 4);
  int compared = 0;
  for (int i = 0; i < 60; ++i) {
    const GridMap g(5, 5);
    const std::vector<Trajectory> obs{scenes::random_trajectory(rng, 5, 5, 2, 2.0)};
    const CellIndex s{coord(rng), coord(rng)};
    const CellIndex goal{coord(rng), coord(rng)};
    const oracle::TimeExpandedOracle lattice(g, obs);
    const auto bound = lattice.solve(s, goal);
    if (!bound) continue;
    ++compared;
    for (const PlannerMode mode : {kAa, kCardinal}) {
      const auto r = plan(g, obs, s, goal, mode);
      ASSERT_TRUE(r.ok()) << "seed scene " << i;
      EXPECT_LE(r.trajectory->cost(), *bound + 1e-6);
      EXPECT_FALSE(first_conflict(*r.trajectory, obs[0]).has_value());
    }
  }
  EXPECT_GT(compared, 10);
}

TEST(GetSuccessors, NoObstaclesOnePerNeighbour) {
  const GridMap g(5, 5);
  const ConstraintTable table(5, 5);
  SippPlanner planner(g, table, kAa);
  SearchState from;
  from.cfg = {2, 2};
  from.interval = {0, kInfinity};
  from.g = 3.0;
  from.time = 3.0;
  int total = 0;
  for (const CellIndex n : planner.neighbors(from.cfg)) {
    const auto succ = planner.get_successors(n, from);
    ASSERT_EQ(succ.size(), 1u);
    EXPECT_NEAR(succ[0].time, 3.0 + distance(from.cfg, n), 1e-12);
    ++total;
  }
  EXPECT_EQ(total, 8);
}

TEST(GetSuccessors, ParkedObstacleOnDestination) {
  const GridMap g(5, 5);
  const std::vector<Trajectory> obs{Trajectory::stationary({3, 2})};
  const ConstraintTable table = build_table(5, 5, obs);
  SippPlanner planner(g, table, kAa);
  SearchState from;
  from.cfg = {2, 2};
  from.interval = {0, kInfinity};
  from.g = from.time = 0.0;
  EXPECT_TRUE(planner.get_successors({3, 2}, from).empty());
}

TEST(GetSuccessors, SkipsToTheLaterInterval) {
  const GridMap g(16, 16);
  const std::vector<Trajectory> obs{TrajectoryBuilder({2, 5}).move_to({12, 5}).build()};
  const ConstraintTable table = build_table(16, 16, obs);
  const auto dest = table.safe_intervals({7, 5});
  ASSERT_EQ(dest.size(), 2u);
  EXPECT_NEAR(dest[0].end, 4.0, 1e-12);
  EXPECT_NEAR(dest[1].start, 6.0, 1e-12);

  SippPlanner planner(g, table, kCardinal);
  SearchState from;
  from.cfg = {7, 4};
  from.interval = {0, kInfinity};
  from.g = from.time = 4.0;
  const auto succ = planner.get_successors({7, 5}, from);
  ASSERT_EQ(succ.size(), 1u);
  EXPECT_EQ(succ[0].interval_index, 1u);
  EXPECT_GE(succ[0].time, 6.0);
}

TEST(GetSuccessors, BlockedNeighbourHasNone) {
  GridMap g(3, 3);
  g.set_blocked({2, 1}, true);
  const ConstraintTable table(3, 3);
  SippPlanner planner(g, table, kAa);
  SearchState from;
  from.cfg = {1, 1};
  from.interval = {0, kInfinity};
  from.g = from.time = 0.0;
  EXPECT_TRUE(planner.get_successors({2, 1}, from).empty());
  EXPECT_TRUE(planner.get_successors({2, 2}, from).empty());  // corner of the blocked cell is swept
}

TEST(Expand, ShortcutReplacesTwoHopPath) {
  // (0,0)->(2,1): the grid path is 1 + sqrt(2); the shortcut is sqrt(5).
  const GridMap g(4, 4);
  const auto r = plan(g, {}, {0, 0}, {2, 1}, kAa);
  ASSERT_TRUE(r.ok());
  EXPECT_NEAR(r.trajectory->cost(), std::sqrt(5.0), 1e-12);
  EXPECT_EQ(r.trajectory->waypoints().size(), 2u);
}

TEST(Expand, ShortcutBlockedByObstacleFallsBackToGrid) {
  GridMap g(5, 3);
  g.set_blocked({2, 1}, true);
  const auto r = plan(g, {}, {0, 0}, {4, 2}, kAa);
  ASSERT_TRUE(r.ok());
  EXPECT_GT(r.trajectory->cost(), std::sqrt(20.0));
  EXPECT_TRUE(validate_solution({std::make_shared<GridMap>(g), {{{0, 0}, {4, 2}}}},
                                std::span(&*r.trajectory, 1))
                  .ok);
}

TEST(Reconstruct, Examples) {
  std::vector<SearchState> chain(2);
  chain[0].cfg = {0, 0};
  chain[0].time = 0.0;
  chain[1].cfg = {3, 4};
  chain[1].time = 5.0;
  Trajectory t = reconstruct(chain);
  EXPECT_EQ(t.waypoints()[0].wait, 0.0);
  EXPECT_EQ(t.cost(), 5.0);

  chain[1].time = 9.0;
  t = reconstruct(chain);
  EXPECT_EQ(t.waypoints()[0].wait, 4.0);
  EXPECT_EQ(t.cost(), 9.0);
  EXPECT_EQ(t.position_at(9.0), center({3, 4}));

  chain.resize(1);
  EXPECT_EQ(reconstruct(chain).cost(), 0.0);
}

TEST(Heuristic, Examples) {
  EXPECT_DOUBLE_EQ(heuristic({0, 0}, {3, 4}, kAa), 5.0);
  EXPECT_DOUBLE_EQ(heuristic({0, 0}, {3, 4}, kCardinal), 7.0);
  EXPECT_DOUBLE_EQ(heuristic({2, 2}, {2, 2}, kAa), 0.0);
}

TEST(Plan, EmptyGridCostsAreExact) {
  std::mt19937 rng(1);
  std::uniform_int_distribution<int> coord(0, 19);
  const GridMap g(20, 20);
  for (int i = 0; i < 200; ++i) {
    const CellIndex s{coord(rng), coord(rng)};
    const CellIndex t{coord(rng), coord(rng)};
    const auto aa = plan(g, {}, s, t, kAa);
    const auto card = plan(g, {}, s, t, kCardinal);
    ASSERT_TRUE(aa.ok() && card.ok());
    EXPECT_NEAR(aa.trajectory->cost(), distance(s, t), 1e-9);
    EXPECT_NEAR(card.trajectory->cost(), std::abs(s.col - t.col) + std::abs(s.row - t.row), 1e-9);
  }
}

std::vector<TraceEntry> trace_of(const GridMap& g, const ConstraintTable& table, PlannerMode mode, CellIndex s,
                                 CellIndex t) {
  SippPlanner planner(g, table, mode);
  std::vector<TraceEntry> trace;
  planner.set_trace(&trace);
  planner.plan(s, t);
  return trace;
}

TEST(Plan, ExpansionOrderIsMonotoneInF) {
  std::mt19937 rng(19);
  std::uniform_int_distribution<int> coord(0, 15);
  const GridMap g(16, 16);
  for (int i = 0; i < 100; ++i) {
    std::vector<Trajectory> obs;
    for (int k = 0; k < 4; ++k) obs.push_back(scenes::random_trajectory(rng, 16, 16));
    const ConstraintTable table = build_table(16, 16, obs);
    const CellIndex s{coord(rng), coord(rng)};
    const CellIndex t{coord(rng), coord(rng)};
    for (const PlannerMode mode : {kCardinal, PlannerMode{Connectivity::Octile8, false}}) {
      const auto trace = trace_of(g, table, mode, s, t);
      for (std::size_t k = 1; k < trace.size(); ++k) EXPECT_GE(trace[k].f, trace[k - 1].f - 1e-9);
    }
    // Parent shortcuts can undercut the f of the state being expanded, so
    // any-angle search only keeps f above the start's admissible estimate.
    const auto trace = trace_of(g, table, kAa, s, t);
    for (const auto& e : trace) {
      EXPECT_GE(e.f, heuristic(s, t, kAa) - 1e-9);
      EXPECT_GE(e.time, e.interval.start - 1e-9);
      EXPECT_LE(e.time, e.interval.end + 1e-9);
    }
  }
}

TEST(Plan, ShortcutCanLowerFBelowTheExpandedState) {
  // The goal is only reached by a shortcut from the start, after a state of
  // larger f has been expanded.
  const GridMap g(4, 2);
  const ConstraintTable table(4, 2);
  const auto trace = trace_of(g, table, kAa, {0, 0}, {3, 1});
  ASSERT_GE(trace.size(), 2u);
  EXPECT_NEAR(trace.back().f, std::sqrt(10.0), 1e-12);
  EXPECT_GT(trace[trace.size() - 2].f, trace.back().f);
}

TEST(Plan, ResultsAreConflictFreeAndDominated) {
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> coord(0, 15);
  std::bernoulli_distribution blocked(0.1);
  int solved = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<std::uint8_t> cells(16 * 16);
    for (auto& c : cells) c = blocked(rng) ? 1 : 0;
    GridMap g(16, 16, cells);
    std::vector<Trajectory> obs;
    for (int k = 0; k < 3; ++k) obs.push_back(scenes::random_trajectory(rng, 16, 16));
    const CellIndex s{coord(rng), coord(rng)};
    const CellIndex t{coord(rng), coord(rng)};
    g.set_blocked(s, false);
    g.set_blocked(t, false);
    const auto aa = plan(g, obs, s, t, kAa);
    const auto card = plan(g, obs, s, t, kCardinal);
    for (const auto* r : {&aa, &card}) {
      if (!r->ok()) continue;
      ++solved;
      EXPECT_EQ(r->trajectory->start(), s);
      EXPECT_EQ(r->trajectory->goal(), t);
      for (const auto& o : obs) EXPECT_FALSE(first_conflict(*r->trajectory, o).has_value());
      for (std::size_t k = 0; k < r->trajectory->segment_count(); ++k) {
        EXPECT_TRUE(move_is_feasible(g, r->trajectory->waypoints()[k].cell, r->trajectory->waypoints()[k + 1].cell));
      }
    }
    if (card.ok()) {
      ASSERT_TRUE(aa.ok()) << "any-angle failed where cardinal succeeded, scene " << i;
      EXPECT_LE(aa.trajectory->cost(), card.trajectory->cost() + 1e-9);
    }
  }
  EXPECT_GT(solved, 300);
}

TEST(Plan, CompleteOnSmallStaticGrids) {
  // All 4x4 grids with up to two blocked cells; acceptance covers more.
  const int n = 16;
  for (int a = -1; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      if (a == -1 && b != -1) continue;
      GridMap g(4, 4);
      if (a >= 0) g.set_blocked(g.cell(static_cast<std::size_t>(a)), true);
      if (b >= 0) g.set_blocked(g.cell(static_cast<std::size_t>(b)), true);
      for (const bool octile : {true, false}) {
        const PlannerMode mode = octile ? kAa : kCardinal;
        for (const CellIndex s : g.free_cells()) {
          const auto reach = oracle::flood_fill(g, s, octile);
          for (const CellIndex t : g.free_cells()) {
            EXPECT_EQ(plan(g, {}, s, t, mode).ok(), reach.contains(t));
          }
        }
      }
    }
  }
}

}  // namespace
}  // namespace aasipp
