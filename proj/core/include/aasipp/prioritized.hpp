#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <span>
#include <stdexcept>
#include <utility>
#include <variant>
#include <vector>

#include "aasipp/grid_map.hpp"
#include "aasipp/sipp.hpp"
#include "aasipp/trajectory.hpp"

namespace aasipp {

struct Agent {
  CellIndex start;
  CellIndex goal;

  friend bool operator==(const Agent&, const Agent&) = default;
};

/// Agents are listed in priority order, highest first.
struct Instance {
  std::shared_ptr<const GridMap> grid;
  std::vector<Agent> agents;
};

/// Throws std::invalid_argument unless every endpoint is traversable and
/// starts and goals are each pairwise distinct.
void validate_instance(const Instance& instance);

using Seconds = std::chrono::duration<double>;

inline constexpr Seconds kDefaultTimeout{300.0};

struct Solution {
  /// Trajectories of the agents planned so far, in priority order. On
  /// success there is one per agent.
  std::vector<Trajectory> trajectories;
  /// Outcome of each attempted agent; planning stops at the first failure.
  std::vector<PlanStatus> statuses;
  bool success = false;
  int failed_agent = -1;
  PlanStatus failure = PlanStatus::Success;
  double total_cost = 0.0;
  Seconds wall_time{0.0};
};

/// Plans agents one by one in list order; each agent treats the trajectories
/// of all earlier agents as moving obstacles and ignores later ones. The
/// whole instance fails if any agent fails or the wall-clock budget runs out.
/// When `traces` is given it receives one search trace per attempted agent.
Solution plan_all(const Instance& instance, PlannerMode mode, Seconds timeout = kDefaultTimeout,
                  std::vector<std::vector<TraceEntry>>* traces = nullptr);

/// Endpoint e of an instance: start of agent e/2 when e is even, goal of
/// agent e/2 otherwise.
inline CellIndex endpoint(const Instance& instance, std::size_t e) {
  const Agent& a = instance.agents[e / 2];
  return e % 2 == 0 ? a.start : a.goal;
}

struct WfiReport {
  bool is_wfi = true;
  /// Endpoint pairs (i < j, see endpoint()) with no admissible connecting path.
  std::vector<std::pair<std::size_t, std::size_t>> failures;
};

/// Well-formed-infrastructure check. Every pair of endpoints must be joined
/// by a path of cardinal moves that keeps r-clearance from blocked cells and
/// whose segments stay at least 2r from every other endpoint. Cardinal
/// connectivity is a sufficient witness, so exotic maps may report false
/// negatives.
WfiReport check_wfi(const Instance& instance);

/// Endpoints placed uniformly on free cells, all 2n pairwise >= 4r apart.
struct SeparatedProtocol {};
/// Starts uniform on free cells; each goal is the end of a random walk of
/// `steps` cardinal moves from its start. Goals are re-walked until distinct.
struct RandomWalkProtocol {
  std::size_t steps = 100000;
};
using GenerationProtocol = std::variant<SeparatedProtocol, RandomWalkProtocol>;

class InstanceGenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic for a fixed seed. Throws InstanceGenerationError when
/// sampling cannot place every endpoint.
Instance generate_instance(std::shared_ptr<const GridMap> grid, std::size_t agents, std::uint64_t seed,
                           const GenerationProtocol& protocol);

/// Reads either the plain agent list (`agents N`, then N lines
/// `start_col start_row goal_col goal_row`) or a scenario file (`version 1`,
/// then `bucket map width height start_col start_row goal_col goal_row
/// optimal_length` per line). Agents keep file order.
std::vector<Agent> parse_agents(std::istream& in);
std::vector<Agent> load_agents(const std::filesystem::path& path);
void write_agents(std::ostream& out, std::span<const Agent> agents);

}  // namespace aasipp
