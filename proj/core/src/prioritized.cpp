#include "aasipp/prioritized.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "aasipp/constraints.hpp"

namespace aasipp {

void validate_instance(const Instance& instance) {
  if (!instance.grid) throw std::invalid_argument("instance has no grid");
  std::set<CellIndex> starts;
  std::set<CellIndex> goals;
  for (std::size_t i = 0; i < instance.agents.size(); ++i) {
    const Agent& a = instance.agents[i];
    const std::string who = "agent " + std::to_string(i);
    if (!instance.grid->is_traversable(a.start)) throw std::invalid_argument(who + " start is not traversable");
    if (!instance.grid->is_traversable(a.goal)) throw std::invalid_argument(who + " goal is not traversable");
    if (!starts.insert(a.start).second) throw std::invalid_argument(who + " shares its start");
    if (!goals.insert(a.goal).second) throw std::invalid_argument(who + " shares its goal");
  }
}

Solution plan_all(const Instance& instance, PlannerMode mode, Seconds timeout,
                  std::vector<std::vector<TraceEntry>>* traces) {
  validate_instance(instance);
  const GridMap& grid = *instance.grid;
  const auto started = Clock::now();
  const auto deadline = started + std::chrono::duration_cast<Clock::duration>(timeout);

  Solution solution;
  ConstraintTable table(grid.width(), grid.height());
  auto fail = [&](std::size_t agent, PlanStatus status) {
    solution.success = false;
    solution.failed_agent = static_cast<int>(agent);
    solution.failure = status;
  };

  solution.success = true;
  for (std::size_t i = 0; i < instance.agents.size(); ++i) {
    if (Clock::now() > deadline) {
      fail(i, PlanStatus::Timeout);
      break;
    }
    SippPlanner planner(grid, table, mode);
    if (traces != nullptr) planner.set_trace(&traces->emplace_back());
    PlanResult result = planner.plan(instance.agents[i].start, instance.agents[i].goal, deadline);
    solution.statuses.push_back(result.status);
    if (!result.ok()) {
      fail(i, result.status);
      break;
    }
    table.add(*result.trajectory);
    solution.trajectories.push_back(std::move(*result.trajectory));
  }
  if (solution.success && Clock::now() > deadline) {
    fail(instance.agents.empty() ? 0 : instance.agents.size() - 1, PlanStatus::Timeout);
  }
  solution.total_cost = solution_cost(solution.trajectories);
  solution.wall_time = Clock::now() - started;
  return solution;
}

namespace {

struct DisjointSets {
  std::vector<std::size_t> parent;

  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

}  // namespace

WfiReport check_wfi(const Instance& instance) {
  validate_instance(instance);
  const GridMap& grid = *instance.grid;
  WfiReport report;

  // Distinct endpoint locations; coinciding endpoints share one location.
  std::map<CellIndex, std::size_t> location_id;
  std::vector<CellIndex> locations;
  const std::size_t n_endpoints = 2 * instance.agents.size();
  std::vector<std::size_t> endpoint_location(n_endpoints);
  for (std::size_t e = 0; e < n_endpoints; ++e) {
    const CellIndex c = endpoint(instance, e);
    auto [it, inserted] = location_id.emplace(c, locations.size());
    if (inserted) locations.push_back(c);
    endpoint_location[e] = it->second;
  }
  if (locations.size() < 2) return report;

  // Cardinal edges: id 2*cell for the +col edge, 2*cell+1 for the +row edge.
  const std::size_t cells = grid.cell_count();
  auto edge_target = [&](std::size_t edge) {
    const CellIndex c = grid.cell(edge / 2);
    return edge % 2 == 0 ? CellIndex{c.col + 1, c.row} : CellIndex{c.col, c.row + 1};
  };
  std::vector<std::uint8_t> edge_ok(2 * cells, 0);
  std::vector<CellIndex> scratch;
  for (std::size_t edge = 0; edge < 2 * cells; ++edge) {
    edge_ok[edge] = move_is_feasible(grid, grid.cell(edge / 2), edge_target(edge), scratch) ? 1 : 0;
  }

  // Locations closer than 2r to each edge segment.
  std::map<std::size_t, std::vector<std::size_t>> near;
  for (std::size_t loc = 0; loc < locations.size(); ++loc) {
    const CellIndex l = locations[loc];
    for (int dr = -2; dr <= 2; ++dr) {
      for (int dc = -2; dc <= 2; ++dc) {
        const CellIndex c{l.col + dc, l.row + dr};
        if (!grid.in_bounds(c)) continue;
        for (std::size_t dir = 0; dir < 2; ++dir) {
          const std::size_t edge = 2 * grid.index(c) + dir;
          if (!edge_ok[edge]) continue;
          if (dist_point_segment(center(l), segment_between(c, edge_target(edge))) < kAgentDiameter - kEps) {
            near[edge].push_back(loc);
          }
        }
      }
    }
  }

  DisjointSets sets(cells);
  for (std::size_t edge = 0; edge < 2 * cells; ++edge) {
    if (edge_ok[edge] && !near.contains(edge)) sets.unite(edge / 2, grid.index(edge_target(edge)));
  }

  struct GatedEdge {
    std::size_t a;
    std::size_t b;
    const std::vector<std::size_t>* near;
  };
  std::vector<GatedEdge> gated;
  std::map<std::size_t, std::vector<std::size_t>> gated_at;  // component -> gated edge ids
  for (const auto& [edge, locs] : near) {
    const std::size_t a = sets.find(edge / 2);
    const std::size_t b = sets.find(grid.index(edge_target(edge)));
    gated_at[a].push_back(gated.size());
    gated_at[b].push_back(gated.size());
    gated.push_back({a, b, &locs});
  }

  const std::size_t n_loc = locations.size();
  std::vector<std::uint8_t> connected(n_loc * n_loc, 0);
  std::set<std::size_t> seen;
  std::vector<std::size_t> frontier;
  for (std::size_t A = 0; A < n_loc; ++A) {
    for (std::size_t B = A + 1; B < n_loc; ++B) {
      const std::size_t from = sets.find(grid.index(locations[A]));
      const std::size_t to = sets.find(grid.index(locations[B]));
      bool found = from == to;
      seen = {from};
      frontier = {from};
      while (!found && !frontier.empty()) {
        const std::size_t comp = frontier.back();
        frontier.pop_back();
        const auto it = gated_at.find(comp);
        if (it == gated_at.end()) continue;
        for (const std::size_t g : it->second) {
          const GatedEdge& edge = gated[g];
          const bool allowed = std::all_of(edge.near->begin(), edge.near->end(),
                                           [&](std::size_t loc) { return loc == A || loc == B; });
          if (!allowed) continue;
          const std::size_t next = edge.a == comp ? edge.b : edge.a;
          if (!seen.insert(next).second) continue;
          if (next == to) {
            found = true;
            break;
          }
          frontier.push_back(next);
        }
      }
      connected[A * n_loc + B] = connected[B * n_loc + A] = found ? 1 : 0;
    }
  }

  for (std::size_t i = 0; i < n_endpoints; ++i) {
    for (std::size_t j = i + 1; j < n_endpoints; ++j) {
      const std::size_t A = endpoint_location[i];
      const std::size_t B = endpoint_location[j];
      if (A != B && !connected[A * n_loc + B]) report.failures.emplace_back(i, j);
    }
  }
  report.is_wfi = report.failures.empty();
  return report;
}

namespace {

constexpr std::size_t kMaxDrawsPerEndpoint = 100000;
constexpr std::size_t kMaxGoalWalks = 1000;

CellIndex random_walk(const GridMap& grid, CellIndex from, std::size_t steps, std::mt19937_64& rng) {
  static constexpr int kMoves[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  CellIndex cur = from;
  std::array<CellIndex, 4> options{};
  for (std::size_t s = 0; s < steps; ++s) {
    std::size_t count = 0;
    for (const auto& m : kMoves) {
      const CellIndex next{cur.col + m[0], cur.row + m[1]};
      if (grid.is_traversable(next)) options[count++] = next;
    }
    if (count == 0) break;
    cur = options[std::uniform_int_distribution<std::size_t>(0, count - 1)(rng)];
  }
  return cur;
}

}  // namespace

Instance generate_instance(std::shared_ptr<const GridMap> grid, std::size_t agents, std::uint64_t seed,
                           const GenerationProtocol& protocol) {
  if (!grid) throw std::invalid_argument("no grid");
  const std::vector<CellIndex> free = grid->free_cells();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, free.empty() ? 0 : free.size() - 1);

  Instance instance{grid, std::vector<Agent>(agents)};
  if (std::holds_alternative<SeparatedProtocol>(protocol)) {
    if (2 * agents > free.size()) {
      throw InstanceGenerationError("not enough free cells for " + std::to_string(agents) + " agents");
    }
    std::vector<CellIndex> placed;
    placed.reserve(2 * agents);
    for (std::size_t e = 0; e < 2 * agents; ++e) {
      bool ok = false;
      for (std::size_t draw = 0; draw < kMaxDrawsPerEndpoint && !ok; ++draw) {
        const CellIndex c = free[pick(rng)];
        ok = std::all_of(placed.begin(), placed.end(),
                         [&](CellIndex p) { return distance(p, c) >= 2.0 * kAgentDiameter - kEps; });
        if (ok) placed.push_back(c);
      }
      if (!ok) {
        throw InstanceGenerationError("could not separate endpoint " + std::to_string(e) + " of " +
                                      std::to_string(2 * agents));
      }
    }
    for (std::size_t i = 0; i < agents; ++i) instance.agents[i] = {placed[2 * i], placed[2 * i + 1]};
    return instance;
  }

  const std::size_t steps = std::get<RandomWalkProtocol>(protocol).steps;
  if (agents > free.size()) {
    throw InstanceGenerationError("not enough free cells for " + std::to_string(agents) + " agents");
  }
  std::set<CellIndex> starts;
  std::set<CellIndex> goals;
  for (std::size_t i = 0; i < agents; ++i) {
    CellIndex start{};
    bool ok = false;
    for (std::size_t draw = 0; draw < kMaxDrawsPerEndpoint && !ok; ++draw) {
      start = free[pick(rng)];
      ok = starts.insert(start).second;
    }
    if (!ok) throw InstanceGenerationError("could not place start " + std::to_string(i));
    ok = false;
    CellIndex goal{};
    for (std::size_t walk = 0; walk < kMaxGoalWalks && !ok; ++walk) {
      goal = random_walk(*grid, start, steps, rng);
      ok = goals.insert(goal).second;
    }
    if (!ok) throw InstanceGenerationError("could not find a distinct goal for agent " + std::to_string(i));
    instance.agents[i] = {start, goal};
  }
  return instance;
}

std::vector<Agent> parse_agents(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("agents:" + std::to_string(line_no) + ": " + what);
  };
  auto next = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };

  if (!next()) fail("empty agent file");
  std::istringstream header(line);
  std::string key;
  header >> key;
  std::vector<Agent> agents;
  if (key == "agents") {
    long count = -1;
    if (!(header >> count) || count < 0) fail("expected 'agents N'");
    for (long i = 0; i < count; ++i) {
      if (!next()) fail("expected " + std::to_string(count) + " agents, found " + std::to_string(i));
      std::istringstream fields(line);
      Agent a;
      if (!(fields >> a.start.col >> a.start.row >> a.goal.col >> a.goal.row)) fail("malformed agent line");
      agents.push_back(a);
    }
    return agents;
  }
  if (key == "version") {
    while (next()) {
      std::istringstream fields(line);
      std::string bucket;
      std::string map_name;
      int width = 0;
      int height = 0;
      double optimal = 0.0;
      Agent a;
      if (!(fields >> bucket >> map_name >> width >> height >> a.start.col >> a.start.row >> a.goal.col >>
            a.goal.row >> optimal)) {
        fail("malformed scenario line");
      }
      agents.push_back(a);
    }
    return agents;
  }
  fail("unknown agent file header '" + key + "'");
  return agents;
}

std::vector<Agent> load_agents(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open agent file " + path.string());
  return parse_agents(in);
}

void write_agents(std::ostream& out, std::span<const Agent> agents) {
  out << "agents " << agents.size() << '\n';
  for (const Agent& a : agents) {
    out << a.start.col << ' ' << a.start.row << ' ' << a.goal.col << ' ' << a.goal.row << '\n';
  }
}

}  // namespace aasipp
