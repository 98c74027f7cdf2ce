#include "aasipp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <istream>
#include <map>
#include <mutex>
#include <nlohmann/json.hpp>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include "aasipp/validator.hpp"

namespace aasipp::bench {

GenerationProtocol parse_protocol(const std::string& text) {
  if (text == "separated") return SeparatedProtocol{};
  if (text.rfind("walk:", 0) == 0) {
    const std::string digits = text.substr(5);
    std::size_t steps = 0;
    const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), steps);
    if (ec != std::errc() || end != digits.data() + digits.size() || digits.empty()) {
      throw ConfigError("bad walk length in '" + text + "'");
    }
    return RandomWalkProtocol{steps};
  }
  if (text == "walk") return RandomWalkProtocol{};
  throw ConfigError("unknown generator '" + text + "' (expected separated or walk:STEPS)");
}

std::vector<PlannerMode> parse_modes(const std::string& text) {
  if (text == "aa") return {PlannerMode::any_angle_mode()};
  if (text == "cardinal") return {PlannerMode::cardinal()};
  if (text == "both") return {PlannerMode::any_angle_mode(), PlannerMode::cardinal()};
  throw ConfigError("unknown mode '" + text + "' (expected aa, cardinal or both)");
}

std::vector<RunRecord> BenchResult::records() const {
  std::vector<RunRecord> out;
  out.reserve(runs.size());
  for (const auto& run : runs) out.push_back(run.record);
  return out;
}

Summary summarize(std::span<const RunRecord> records) {
  Summary summary;
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord*>> by_mode;
  std::map<std::size_t, std::set<std::string>> solved_by;
  std::set<std::size_t> instances;
  for (const RunRecord& r : records) {
    if (!by_mode.contains(r.mode)) order.push_back(r.mode);
    by_mode[r.mode].push_back(&r);
    instances.insert(r.instance);
    if (r.success) solved_by[r.instance].insert(r.mode);
  }
  std::set<std::size_t> common;
  for (const std::size_t k : instances) {
    if (solved_by[k].size() == order.size()) common.insert(k);
  }
  summary.common_instances = common.size();

  std::map<std::string, double> common_cost;
  for (const std::string& mode : order) {
    const auto& runs = by_mode[mode];
    ModeSummary m;
    m.mode = mode;
    m.runs = runs.size();
    double time = 0.0;
    double cost_all = 0.0;
    double cost_common = 0.0;
    for (const RunRecord* r : runs) {
      time += r->time_s;
      if (!r->success) continue;
      ++m.successes;
      cost_all += r->cost.value_or(0.0);
      if (common.contains(r->instance)) cost_common += r->cost.value_or(0.0);
    }
    m.success_rate = m.runs == 0 ? 0.0 : static_cast<double>(m.successes) / static_cast<double>(m.runs);
    m.mean_time_s = m.runs == 0 ? 0.0 : time / static_cast<double>(m.runs);
    if (m.successes > 0) m.mean_cost_all = cost_all / static_cast<double>(m.successes);
    if (!common.empty()) {
      m.mean_cost_common = cost_common / static_cast<double>(common.size());
      common_cost[mode] = *m.mean_cost_common;
    }
    summary.modes.push_back(m);
  }
  if (common_cost.contains("aa") && common_cost.contains("cardinal") && common_cost["cardinal"] > 0.0) {
    summary.aa_cost_reduction = 1.0 - common_cost["aa"] / common_cost["cardinal"];
  }
  return summary;
}

std::vector<std::pair<Instance, std::uint64_t>> build_instances(const BenchConfig& config) {
  if (config.map && config.empty_size) throw ConfigError("--map and --empty are mutually exclusive");
  if (!config.map && !config.empty_size) throw ConfigError("a map is required (--map or --empty)");
  if (!config.scenarios.empty() && config.generate) {
    throw ConfigError("--scen and --generate are mutually exclusive");
  }
  if (config.scenarios.empty() && !config.generate) throw ConfigError("either --scen or --generate is required");
  if (config.generate && config.agents == 0) throw ConfigError("--generate needs --agents > 0");
  if (config.modes.empty()) throw ConfigError("no planner mode selected");
  if (config.timeout.count() <= 0.0) throw ConfigError("--timeout must be positive");

  std::shared_ptr<const GridMap> grid;
  if (config.map) {
    grid = std::make_shared<const GridMap>(load_map(*config.map));
  } else {
    const auto [w, h] = *config.empty_size;
    if (w < 1 || h < 1) throw ConfigError("empty grid dimensions must be positive");
    grid = std::make_shared<const GridMap>(w, h);
  }

  std::vector<std::pair<Instance, std::uint64_t>> out;
  if (config.generate) {
    for (std::size_t k = 0; k < config.instances; ++k) {
      const std::uint64_t seed = config.seed + k;
      out.emplace_back(generate_instance(grid, config.agents, seed, *config.generate), seed);
    }
    return out;
  }
  for (const auto& path : config.scenarios) {
    Instance inst{grid, load_agents(path)};
    if (config.agents > 0) {
      if (inst.agents.size() < config.agents) {
        throw ConfigError(path.string() + " lists " + std::to_string(inst.agents.size()) + " agents, " +
                          std::to_string(config.agents) + " requested");
      }
      inst.agents.resize(config.agents);
    }
    try {
      validate_instance(inst);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + ": " + e.what());
    }
    out.emplace_back(std::move(inst), config.seed);
  }
  return out;
}

namespace {

RunArtifacts run_one(const Instance& instance, std::size_t id, std::uint64_t seed, PlannerMode mode,
                     const BenchConfig& config) {
  RunArtifacts run;
  std::vector<std::vector<TraceEntry>>* traces = config.keep_traces ? &run.traces : nullptr;
  Solution solution = plan_all(instance, mode, config.timeout, traces);

  RunRecord& r = run.record;
  r.instance = id;
  r.mode = std::string(mode_name(mode));
  r.agents = instance.agents.size();
  r.seed = seed;
  r.time_s = solution.wall_time.count();
  if (solution.success && config.validate) r.valid = validate_solution(instance, solution).ok;
  r.success = solution.success && r.valid.value_or(true);
  if (r.success) r.cost = solution.total_cost;
  if (config.keep_trajectories) run.trajectories = std::move(solution.trajectories);
  return run;
}

}  // namespace

BenchResult run_benchmark(const BenchConfig& config, const std::function<void(const RunRecord&)>& progress) {
  const auto instances = build_instances(config);
  const std::size_t n_modes = config.modes.size();
  const std::size_t jobs = instances.size() * n_modes;

  BenchResult result;
  result.runs.resize(jobs);
  std::atomic<std::size_t> next{0};
  std::mutex report;
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      const auto& [instance, seed] = instances[job / n_modes];
      result.runs[job] = run_one(instance, job / n_modes, seed, config.modes[job % n_modes], config);
      if (progress) {
        const std::lock_guard lock(report);
        progress(result.runs[job].record);
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(jobs)));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  const auto records = result.records();
  result.summary = summarize(records);
  return result;
}

namespace {

std::string optional_bool(const std::optional<bool>& v) {
  if (!v) return "";
  return *v ? "true" : "false";
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_field(const std::string& text, int line, const char* name) {
  T value{};
  if (text == "inf" && std::is_floating_point_v<T>) return static_cast<T>(kInfinity);
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw std::runtime_error("csv:" + std::to_string(line) + ": bad " + name + " '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& text, int line, const char* name) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw std::runtime_error("csv:" + std::to_string(line) + ": bad " + name + " '" + text + "'");
}

}  // namespace

void write_csv(std::ostream& out, std::span<const RunRecord> records) {
  out << kCsvHeader << '\n';
  for (const RunRecord& r : records) {
    out << r.instance << ',' << r.mode << ',' << r.agents << ',' << (r.success ? "true" : "false") << ','
        << format_number(r.time_s) << ',' << (r.cost ? format_number(*r.cost) : "") << ','
        << optional_bool(r.valid) << ',' << r.seed << '\n';
  }
}

std::vector<RunRecord> parse_csv(std::istream& in) {
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line) || line != kCsvHeader) throw std::runtime_error("csv:1: unexpected header");
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 8) throw std::runtime_error("csv:" + std::to_string(line_no) + ": expected 8 fields");
    RunRecord r;
    r.instance = parse_field<std::size_t>(f[0], line_no, "instance");
    r.mode = f[1];
    r.agents = parse_field<std::size_t>(f[2], line_no, "agents");
    r.success = parse_bool(f[3], line_no, "success");
    r.time_s = parse_field<double>(f[4], line_no, "time_s");
    if (!f[5].empty()) r.cost = parse_field<double>(f[5], line_no, "cost");
    if (!f[6].empty()) r.valid = parse_bool(f[6], line_no, "valid");
    r.seed = parse_field<std::uint64_t>(f[7], line_no, "seed");
    out.push_back(std::move(r));
  }
  return out;
}

void write_json(std::ostream& out, std::span<const RunRecord> records, const Summary& summary) {
  using json = nlohmann::ordered_json;
  auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
  json rows = json::array();
  for (const RunRecord& r : records) {
    rows.push_back({{"instance", r.instance},
                    {"mode", r.mode},
                    {"agents", r.agents},
                    {"success", r.success},
                    {"time_s", r.time_s},
                    {"cost", opt(r.cost)},
                    {"valid", opt(r.valid)},
                    {"seed", r.seed}});
  }
  json modes = json::array();
  for (const ModeSummary& m : summary.modes) {
    modes.push_back({{"mode", m.mode},
                     {"runs", m.runs},
                     {"successes", m.successes},
                     {"success_rate", m.success_rate},
                     {"mean_time_s", m.mean_time_s},
                     {"mean_cost_common", opt(m.mean_cost_common)},
                     {"mean_cost_all", opt(m.mean_cost_all)}});
  }
  json doc = {{"records", rows},
              {"summary",
               {{"modes", modes},
                {"common_instances", summary.common_instances},
                {"aa_cost_reduction", opt(summary.aa_cost_reduction)}}}};
  out << doc.dump(2) << '\n';
}

void write_trajectories(std::ostream& out, std::span<const RunArtifacts> runs) {
  for (const RunArtifacts& run : runs) {
    for (std::size_t a = 0; a < run.trajectories.size(); ++a) {
      const Trajectory& t = run.trajectories[a];
      out << "instance " << run.record.instance << " mode " << run.record.mode << " agent " << a
          << " waypoints " << t.waypoints().size() << '\n';
      write_waypoints(out, t);
    }
  }
}

void write_traces(std::ostream& out, std::span<const RunArtifacts> runs) {
  out << "instance,mode,agent,expansion,col,row,interval_start,interval_end,g,time,f\n";
  for (const RunArtifacts& run : runs) {
    for (std::size_t a = 0; a < run.traces.size(); ++a) {
      const auto& trace = run.traces[a];
      for (std::size_t k = 0; k < trace.size(); ++k) {
        const TraceEntry& e = trace[k];
        out << run.record.instance << ',' << run.record.mode << ',' << a << ',' << k << ',' << e.cfg.col << ','
            << e.cfg.row << ',' << format_number(e.interval.start) << ',' << format_number(e.interval.end)
            << ',' << format_number(e.g) << ',' << format_number(e.time) << ',' << format_number(e.f) << '\n';
      }
    }
  }
}

}  // namespace aasipp::bench
