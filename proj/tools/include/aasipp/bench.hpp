#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "aasipp/prioritized.hpp"
#include "aasipp/sipp.hpp"

namespace aasipp::bench {

/// Bad combination of options; the CLI maps it to exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BenchConfig {
  std::optional<std::filesystem::path> map;
  /// Obstacle-free grid used when no map file is given.
  std::optional<std::pair<int, int>> empty_size;
  /// Each file is one instance, agents in file order.
  std::vector<std::filesystem::path> scenarios;
  std::optional<GenerationProtocol> generate;
  /// Generated instances: agent count. Scenario files: keep the first N
  /// agents (0 keeps all).
  std::size_t agents = 0;
  std::size_t instances = 1;
  std::uint64_t seed = 0;
  std::vector<PlannerMode> modes{PlannerMode::any_angle_mode(), PlannerMode::cardinal()};
  Seconds timeout = kDefaultTimeout;
  bool validate = true;
  bool keep_trajectories = false;
  bool keep_traces = false;
  unsigned threads = 1;
};

/// GenerationProtocol from `separated` or `walk:STEPS`.
GenerationProtocol parse_protocol(const std::string& text);
/// `aa`, `cardinal` or `both`.
std::vector<PlannerMode> parse_modes(const std::string& text);

struct RunRecord {
  std::size_t instance = 0;
  std::string mode;
  std::size_t agents = 0;
  bool success = false;
  double time_s = 0.0;
  std::optional<double> cost;  // only on success
  /// Validator verdict; empty when validation was switched off.
  std::optional<bool> valid;
  std::uint64_t seed = 0;

  friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct ModeSummary {
  std::string mode;
  std::size_t runs = 0;
  std::size_t successes = 0;
  double success_rate = 0.0;
  double mean_time_s = 0.0;
  /// Mean cost over the instances every compared mode solved.
  std::optional<double> mean_cost_common;
  /// Mean cost over this mode's own successes.
  std::optional<double> mean_cost_all;
};

struct Summary {
  std::vector<ModeSummary> modes;
  std::size_t common_instances = 0;
  /// 1 - aa / cardinal over the common instances, when both modes ran.
  std::optional<double> aa_cost_reduction;
};

Summary summarize(std::span<const RunRecord> records);

struct RunArtifacts {
  RunRecord record;
  std::vector<Trajectory> trajectories;
  std::vector<std::vector<TraceEntry>> traces;
};

struct BenchResult {
  std::vector<RunArtifacts> runs;  // instance-major, modes in config order
  Summary summary;

  std::vector<RunRecord> records() const;
};

/// The instances a config describes, in order, with the seed reported for
/// each. Throws ConfigError, InstanceGenerationError or I/O errors.
std::vector<std::pair<Instance, std::uint64_t>> build_instances(const BenchConfig& config);

/// Runs every (instance, mode) pair. `progress` is called once per finished
/// run, in completion order.
BenchResult run_benchmark(const BenchConfig& config,
                          const std::function<void(const RunRecord&)>& progress = {});

inline constexpr std::string_view kCsvHeader = "instance,mode,agents,success,time_s,cost,valid,seed";

void write_csv(std::ostream& out, std::span<const RunRecord> records);
std::vector<RunRecord> parse_csv(std::istream& in);
void write_json(std::ostream& out, std::span<const RunRecord> records, const Summary& summary);
void write_trajectories(std::ostream& out, std::span<const RunArtifacts> runs);
void write_traces(std::ostream& out, std::span<const RunArtifacts> runs);

}  // namespace aasipp::bench
