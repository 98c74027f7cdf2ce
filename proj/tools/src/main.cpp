#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "aasipp/bench.hpp"

namespace {

using namespace aasipp;
using namespace aasipp::bench;

constexpr int kExitIo = 1;
constexpr int kExitConfig = 2;

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

std::pair<int, int> parse_size(const std::string& text) {
  int w = 0;
  int h = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> w >> x >> h) || x != 'x' || !in.eof()) throw ConfigError("bad grid size '" + text + "' (expected WxH)");
  return {w, h};
}

void print_summary(const Summary& summary) {
  for (const ModeSummary& m : summary.modes) {
    std::fprintf(stderr, "%-9s success %zu/%zu (%.1f%%)  mean time %.4fs", m.mode.c_str(), m.successes, m.runs,
                 100.0 * m.success_rate, m.mean_time_s);
    if (m.mean_cost_common) std::fprintf(stderr, "  mean cost %.2f", *m.mean_cost_common);
    if (m.mean_cost_all) std::fprintf(stderr, " (own successes %.2f)", *m.mean_cost_all);
    std::fputc('\n', stderr);
  }
  std::fprintf(stderr, "instances solved by every mode: %zu\n", summary.common_instances);
  if (summary.aa_cost_reduction) {
    std::fprintf(stderr, "aa cost vs cardinal: %+.2f%%\n", -100.0 * *summary.aa_cost_reduction);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-agent any-angle planning on grids: run prioritized SIPP in any-angle and cardinal mode"};

  std::string map;
  std::string empty;
  std::vector<std::string> scen;
  std::string generate;
  std::size_t agents = 0;
  std::size_t instances = 1;
  std::uint64_t seed = 0;
  std::string mode = "both";
  double timeout = kDefaultTimeout.count();
  std::string out;
  bool dump = false;
  bool validate = true;
  bool trace = false;
  unsigned threads = 1;
  bool quiet = false;

  app.add_option("--map", map, "Octile map file");
  app.add_option("--empty", empty, "Use an obstacle-free WxH grid instead of a map file");
  app.add_option("--scen", scen, "Agent or scenario file; each file is one instance");
  app.add_option("--generate", generate, "Generate instances: separated | walk:STEPS");
  app.add_option("--agents", agents, "Agents per instance (scenario files: keep the first N)");
  app.add_option("--instances", instances, "Number of generated instances")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed of the first generated instance; instance k uses seed+k");
  app.add_option("--mode", mode, "aa | cardinal | both")->check(CLI::IsMember({"aa", "cardinal", "both"}));
  app.add_option("--timeout", timeout, "Wall-clock limit per instance and mode, seconds");
  app.add_option("--out", out, "Write PREFIX.csv and PREFIX.json instead of CSV on stdout");
  app.add_flag("--dump-trajectories", dump, "Also write PREFIX_trajectories.txt");
  app.add_flag("--validate,!--no-validate", validate, "Check every solution with the validator (default on)");
  app.add_flag("--trace", trace, "Also write the search trace to PREFIX_trace.csv");
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("-q,--quiet", quiet, "No progress or summary on stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  BenchConfig config;
  try {
    if (!map.empty()) config.map = map;
    if (!empty.empty()) config.empty_size = parse_size(empty);
    for (const auto& s : scen) config.scenarios.emplace_back(s);
    if (!generate.empty()) config.generate = parse_protocol(generate);
    config.agents = agents;
    config.instances = instances;
    config.seed = seed;
    config.modes = parse_modes(mode);
    config.timeout = Seconds(timeout);
    config.validate = validate;
    config.keep_trajectories = dump;
    config.keep_traces = trace;
    config.threads = threads;
    if ((dump || trace) && out.empty()) throw ConfigError("--dump-trajectories and --trace need --out");
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    auto progress = [&](const RunRecord& r) {
      if (quiet) return;
      std::fprintf(stderr, "instance %zu %-8s %s %.4fs\n", r.instance, r.mode.c_str(),
                   r.success ? "ok  " : "FAIL", r.time_s);
    };
    const BenchResult result = run_benchmark(config, progress);
    const auto records = result.records();
    if (out.empty()) {
      write_csv(std::cout, records);
    } else {
      auto csv = open_output(out + ".csv");
      write_csv(csv, records);
      auto json = open_output(out + ".json");
      write_json(json, records, result.summary);
      if (dump) {
        auto f = open_output(out + "_trajectories.txt");
        write_trajectories(f, result.runs);
      }
      if (trace) {
        auto f = open_output(out + "_trace.csv");
        write_traces(f, result.runs);
      }
    }
    if (!quiet) print_summary(result.summary);
    for (const RunRecord& r : records) {
      if (r.valid == false) std::cerr << "warning: validator rejected instance " << r.instance << " mode " << r.mode << '\n';
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InstanceGenerationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return 0;
}
