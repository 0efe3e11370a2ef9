#include "commaware/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commaware/config.hpp"
#include "commaware/trace.hpp"

namespace commaware {

namespace {

std::optional<std::uint64_t> seed_from_env() {
  const char* text = std::getenv("SIM_SEED");
  if (!text || !*text) return std::nullopt;
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != std::string(text).size()) throw std::invalid_argument("trailing characters");
    return static_cast<std::uint64_t>(v);
  } catch (const std::exception&) {
    throw ConfigError(std::string("SIM_SEED: expected an unsigned integer, got '") + text + "'");
  }
}

std::vector<double> parse_numbers(const std::string& flag, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      throw ConfigError(flag + ": expected a number, got '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Multi-agent collective perception with communication-denied regions"};
  app.name("simulate");

  std::string config_path, strategy, planner, env, rc, rf, out_path, trace_dir;
  std::optional<int> replicates, workers;
  std::optional<std::uint64_t> seed;
  std::optional<long long> t_max;
  bool quiet = false;

  app.add_option("--config", config_path, "TOML-style experiment file");
  app.add_option("--strategy", strategy, "DC|DMMD|MFDM (comma-separated list allowed)");
  app.add_option("--planner", planner, "RB|CA-G|CA-Co (comma-separated list allowed)");
  app.add_option("--env", env, "uniform|continuous|distributed (comma-separated list allowed)");
  app.add_option("--rc", rc, "communication-denied ratio(s) in [0,1)");
  app.add_option("--rf", rf, "feature-1 ratio(s) in (0,1)");
  app.add_option("--replicates", replicates, "replicates per cell");
  app.add_option("--seed", seed, "master seed (falls back to SIM_SEED)");
  app.add_option("--t-max", t_max, "timestep limit per replicate");
  app.add_option("--out", out_path, "results CSV path");
  app.add_option("--workers", workers, "parallel replicate workers");
  app.add_option("--trace", trace_dir, "write per-replicate message/belief/series traces into this directory");
  app.add_flag("--quiet", quiet, "suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  ExperimentSpec spec;
  try {
    ConfigOverrides o;
    if (!strategy.empty()) o.strategies = split_list(strategy);
    if (!planner.empty()) o.planners = split_list(planner);
    if (!env.empty()) o.env_kinds = split_list(env);
    if (!rc.empty()) o.r_c = parse_numbers("--rc", rc);
    if (!rf.empty()) o.r_f = parse_numbers("--rf", rf);
    o.replicates = replicates;
    o.seed = seed;
    o.t_max = t_max;
    o.workers = workers;
    if (!out_path.empty()) o.out = out_path;
    if (!trace_dir.empty()) o.trace_dir = trace_dir;
    const auto env_seed = seed_from_env();
    spec = config_path.empty() ? build_spec({}, o, env_seed) : parse_config(config_path, o, env_seed);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    std::ofstream csv(spec.out);
    if (!csv) throw std::runtime_error("cannot open output '" + spec.out + "'");

    ExperimentOptions opts;
    opts.replicates = spec.replicates;
    opts.master_seed = spec.master_seed;
    opts.workers = spec.workers;
    if (spec.trace_dir) {
      const std::filesystem::path dir = *spec.trace_dir;
      opts.trace_factory = [dir](std::size_t e, std::size_t r) -> std::unique_ptr<TraceSink> {
        return std::make_unique<CsvTraceSink>(dir, trace_stem(e, r));
      };
    }
    if (!quiet) {
      opts.progress = [&err](const ExperimentRow& row, std::size_t done, std::size_t total) {
        err << '[' << done << '/' << total << "] cell " << row.experiment_id << " rep " << row.replicate << ": ";
        if (!row.result.error.empty())
          err << "error: " << row.result.error;
        else if (row.result.converged)
          err << "consensus " << *row.result.consensus << " at t=" << *row.result.convergence_time;
        else
          err << "no consensus";
        err << '\n';
      };
    }

    const ExperimentTable table = run_experiment(spec.configs, opts);
    write_results_csv(csv, table);
    csv.close();
    if (!csv) throw std::runtime_error("failed writing '" + spec.out + "'");

    const auto cells = summarize(table);
    write_summary(out, cells);
    std::size_t errors = 0;
    for (const auto& row : table.rows) errors += row.result.error.empty() ? 0 : 1;
    if (errors) {
      err << errors << " replicate(s) aborted; see the error lines above\n";
      return kExitRuntime;
    }
  } catch (const std::exception& e) {
    err << "runtime error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace commaware
