#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "commaware/agent.hpp"
#include "commaware/comms.hpp"
#include "commaware/environment.hpp"

namespace commaware {

struct SimConfig {
  EnvConfig env;
  int agent_count = 36;
  double comm_range = 5.0;
  Timestep t_max = 9000;
  Strategy strategy = Strategy::DC;
  PlannerKind planner = PlannerKind::RB;
  KernelParams kernel;
  double speed = 1.0;
  ExploreReward explore_reward = ExploreReward::as_written;
  EndRule end_rule = EndRule::both_ends_product;
  std::uint64_t master_seed = 0;
  std::size_t store_capacity = 100;
  double random_leg = 1.0;

  void validate() const;
  AgentParams agent_params() const;
  LinkModel link() const { return {comm_range, end_rule}; }
};

struct RunResult {
  bool converged = false;
  bool correct = false;
  std::optional<Timestep> convergence_time;
  std::optional<Belief> consensus;
  std::vector<Belief> final_beliefs;
  double mean_estimate = 0.0;    // mean over agents of rho_1
  double median_estimate = 0.0;  // median over agents of rho_1
  double median_estimate_error = 0.0;  // |median_estimate - r_f|
  std::size_t locked_count = 0;
  Timestep steps_run = 0;
  std::uint64_t seed = 0;
  double wall_seconds = 0.0;
  std::string error;  // non-empty if the replicate aborted
};

/// Optional observer for per-timestep traces.
class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void on_message(Timestep, const MessageEvent&) {}
  virtual void on_agent(Timestep, const Agent&) {}
  virtual void on_step(Timestep, std::size_t /*belief_one_count*/, double /*mean_rho1*/, std::size_t /*locked*/) {}
  virtual bool wants_messages() const { return false; }
};

/// One replicate's world: grids, agents and the shared delivery stream.
class World {
 public:
  World(const SimConfig& config, std::uint64_t seed);

  /// Runs one lock-step timestep; time() advances by one.
  void step(TraceSink* trace = nullptr);

  Timestep time() const { return time_; }
  const std::vector<Agent>& agents() const { return agents_; }
  std::vector<Agent>& agents() { return agents_; }
  const FeatureGrid& features() const { return features_; }
  const CommGrid& comm() const { return comm_; }
  const SimConfig& config() const { return config_; }

 private:
  SimConfig config_;
  FeatureGrid features_;
  CommGrid comm_;
  LinkModel link_;
  Rng comms_rng_;
  std::vector<Agent> agents_;
  Timestep time_ = 0;
};

std::optional<Belief> check_consensus(std::span<const Agent> agents);

/// Runs until belief consensus or t_max. Consensus already present at t = 0
/// is reported as convergence_time 0.
RunResult run_replicate(const SimConfig& config, std::uint64_t seed, TraceSink* trace = nullptr);

struct ExperimentRow {
  std::size_t experiment_id = 0;
  std::size_t replicate = 0;
  SimConfig config;
  RunResult result;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;
};

/// Replicate seeds; shared across configs so every cell sees the same
/// sequence of environments and initial placements.
std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t replicate);

struct ExperimentOptions {
  int replicates = 20;
  std::uint64_t master_seed = 0;
  int workers = 1;
  /// Builds a trace sink per (experiment_id, replicate); may return null.
  std::function<std::unique_ptr<TraceSink>(std::size_t, std::size_t)> trace_factory;
  /// Called after each replicate finishes, from the worker thread that ran it.
  std::function<void(const ExperimentRow&, std::size_t done, std::size_t total)> progress;
};

/// Rows are ordered by (experiment_id, replicate) independent of `workers`.
/// Replicates that throw are kept as failed rows with `error` set.
ExperimentTable run_experiment(std::span<const SimConfig> configs, const ExperimentOptions& options);

/// Fixed results schema, one row per replicate.
inline constexpr const char* kResultsHeader =
    "experiment_id,strategy,planner,env_kind,r_c,r_f,seed,converged,correct,convergence_time,mean_estimate,"
    "median_estimate_error";

void write_results_csv(std::ostream& os, const ExperimentTable& table);

/// Per-timestep swarm series: t,beliefs_for_1_count,mean_rho1,locked_count.
inline constexpr const char* kSeriesHeader = "t,beliefs_for_1_count,mean_rho1,locked_count";

struct CellSummary {
  std::size_t experiment_id = 0;
  Strategy strategy{};
  PlannerKind planner{};
  EnvKind env_kind{};
  double r_c = 0.0;
  double r_f = 0.0;
  std::size_t replicates = 0;
  std::size_t correct = 0;    // converged to belief 1
  std::size_t incorrect = 0;  // converged to belief 0
  std::size_t failed = 0;     // no consensus by t_max (or aborted)
  // Convergence-time statistics over converged-and-correct rows.
  std::optional<double> median_time;
  std::optional<double> q1_time;
  std::optional<double> q3_time;
  double median_abs_estimate_error = 0.0;  // median over rows of |mean_estimate - r_f|
  std::size_t locked_total = 0;
};

std::vector<CellSummary> summarize(const ExperimentTable& table);
void write_summary(std::ostream& os, std::span<const CellSummary> cells);

/// Linear-interpolation quantile (numpy default). Empty input -> nullopt.
std::optional<double> quantile(std::vector<double> values, double q);
std::optional<double> median(std::vector<double> values);

}  // namespace commaware
