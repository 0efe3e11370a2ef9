#include "commaware/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace commaware {

void SimConfig::validate() const {
  env.validate();
  if (agent_count < 2) throw std::invalid_argument("agent_count must be >= 2");
  if (t_max < 1) throw std::invalid_argument("t_max must be >= 1");
  link().validate();
  agent_params().validate();
}

AgentParams SimConfig::agent_params() const {
  AgentParams p;
  p.strategy = strategy;
  p.planner = planner;
  p.explore_reward = explore_reward;
  p.kernel = kernel;
  p.store_capacity = store_capacity;
  p.speed = speed;
  p.random_leg = random_leg;
  return p;
}

World::World(const SimConfig& config, std::uint64_t seed)
    : config_(config), link_(config.link()), comms_rng_(derive_seed(seed, stream::comms)) {
  config_.validate();
  Rng env_rng(derive_seed(seed, stream::environment));
  features_ = generate_feature_grid(config_.env, env_rng);
  comm_ = generate_comm_grid(config_.env, env_rng);

  Rng placement(derive_seed(seed, stream::placement));
  const AgentParams params = config_.agent_params();
  const double side = config_.env.size;
  agents_.reserve(static_cast<std::size_t>(config_.agent_count));
  for (int k = 0; k < config_.agent_count; ++k) {
    const Vec2 pos{uniform01(placement) * side, uniform01(placement) * side};
    const Belief initial = bernoulli(placement, 0.5) ? 1 : 0;
    agents_.emplace_back(static_cast<AgentId>(k), pos, initial, params, config_.env.size,
                         Rng(derive_seed(seed, stream::agent_base + static_cast<std::uint64_t>(k))));
  }
}

void World::step(TraceSink* trace) {
  const Timestep t = time_ + 1;
  const std::size_t n = agents_.size();

  std::vector<Heartbeat> outgoing;
  std::vector<Vec2> positions;
  outgoing.reserve(n);
  positions.reserve(n);
  for (const Agent& a : agents_) {
    outgoing.push_back(a.broadcast());
    positions.push_back(a.position());
  }

  std::vector<MessageEvent> events;
  std::vector<MessageEvent>* event_log = trace && trace->wants_messages() ? &events : nullptr;

  const auto delivered = deliver_heartbeats(outgoing, positions, comm_, link_, comms_rng_, event_log);
  std::vector<Ack> acks;
  for (std::size_t k = 0; k < n; ++k) {
    auto mine = agents_[k].receive_heartbeats(delivered[k], t);
    acks.insert(acks.end(), mine.begin(), mine.end());
  }
  const auto ack_senders = deliver_acks(acks, positions, comm_, link_, comms_rng_, event_log);
  for (std::size_t k = 0; k < n; ++k) agents_[k].receive_acks(ack_senders[k]);

  for (Agent& a : agents_) a.observe(features_, t);
  for (Agent& a : agents_) a.transition();
  for (Agent& a : agents_) a.plan_and_move(t);
  time_ = t;

  if (trace) {
    for (const auto& e : events) trace->on_message(t, e);
    std::size_t ones = 0, locked = 0;
    double rho_sum = 0.0;
    for (const Agent& a : agents_) {
      trace->on_agent(t, a);
      ones += a.beliefs().belief == 1 ? 1 : 0;
      locked += a.beliefs().locked ? 1 : 0;
      rho_sum += a.beliefs().rho1();
    }
    trace->on_step(t, ones, rho_sum / static_cast<double>(n), locked);
  }
}

std::optional<Belief> check_consensus(std::span<const Agent> agents) {
  if (agents.empty()) return std::nullopt;
  const Belief first = agents.front().beliefs().belief;
  for (const Agent& a : agents)
    if (a.beliefs().belief != first) return std::nullopt;
  return first;
}

RunResult run_replicate(const SimConfig& config, std::uint64_t seed, TraceSink* trace) {
  const auto start = std::chrono::steady_clock::now();
  World world(config, seed);
  RunResult result;
  result.seed = seed;

  std::optional<Belief> consensus = check_consensus(world.agents());
  while (!consensus && world.time() < config.t_max) {
    world.step(trace);
    consensus = check_consensus(world.agents());
  }
  result.steps_run = world.time();
  if (consensus) {
    result.converged = true;
    result.consensus = consensus;
    result.correct = *consensus == 1;
    result.convergence_time = world.time();
  }

  std::vector<double> rhos;
  for (const Agent& a : world.agents()) {
    result.final_beliefs.push_back(a.beliefs().belief);
    rhos.push_back(a.beliefs().rho1());
    result.locked_count += a.beliefs().locked ? 1 : 0;
  }
  double sum = 0.0;
  for (double r : rhos) sum += r;
  result.mean_estimate = sum / static_cast<double>(rhos.size());
  result.median_estimate = *median(rhos);
  result.median_estimate_error = std::abs(result.median_estimate - config.env.feature_ratio);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::uint64_t replicate_seed(std::uint64_t master_seed, std::size_t replicate) {
  return derive_seed(master_seed, static_cast<std::uint64_t>(replicate));
}

ExperimentTable run_experiment(std::span<const SimConfig> configs, const ExperimentOptions& options) {
  if (options.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  for (const auto& c : configs) c.validate();

  const auto reps = static_cast<std::size_t>(options.replicates);
  const std::size_t total = configs.size() * reps;
  ExperimentTable table;
  table.rows.resize(total);

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t job = next++; job < total; job = next++) {
      ExperimentRow& row = table.rows[job];
      row.experiment_id = job / reps;
      row.replicate = job % reps;
      row.config = configs[row.experiment_id];
      const std::uint64_t seed = replicate_seed(options.master_seed, row.replicate);
      try {
        std::unique_ptr<TraceSink> sink;
        if (options.trace_factory) sink = options.trace_factory(row.experiment_id, row.replicate);
        row.result = run_replicate(row.config, seed, sink.get());
      } catch (const std::exception& e) {
        row.result = RunResult{};
        row.result.seed = seed;
        row.result.error = e.what();
      }
      const std::size_t finished = ++done;
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(row, finished, total);
      }
    }
  };

  const int workers = std::max(1, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return table;
}

namespace {

std::string fixed(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void write_results_csv(std::ostream& os, const ExperimentTable& table) {
  os << kResultsHeader << '\n';
  for (const auto& row : table.rows) {
    const auto& c = row.config;
    const auto& r = row.result;
    os << row.experiment_id << ',' << to_string(c.strategy) << ',' << to_string(c.planner) << ','
       << to_string(c.env.kind) << ',' << fixed(c.env.denial_ratio, 4) << ',' << fixed(c.env.feature_ratio, 4) << ','
       << r.seed << ',' << (r.converged ? 1 : 0) << ',' << (r.correct ? 1 : 0) << ',';
    if (r.convergence_time) os << *r.convergence_time;
    os << ',' << fixed(r.mean_estimate) << ',' << fixed(r.median_estimate_error) << '\n';
  }
}

std::optional<double> quantile(std::vector<double> values, double q) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::optional<double> median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

std::vector<CellSummary> summarize(const ExperimentTable& table) {
  std::vector<CellSummary> cells;
  std::vector<std::vector<double>> times;
  std::vector<std::vector<double>> errors;
  for (const auto& row : table.rows) {
    if (row.experiment_id >= cells.size()) {
      cells.resize(row.experiment_id + 1);
      times.resize(row.experiment_id + 1);
      errors.resize(row.experiment_id + 1);
    }
    CellSummary& s = cells[row.experiment_id];
    s.experiment_id = row.experiment_id;
    s.strategy = row.config.strategy;
    s.planner = row.config.planner;
    s.env_kind = row.config.env.kind;
    s.r_c = row.config.env.denial_ratio;
    s.r_f = row.config.env.feature_ratio;
    s.replicates += 1;
    s.locked_total += row.result.locked_count;
    const auto& r = row.result;
    if (!r.converged) {
      s.failed += 1;
    } else if (!r.correct) {
      s.incorrect += 1;
    } else {
      s.correct += 1;
      times[row.experiment_id].push_back(static_cast<double>(*r.convergence_time));
    }
    if (r.error.empty()) errors[row.experiment_id].push_back(std::abs(r.mean_estimate - row.config.env.feature_ratio));
  }
  for (std::size_t k = 0; k < cells.size(); ++k) {
    cells[k].median_time = median(times[k]);
    cells[k].q1_time = quantile(times[k], 0.25);
    cells[k].q3_time = quantile(times[k], 0.75);
    cells[k].median_abs_estimate_error = median(errors[k]).value_or(0.0);
  }
  return cells;
}

void write_summary(std::ostream& os, std::span<const CellSummary> cells) {
  auto opt = [](const std::optional<double>& v) { return v ? fixed(*v, 1) : std::string("-"); };
  os << std::left << std::setw(4) << "id" << std::setw(6) << "strat" << std::setw(7) << "plan" << std::setw(13)
     << "env" << std::setw(6) << "r_c" << std::setw(6) << "r_f" << std::setw(5) << "ok" << std::setw(5) << "bad"
     << std::setw(6) << "fail" << std::setw(10) << "median_t" << std::setw(9) << "q1_t" << std::setw(9) << "q3_t"
     << "est_err\n";
  for (const auto& c : cells) {
    os << std::left << std::setw(4) << c.experiment_id << std::setw(6) << to_string(c.strategy) << std::setw(7)
       << to_string(c.planner) << std::setw(13) << to_string(c.env_kind) << std::setw(6) << fixed(c.r_c, 2)
       << std::setw(6) << fixed(c.r_f, 2) << std::setw(5) << c.correct << std::setw(5) << c.incorrect << std::setw(6)
       << c.failed << std::setw(10) << opt(c.median_time) << std::setw(9) << opt(c.q1_time) << std::setw(9)
       << opt(c.q3_time) << fixed(c.median_abs_estimate_error, 4) << '\n';
  }
}

}  // namespace commaware
