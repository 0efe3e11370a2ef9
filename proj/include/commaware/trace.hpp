#pragma once

#include <filesystem>
#include <fstream>
#include <memory>

#include "commaware/engine.hpp"

namespace commaware {

inline constexpr const char* kMessageTraceHeader = "t,sender,receiver,kind,delivered";
inline constexpr const char* kBeliefTraceHeader = "t,agent,b,rho1,C,locked";

/// Writes messages, per-agent beliefs and the swarm series as three CSV files
/// under `dir`, named `<stem>_messages.csv`, `<stem>_beliefs.csv` and
/// `<stem>_series.csv`. `locked` is -1 while unlocked.
class CsvTraceSink : public TraceSink {
 public:
  CsvTraceSink(const std::filesystem::path& dir, const std::string& stem);

  void on_message(Timestep t, const MessageEvent& e) override;
  void on_agent(Timestep t, const Agent& a) override;
  void on_step(Timestep t, std::size_t ones, double mean_rho1, std::size_t locked) override;
  bool wants_messages() const override { return true; }

 private:
  std::ofstream messages_;
  std::ofstream beliefs_;
  std::ofstream series_;
};

/// Series-only sink writing to an arbitrary stream.
class SeriesSink : public TraceSink {
 public:
  explicit SeriesSink(std::ostream& os);
  void on_step(Timestep t, std::size_t ones, double mean_rho1, std::size_t locked) override;

 private:
  std::ostream& os_;
};

/// Stem for one replicate's trace files: e<experiment>_r<replicate>.
std::string trace_stem(std::size_t experiment_id, std::size_t replicate);

}  // namespace commaware
