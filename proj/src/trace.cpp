#include "commaware/trace.hpp"

#include <cstdio>
#include <stdexcept>

namespace commaware {

namespace {

std::ofstream open_csv(const std::filesystem::path& path, const char* header) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open trace file '" + path.string() + "'");
  os << header << '\n';
  return os;
}

std::string fixed6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

}  // namespace

std::string trace_stem(std::size_t experiment_id, std::size_t replicate) {
  return "e" + std::to_string(experiment_id) + "_r" + std::to_string(replicate);
}

CsvTraceSink::CsvTraceSink(const std::filesystem::path& dir, const std::string& stem) {
  std::filesystem::create_directories(dir);
  messages_ = open_csv(dir / (stem + "_messages.csv"), kMessageTraceHeader);
  beliefs_ = open_csv(dir / (stem + "_beliefs.csv"), kBeliefTraceHeader);
  series_ = open_csv(dir / (stem + "_series.csv"), kSeriesHeader);
}

void CsvTraceSink::on_message(Timestep t, const MessageEvent& e) {
  messages_ << t << ',' << e.sender << ',' << e.receiver << ','
            << (e.kind == MessageKind::heartbeat ? "heartbeat" : "ack") << ',' << (e.delivered ? 1 : 0) << '\n';
}

void CsvTraceSink::on_agent(Timestep t, const Agent& a) {
  const BeliefState& b = a.beliefs();
  beliefs_ << t << ',' << a.id() << ',' << b.belief << ',' << fixed6(b.rho1()) << ',' << fixed6(b.concentration)
           << ',' << (b.locked ? *b.locked : -1) << '\n';
}

void CsvTraceSink::on_step(Timestep t, std::size_t ones, double mean_rho1, std::size_t locked) {
  series_ << t << ',' << ones << ',' << fixed6(mean_rho1) << ',' << locked << '\n';
}

SeriesSink::SeriesSink(std::ostream& os) : os_(os) { os_ << kSeriesHeader << '\n'; }

void SeriesSink::on_step(Timestep t, std::size_t ones, double mean_rho1, std::size_t locked) {
  os_ << t << ',' << ones << ',' << fixed6(mean_rho1) << ',' << locked << '\n';
}

}  // namespace commaware
