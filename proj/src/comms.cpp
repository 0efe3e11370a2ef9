#include "commaware/comms.hpp"

#include <algorithm>
#include <iterator>
#include <stdexcept>
#include <string>

namespace commaware {

std::string_view to_string(AgentState state) { return state == AgentState::dissemination ? "D" : "E"; }

std::string_view to_string(EndRule rule) {
  return rule == EndRule::sender_quality ? "sender_quality" : "both_ends_product";
}

EndRule parse_end_rule(std::string_view text) {
  if (text == "sender_quality") return EndRule::sender_quality;
  if (text == "both_ends_product") return EndRule::both_ends_product;
  throw std::invalid_argument("end_rule must be sender_quality|both_ends_product, got '" + std::string(text) + "'");
}

void LinkModel::validate() const {
  if (!(comm_range > 0.0)) throw std::invalid_argument("comm_range must be > 0");
}

double LinkModel::success_probability(double sender_quality, double receiver_quality) const {
  return end_rule == EndRule::both_ends_product ? sender_quality * receiver_quality : sender_quality;
}

std::vector<AgentId> neighbors_in_range(std::span<const Vec2> positions, AgentId i, double range) {
  std::vector<AgentId> out;
  const Vec2 self = positions[i];
  const double r2 = range * range;
  for (std::size_t j = 0; j < positions.size(); ++j) {
    if (j == i) continue;
    const Vec2 d = positions[j] - self;
    if (d.x * d.x + d.y * d.y <= r2) out.push_back(static_cast<AgentId>(j));
  }
  return out;
}

bool deliver(const LinkModel& link, Vec2 sender, Vec2 receiver, const CommGrid& grid, Rng& rng) {
  const double p = link.success_probability(quality_at(grid, sender), quality_at(grid, receiver));
  return bernoulli(rng, p);
}

std::optional<double> estimate_quality(std::span<const AgentId> acks, std::span<const AgentId> heartbeats) {
  std::vector<AgentId> both;
  std::set_union(acks.begin(), acks.end(), heartbeats.begin(), heartbeats.end(), std::back_inserter(both));
  if (both.empty()) return std::nullopt;
  return static_cast<double>(acks.size()) / static_cast<double>(both.size());
}

std::vector<std::vector<Heartbeat>> deliver_heartbeats(std::span<const Heartbeat> outgoing,
                                                       std::span<const Vec2> positions, const CommGrid& grid,
                                                       const LinkModel& link, Rng& rng,
                                                       std::vector<MessageEvent>* trace) {
  if (outgoing.size() != positions.size()) throw std::invalid_argument("one heartbeat per agent required");
  const std::size_t n = positions.size();
  std::vector<std::vector<Heartbeat>> received(n);
  std::vector<double> quality(n);
  for (std::size_t k = 0; k < n; ++k) quality[k] = quality_at(grid, positions[k]);

  for (std::size_t s = 0; s < n; ++s) {
    for (AgentId r : neighbors_in_range(positions, static_cast<AgentId>(s), link.comm_range)) {
      const bool ok = bernoulli(rng, link.success_probability(quality[s], quality[r]));
      if (trace) trace->push_back({static_cast<AgentId>(s), r, MessageKind::heartbeat, ok});
      if (ok) received[r].push_back(outgoing[s]);
    }
  }
  return received;
}

std::vector<std::vector<AgentId>> deliver_acks(std::span<const Ack> acks, std::span<const Vec2> positions,
                                               const CommGrid& grid, const LinkModel& link, Rng& rng,
                                               std::vector<MessageEvent>* trace) {
  std::vector<std::vector<AgentId>> received(positions.size());
  for (const Ack& a : acks) {
    const double p =
        link.success_probability(quality_at(grid, positions[a.sender]), quality_at(grid, positions[a.target]));
    const bool ok = bernoulli(rng, p);
    if (trace) trace->push_back({a.sender, a.target, MessageKind::ack, ok});
    if (ok) received[a.target].push_back(a.sender);
  }
  for (auto& list : received) std::sort(list.begin(), list.end());
  return received;
}

std::vector<Inbox> exchange(std::span<const Heartbeat> outgoing, std::span<const Vec2> positions,
                            const CommGrid& grid, const LinkModel& link, Rng& rng,
                            std::vector<MessageEvent>* trace) {
  auto heartbeats = deliver_heartbeats(outgoing, positions, grid, link, rng, trace);
  std::vector<Ack> acks;
  for (std::size_t r = 0; r < heartbeats.size(); ++r)
    for (const Heartbeat& h : heartbeats[r]) acks.push_back({static_cast<AgentId>(r), h.sender});
  auto ack_senders = deliver_acks(acks, positions, grid, link, rng, trace);

  std::vector<Inbox> inbox(positions.size());
  for (std::size_t k = 0; k < inbox.size(); ++k) {
    for (const Heartbeat& h : heartbeats[k]) inbox[k].heartbeat_senders.push_back(h.sender);
    inbox[k].heartbeats = std::move(heartbeats[k]);
    inbox[k].ack_senders = std::move(ack_senders[k]);
  }
  return inbox;
}

}  // namespace commaware
