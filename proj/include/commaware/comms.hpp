#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "commaware/core.hpp"
#include "commaware/environment.hpp"

namespace commaware {

enum class AgentState : std::uint8_t { dissemination, exploration };

std::string_view to_string(AgentState state);

/// Belief data carried by every heartbeat. `estimate` is the sender's
/// estimate for its own belief (used by DC only).
struct Payload {
  Belief belief = 0;
  double estimate = 0.5;
};

struct Heartbeat {
  AgentId sender = 0;
  AgentState sender_state = AgentState::exploration;
  Payload payload;

  /// Only heartbeats from disseminating senders feed belief updates.
  bool considerable() const { return sender_state == AgentState::dissemination; }
};

struct Ack {
  AgentId sender = 0;
  AgentId target = 0;
};

enum class EndRule { sender_quality, both_ends_product };

std::string_view to_string(EndRule rule);
EndRule parse_end_rule(std::string_view text);

struct LinkModel {
  double comm_range = 5.0;
  EndRule end_rule = EndRule::both_ends_product;

  void validate() const;
  double success_probability(double sender_quality, double receiver_quality) const;
};

/// Ids j != i with |pos_i - pos_j| <= range, ascending.
std::vector<AgentId> neighbors_in_range(std::span<const Vec2> positions, AgentId i, double range);

/// One Bernoulli delivery trial for a message from `sender` to `receiver`.
bool deliver(const LinkModel& link, Vec2 sender, Vec2 receiver, const CommGrid& grid, Rng& rng);

/// |A| / |A u H| for sorted id lists; nullopt when both are empty.
std::optional<double> estimate_quality(std::span<const AgentId> acks, std::span<const AgentId> heartbeats);

enum class MessageKind { heartbeat, ack };

struct MessageEvent {
  AgentId sender = 0;
  AgentId receiver = 0;
  MessageKind kind = MessageKind::heartbeat;
  bool delivered = false;
};

/// What one agent collected during a timestep's exchange.
struct Inbox {
  std::vector<Heartbeat> heartbeats;        // delivered, ascending sender id
  std::vector<AgentId> heartbeat_senders;   // H
  std::vector<AgentId> ack_senders;         // A, acks for this agent's heartbeat
};

/// Heartbeat trials in (sender, receiver) order. Result[k] holds the
/// heartbeats agent k received, ascending by sender. `outgoing[k]` must be
/// agent k's heartbeat.
std::vector<std::vector<Heartbeat>> deliver_heartbeats(std::span<const Heartbeat> outgoing,
                                                       std::span<const Vec2> positions, const CommGrid& grid,
                                                       const LinkModel& link, Rng& rng,
                                                       std::vector<MessageEvent>* trace = nullptr);

/// Ack trials in the given order (callers pass them sorted by (sender,
/// target)). Result[k] lists the senders whose ack reached agent k.
std::vector<std::vector<AgentId>> deliver_acks(std::span<const Ack> acks, std::span<const Vec2> positions,
                                               const CommGrid& grid, const LinkModel& link, Rng& rng,
                                               std::vector<MessageEvent>* trace = nullptr);

/// Both halves of one timestep's probing exchange, every receiver acking
/// every heartbeat it got. If `trace` is non-null every trial is appended.
std::vector<Inbox> exchange(std::span<const Heartbeat> outgoing, std::span<const Vec2> positions,
                            const CommGrid& grid, const LinkModel& link, Rng& rng,
                            std::vector<MessageEvent>* trace = nullptr);

}  // namespace commaware
