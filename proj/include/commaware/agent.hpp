#pragma once

#include <optional>
#include <span>
#include <vector>

#include "commaware/comms.hpp"
#include "commaware/core.hpp"
#include "commaware/environment.hpp"
#include "commaware/gpmap.hpp"
#include "commaware/planning.hpp"
#include "commaware/strategies.hpp"

namespace commaware {

struct AgentParams {
  Strategy strategy = Strategy::DC;
  PlannerKind planner = PlannerKind::RB;
  ExploreReward explore_reward = ExploreReward::as_written;
  KernelParams kernel;
  std::size_t store_capacity = 100;
  double speed = 1.0;
  double arrival_radius = 0.5;
  double window_side = 10.0;
  int area_count = 9;
  Timestep exploration_steps = 60;
  Timestep max_dissemination_steps = 120;
  double random_leg = 1.0;

  void validate() const;
};

/// Dissemination length for modulation g: max(1, round(max_steps * g)).
Timestep dissemination_duration(double g, Timestep max_steps);

/// One swarm member. The engine drives the per-timestep phases in order:
/// broadcast, receive_heartbeats, receive_acks, observe, transition,
/// plan_and_move.
class Agent {
 public:
  Agent(AgentId id, Vec2 position, Belief initial_belief, const AgentParams& params, int arena_size, Rng rng);

  Heartbeat broadcast() const;

  /// Records the senders, forwards considerable payloads to the strategy and
  /// returns one ack per heartbeat, in sender order.
  std::vector<Ack> receive_heartbeats(std::span<const Heartbeat> delivered, Timestep t);
  void receive_acks(std::span<const AgentId> ack_senders);

  /// Estimates local link quality from this step's contacts and offers it
  /// to the observation store; samples the feature when exploring.
  void observe(const FeatureGrid& features, Timestep t);

  /// Advances the state timer, switching D <-> E when the period elapses.
  void transition();

  /// Re-plans on arrival, on a state change or without a target, then moves
  /// one step toward the target.
  void plan_and_move(Timestep t);

  AgentId id() const { return id_; }
  Vec2 position() const { return position_; }
  AgentState state() const { return state_; }
  Timestep state_timer() const { return timer_; }
  Timestep dissemination_length() const { return dissemination_length_; }
  double g() const { return g_; }
  const BeliefState& beliefs() const { return beliefs_; }
  const ObservationStore& store() const { return store_; }
  const std::optional<Target>& target() const { return target_; }
  std::optional<double> last_quality_observation() const { return last_obs_; }
  std::size_t plan_count() const { return plans_; }
  std::size_t fit_count() const { return fits_; }
  const AgentParams& params() const { return params_; }

  /// Current map, refitted if the store changed since the last fit.
  CellMap& map();

  // Test hooks.
  void set_position(Vec2 p) { position_ = p; }
  BeliefState& mutable_beliefs() { return beliefs_; }

 private:
  Target plan(Timestep t);

  AgentId id_;
  Vec2 position_;
  AgentParams params_;
  int arena_size_;
  Rng rng_;

  AgentState state_ = AgentState::exploration;
  Timestep timer_ = 0;
  double g_ = 0.5;
  Timestep dissemination_length_ = 0;
  bool state_changed_ = false;

  BeliefState beliefs_;
  ObservationStore store_;
  std::optional<CellMap> map_;
  std::uint64_t map_version_ = 0;
  std::optional<Target> target_;

  std::vector<AgentId> heartbeat_senders_;
  std::vector<AgentId> ack_senders_;
  std::optional<double> last_obs_;
  std::size_t plans_ = 0;
  std::size_t fits_ = 0;
};

}  // namespace commaware
