#include "commaware/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "commaware/arena.hpp"

namespace commaware {

void AgentParams::validate() const {
  kernel.validate();
  if (store_capacity < 1) throw std::invalid_argument("store_capacity must be >= 1");
  if (!(speed > 0.0)) throw std::invalid_argument("speed must be > 0");
  if (!(arrival_radius >= 0.0)) throw std::invalid_argument("arrival_radius must be >= 0");
  if (!(window_side > 0.0)) throw std::invalid_argument("window_side must be > 0");
  const auto per_side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(area_count))));
  if (area_count < 1 || per_side * per_side != area_count)
    throw std::invalid_argument("area_count must be a perfect square");
  if (exploration_steps < 1) throw std::invalid_argument("exploration_steps must be >= 1");
  if (max_dissemination_steps < 1) throw std::invalid_argument("max_dissemination_steps must be >= 1");
  if (!(random_leg > 0.0)) throw std::invalid_argument("random_leg must be > 0");
}

Timestep dissemination_duration(double g, Timestep max_steps) {
  return std::max<Timestep>(1, std::llround(static_cast<double>(max_steps) * g));
}

Agent::Agent(AgentId id, Vec2 position, Belief initial_belief, const AgentParams& params, int arena_size, Rng rng)
    : id_(id),
      position_(clamp_to_arena(position, arena_size)),
      params_(params),
      arena_size_(arena_size),
      rng_(std::move(rng)),
      beliefs_(params.strategy, initial_belief),
      store_(params.store_capacity) {}

Heartbeat Agent::broadcast() const { return {id_, state_, beliefs_.payload()}; }

std::vector<Ack> Agent::receive_heartbeats(std::span<const Heartbeat> delivered, Timestep t) {
  heartbeat_senders_.clear();
  std::vector<Ack> acks;
  acks.reserve(delivered.size());
  for (const Heartbeat& h : delivered) {
    heartbeat_senders_.push_back(h.sender);
    acks.push_back({id_, h.sender});
    if (h.considerable()) receive_payload(beliefs_, h.payload, h.sender, t);
  }
  std::sort(heartbeat_senders_.begin(), heartbeat_senders_.end());
  return acks;
}

void Agent::receive_acks(std::span<const AgentId> ack_senders) {
  ack_senders_.assign(ack_senders.begin(), ack_senders.end());
  std::sort(ack_senders_.begin(), ack_senders_.end());
}

void Agent::observe(const FeatureGrid& features, Timestep t) {
  last_obs_ = estimate_quality(ack_senders_, heartbeat_senders_);
  if (last_obs_) store_.try_insert(position_, *last_obs_, t, rng_);
  if (state_ == AgentState::exploration) observe_feature_update(beliefs_, feature_at(features, position_));
}

void Agent::transition() {
  concentration_lock_check(beliefs_);
  ++timer_;
  if (state_ == AgentState::exploration && timer_ >= params_.exploration_steps) {
    state_ = AgentState::dissemination;
    timer_ = 0;
    g_ = modulation(beliefs_);
    dissemination_length_ = dissemination_duration(g_, params_.max_dissemination_steps);
    on_enter_dissemination(beliefs_);
    state_changed_ = true;
  } else if (state_ == AgentState::dissemination && timer_ >= dissemination_length_) {
    belief_update(beliefs_, rng_);
    state_ = AgentState::exploration;
    timer_ = 0;
    state_changed_ = true;
  }
}

CellMap& Agent::map() {
  if (!map_ || map_version_ != store_.version()) {
    GpModel model =
        store_.empty() ? GpModel::prior(params_.kernel) : GpModel::fit(store_, params_.kernel, GpModel::kPriorMean);
    map_.emplace(std::move(model), arena_size_);
    map_version_ = store_.version();
    ++fits_;
  }
  return *map_;
}

Target Agent::plan(Timestep t) {
  ++plans_;
  if (params_.planner == PlannerKind::RB) return random_target(position_, params_.random_leg, arena_size_, rng_, t);

  const PlanWindow window(position_, params_.window_side, params_.area_count, arena_size_);
  CellMap& cells = map();
  const std::vector<double> rewards = state_ == AgentState::dissemination
                                          ? area_rewards_dissemination(window, cells)
                                          : area_rewards_exploration(window, cells, params_.explore_reward);
  const std::vector<Vec2> centroids = window.centroids();
  if (params_.planner == PlannerKind::CA_G) return select_greedy(rewards, centroids, t);
  return select_weighted(rewards, centroids, rng_, t);
}

void Agent::plan_and_move(Timestep t) {
  if (!target_ || state_changed_ || distance(position_, target_->point) <= params_.arrival_radius) {
    target_ = plan(t);
  }
  state_changed_ = false;

  const Vec2 delta = target_->point - position_;
  const double len = norm(delta);
  position_ = len <= params_.speed ? target_->point : position_ + (params_.speed / len) * delta;
  position_ = clamp_to_arena(position_, arena_size_);
}

}  // namespace commaware
