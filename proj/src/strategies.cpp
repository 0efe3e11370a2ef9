#include "commaware/strategies.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace commaware {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::DC: return "DC";
    case Strategy::DMMD: return "DMMD";
    case Strategy::MFDM: return "MFDM";
  }
  return "?";
}

Strategy parse_strategy(std::string_view text) {
  if (text == "DC") return Strategy::DC;
  if (text == "DMMD") return Strategy::DMMD;
  if (text == "MFDM") return Strategy::MFDM;
  throw std::invalid_argument("strategy must be one of DC|DMMD|MFDM, got '" + std::string(text) + "'");
}

double BeliefState::rho1() const {
  if (obs_count_total == 0) return 0.5;
  return static_cast<double>(obs_count_1) / static_cast<double>(obs_count_total);
}

void observe_feature_update(BeliefState& state, int observed_feature) {
  state.obs_count_total += 1;
  if (observed_feature == 1) state.obs_count_1 += 1;
}

void receive_payload(BeliefState& state, const Payload& payload, AgentId sender, Timestep t) {
  state.buffer.push_back({payload.belief, payload.estimate});
  if (state.strategy != Strategy::MFDM) return;

  auto it = state.last_contact.find(sender);
  const bool fresh = it == state.last_contact.end() || t - it->second >= mfdm::kContactWindow;
  if (fresh) {
    state.concentration = mfdm::kMemory * state.concentration + mfdm::kDrive * payload.belief;
  }
  state.last_contact[sender] = t;
}

void dc_update(BeliefState& state, Rng& rng) {
  if (state.buffer.empty()) return;
  const ReceivedBelief pick = state.buffer[uniform_index(rng, state.buffer.size())];
  if (pick.estimate > state.own_estimate()) state.belief = pick.belief;
  state.buffer.clear();
}

Belief majority(std::span<const ReceivedBelief> received, Belief own) {
  long ones = own == 1 ? 1 : 0;
  long zeros = own == 1 ? 0 : 1;
  for (const auto& r : received) (r.belief == 1 ? ones : zeros) += 1;
  return zeros > ones ? 0 : 1;
}

void dmmd_update(BeliefState& state) {
  state.belief = majority(state.buffer, state.belief);
  state.buffer.clear();
}

void mfdm_update(BeliefState& state) {
  if (state.locked) return;
  state.belief = majority(state.buffer, state.belief);
  state.buffer.clear();
}

void belief_update(BeliefState& state, Rng& rng) {
  switch (state.strategy) {
    case Strategy::DC: dc_update(state, rng); break;
    case Strategy::DMMD: dmmd_update(state); break;
    case Strategy::MFDM: mfdm_update(state); break;
  }
  state.buffer.clear();
}

void on_enter_dissemination(BeliefState& state) {
  if (state.strategy != Strategy::DC) state.buffer.clear();
}

double modulation(const BeliefState& state) {
  if (state.strategy == Strategy::DC) return 1.0;
  if (!state.has_estimate()) return 0.5;
  if (state.strategy == Strategy::DMMD) return state.own_estimate();
  return std::max(state.rho1(), state.rho0());
}

void concentration_lock_check(BeliefState& state) {
  if (state.strategy != Strategy::MFDM || state.locked) return;
  const bool in_band = state.concentration <= mfdm::kLowBand || state.concentration >= mfdm::kHighBand;
  state.steps_in_band = in_band ? state.steps_in_band + 1 : 0;
  if (state.steps_in_band >= mfdm::kLockSteps) state.locked = state.belief;
}

}  // namespace commaware
