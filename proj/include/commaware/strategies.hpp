#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "commaware/comms.hpp"
#include "commaware/core.hpp"

namespace commaware {

enum class Strategy { DC, DMMD, MFDM };

std::string_view to_string(Strategy s);
Strategy parse_strategy(std::string_view text);

namespace mfdm {
inline constexpr Timestep kContactWindow = 180;
inline constexpr double kMemory = 0.9;
inline constexpr double kDrive = 0.1;
inline constexpr double kLowBand = 0.1;
inline constexpr double kHighBand = 0.9;
inline constexpr int kLockSteps = 30;
}  // namespace mfdm

struct ReceivedBelief {
  Belief belief = 0;
  double estimate = 0.0;
};

struct BeliefState {
  Strategy strategy = Strategy::DC;
  Belief belief = 0;
  long obs_count_1 = 0;
  long obs_count_total = 0;
  std::vector<ReceivedBelief> buffer;  // B

  // MFDM only.
  double concentration = 0.5;
  std::unordered_map<AgentId, Timestep> last_contact;
  int steps_in_band = 0;
  std::optional<Belief> locked;

  BeliefState() = default;
  BeliefState(Strategy s, Belief initial) : strategy(s), belief(initial) {}

  bool has_estimate() const { return obs_count_total > 0; }
  /// Cumulative fraction of feature-1 observations; 0.5 before any.
  double rho1() const;
  double rho0() const { return 1.0 - rho1(); }
  double rho_for(Belief b) const { return b == 1 ? rho1() : rho0(); }
  /// The estimate for the currently held belief.
  double own_estimate() const { return rho_for(belief); }

  Payload payload() const { return {belief, own_estimate()}; }
};

void observe_feature_update(BeliefState& state, int observed_feature);

/// Handles a considerable (D-state) payload from `sender` at time `t`.
/// MFDM refreshes C only for senders unseen for kContactWindow steps;
/// last_contact is refreshed on every contact.
void receive_payload(BeliefState& state, const Payload& payload, AgentId sender, Timestep t);

void dc_update(BeliefState& state, Rng& rng);
void dmmd_update(BeliefState& state);
void mfdm_update(BeliefState& state);

/// Runs the strategy's update at the end of a dissemination period and
/// clears B.
void belief_update(BeliefState& state, Rng& rng);

/// Called on entering dissemination. DMMD and MFDM only count beliefs
/// heard during the coming D period, so their buffer is reset here.
void on_enter_dissemination(BeliefState& state);

/// Fraction g of the maximum dissemination duration.
double modulation(const BeliefState& state);

/// Per-timestep MFDM lock-in bookkeeping; no-op for other strategies.
void concentration_lock_check(BeliefState& state);

/// Majority rule over `received` plus `own`; ties resolve to 1.
Belief majority(std::span<const ReceivedBelief> received, Belief own);

}  // namespace commaware
