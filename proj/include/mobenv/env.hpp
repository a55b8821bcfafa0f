#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mobenv/config.hpp"
#include "mobenv/mac.hpp"
#include "mobenv/mobility.hpp"
#include "mobenv/radio.hpp"
#include "mobenv/rng.hpp"

namespace mobenv {

/// Agent-visible state: thresholds, then the station-major SNR matrix, then
/// each user's utility from the previous step. All entries lie in [0,1].
struct Observation {
  std::vector<double> thresholds;
  std::vector<double> snrs;
  std::vector<double> prev_utilities;

  std::size_t size() const { return thresholds.size() + snrs.size() + prev_utilities.size(); }
  std::vector<double> flatten() const;
  friend bool operator==(const Observation&, const Observation&) = default;
};

constexpr std::size_t observation_size(std::size_t n_bs, std::size_t n_ues) {
  return n_bs + n_ues * n_bs + n_ues;
}

/// 3^n_bs: every station independently lowers, keeps, or raises its threshold.
std::uint64_t action_count(std::size_t n_bs);

/// Base-3 digit i (least significant first) of `code` is station i's choice,
/// mapped 0 -> -1, 1 -> 0, 2 -> +1.
std::vector<int> decode_action(std::uint64_t code, std::size_t n_bs);
std::uint64_t encode_action(std::span<const int> deltas);

/// tau_i <- clip(tau_i + delta_i * step, 0, 1).
Thresholds apply_deltas(const Thresholds& tau, std::span<const int> deltas, double step);

/// Full simulator state, hidden parts included. Copyable, so an Env can be cloned for lookahead.
struct EnvState {
  std::size_t t = 0;
  bool done = false;
  Thresholds thresholds;
  SnrMatrix snr;
  std::vector<double> prev_utilities;
  std::vector<UeMotionState> ues;
  RngStream fading_rng;
  RngStream policy_rng;
  friend bool operator==(const EnvState&, const EnvState&) = default;
};

struct StepResult {
  Observation observation;
  double reward = 0.0;
  bool done = false;
};

/// Threshold-controlled multi-cell association MDP.
///
/// One step: apply the per-station threshold deltas, move every user, recompute
/// the state SNR from the new positions, then score the step with the
/// configured fading model. The episode ends after `episode.horizon` steps.
class Env {
 public:
  explicit Env(NetworkConfig cfg);

  /// Seeds three independent streams (mobility, fading, policy) from `seed`.
  Observation reset(std::uint64_t seed);
  StepResult step(std::uint64_t action);

  Observation observation() const;
  const EnvState& state() const { return state_; }
  const NetworkConfig& config() const { return cfg_; }
  std::size_t n_actions() const { return n_actions_; }
  bool is_reset() const { return reset_; }
  bool done() const { return state_.done; }
  std::vector<Position> user_positions() const;

  /// Stream reserved for behavioral-policy randomness.
  RngStream& policy_rng() { return state_.policy_rng; }

  /// State SNR the next step will see. Motion does not depend on the action,
  /// so this is exact; the environment itself is left untouched.
  SnrMatrix peek_next_snr() const;

  /// Copy of this environment with fading switched off (for lookahead).
  Env without_fading() const;

 private:
  SnrMatrix compute_snr(const std::vector<UeMotionState>& ues) const;

  NetworkConfig cfg_;
  std::uint64_t n_actions_ = 0;
  bool reset_ = false;
  EnvState state_;
};

}  // namespace mobenv
