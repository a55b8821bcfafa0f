#include "mobenv/env.hpp"

#include <algorithm>

#include "mobenv/errors.hpp"

namespace mobenv {

namespace {
constexpr std::uint64_t kMobilityStream = 1;
constexpr std::uint64_t kFadingStream = 2;
constexpr std::uint64_t kPolicyStream = 3;
}  // namespace

std::vector<double> Observation::flatten() const {
  std::vector<double> out;
  out.reserve(size());
  out.insert(out.end(), thresholds.begin(), thresholds.end());
  out.insert(out.end(), snrs.begin(), snrs.end());
  out.insert(out.end(), prev_utilities.begin(), prev_utilities.end());
  return out;
}

std::uint64_t action_count(std::size_t n_bs) {
  std::uint64_t n = 1;
  for (std::size_t i = 0; i < n_bs; ++i) n *= 3;
  return n;
}

std::vector<int> decode_action(std::uint64_t code, std::size_t n_bs) {
  if (code >= action_count(n_bs)) throw InvalidAction("action code out of range");
  std::vector<int> deltas(n_bs);
  for (std::size_t i = 0; i < n_bs; ++i) {
    deltas[i] = static_cast<int>(code % 3) - 1;
    code /= 3;
  }
  return deltas;
}

std::uint64_t encode_action(std::span<const int> deltas) {
  std::uint64_t code = 0;
  for (std::size_t i = deltas.size(); i-- > 0;) {
    if (deltas[i] < -1 || deltas[i] > 1) throw InvalidAction("threshold delta must be -1, 0 or +1");
    code = code * 3 + static_cast<std::uint64_t>(deltas[i] + 1);
  }
  return code;
}

Thresholds apply_deltas(const Thresholds& tau, std::span<const int> deltas, double step) {
  if (deltas.size() != tau.size()) throw InvalidAction("one delta per station required");
  Thresholds out(tau.size());
  for (std::size_t i = 0; i < tau.size(); ++i) {
    out[i] = std::clamp(tau[i] + deltas[i] * step, 0.0, 1.0);
  }
  return out;
}

Env::Env(NetworkConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  n_actions_ = action_count(cfg_.n_bs);
}

SnrMatrix Env::compute_snr(const std::vector<UeMotionState>& ues) const {
  std::vector<Position> users;
  users.reserve(ues.size());
  for (const UeMotionState& ue : ues) users.push_back(ue.position);
  return snr_matrix(cfg_.bs_positions, users, cfg_.radio);
}

Observation Env::reset(std::uint64_t seed) {
  RngStream mobility_rng = RngStream::derive(seed, kMobilityStream);
  state_ = EnvState{};
  state_.fading_rng = RngStream::derive(seed, kFadingStream);
  state_.policy_rng = RngStream::derive(seed, kPolicyStream);
  state_.ues = init_positions(cfg_.mobility, cfg_.n_ues, mobility_rng);
  state_.thresholds.assign(cfg_.n_bs, cfg_.episode.initial_threshold);
  state_.snr = compute_snr(state_.ues);
  state_.prev_utilities =
      reward(state_.snr, state_.thresholds, cfg_.fading, cfg_.utility, state_.fading_rng).utilities;
  reset_ = true;
  return observation();
}

StepResult Env::step(std::uint64_t action) {
  if (!reset_) throw LifecycleError("step() before reset()");
  if (state_.done) throw LifecycleError("step() after the episode finished");
  const std::vector<int> deltas = decode_action(action, cfg_.n_bs);

  state_.thresholds = apply_deltas(state_.thresholds, deltas, cfg_.episode.threshold_step);
  for (UeMotionState& ue : state_.ues) ue = step_motion(std::move(ue), cfg_.mobility);
  state_.snr = compute_snr(state_.ues);
  RewardResult r =
      reward(state_.snr, state_.thresholds, cfg_.fading, cfg_.utility, state_.fading_rng);
  state_.prev_utilities = std::move(r.utilities);
  ++state_.t;
  state_.done = state_.t >= cfg_.episode.horizon;
  return {observation(), r.reward, state_.done};
}

Observation Env::observation() const {
  if (!reset_) throw LifecycleError("observation() before reset()");
  Observation obs;
  obs.thresholds = state_.thresholds;
  obs.snrs.assign(state_.snr.values().begin(), state_.snr.values().end());
  obs.prev_utilities = state_.prev_utilities;
  return obs;
}

std::vector<Position> Env::user_positions() const {
  std::vector<Position> out;
  for (const UeMotionState& ue : state_.ues) out.push_back(ue.position);
  return out;
}

SnrMatrix Env::peek_next_snr() const {
  std::vector<UeMotionState> ues = state_.ues;
  for (UeMotionState& ue : ues) ue = step_motion(std::move(ue), cfg_.mobility);
  return compute_snr(ues);
}

Env Env::without_fading() const {
  Env copy = *this;
  copy.cfg_.fading = FadingModel::none();
  return copy;
}

}  // namespace mobenv
