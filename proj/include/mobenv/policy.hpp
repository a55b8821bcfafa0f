#pragma once

#include <cstdint>
#include <string>

#include "mobenv/env.hpp"
#include "mobenv/rng.hpp"

namespace mobenv {

enum class PolicyKind { Expert, Medium, Random };

/// Behavioral policy description; `id()` is the tier name stored in datasets.
struct PolicySpec {
  PolicyKind kind = PolicyKind::Expert;
  double epsilon = 0.3;
  unsigned lookahead_depth = 1;

  static PolicySpec expert() { return {PolicyKind::Expert}; }
  static PolicySpec medium(double epsilon = 0.3) { return {PolicyKind::Medium, epsilon}; }
  static PolicySpec random() { return {PolicyKind::Random}; }
  /// "expert", "medium" or "random".
  static PolicySpec parse(const std::string& text);

  std::string id() const;
  bool deterministic() const { return kind == PolicyKind::Expert; }
  void validate() const;
};

/// Greedy lookahead on a fading-free view of `env`: every action is scored by
/// its simulated reward (summed over `depth` steps, best continuation) and the
/// argmax is returned, ties going to the lowest code.
std::uint64_t greedy_expert_action(const Env& env, unsigned depth = 1);

/// Expert action with probability 1 - epsilon, otherwise uniform over all codes.
/// Always consumes one uniform draw for the coin, so streams stay aligned.
std::uint64_t medium_action(const Env& env, double epsilon, RngStream& rng, unsigned depth = 1);

std::uint64_t random_action(const Env& env, RngStream& rng);

/// Dispatches on the policy kind, drawing randomness from env.policy_rng().
std::uint64_t choose_action(const PolicySpec& policy, Env& env);

}  // namespace mobenv
