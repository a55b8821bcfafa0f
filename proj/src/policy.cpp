#include "mobenv/policy.hpp"

#include "mobenv/errors.hpp"

namespace mobenv {

PolicySpec PolicySpec::parse(const std::string& text) {
  if (text == "expert") return expert();
  if (text == "medium") return medium();
  if (text == "random") return random();
  throw InvalidInput("unknown policy '" + text + "' (expected expert|medium|random)");
}

std::string PolicySpec::id() const {
  switch (kind) {
    case PolicyKind::Expert: return "expert";
    case PolicyKind::Medium: return "medium";
    case PolicyKind::Random: return "random";
  }
  return "unknown";
}

void PolicySpec::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InvalidInput("policy: epsilon must be in [0, 1]");
  if (lookahead_depth == 0) throw InvalidInput("policy: lookahead depth must be >= 1");
}

namespace {

// Best achievable sum of rewards over `depth` steps from a fading-free env.
double best_value(const Env& env, unsigned depth) {
  double best = -1.0;
  for (std::uint64_t a = 0; a < env.n_actions(); ++a) {
    Env clone = env;
    const StepResult sr = clone.step(a);
    double v = sr.reward;
    if (depth > 1 && !sr.done) v += best_value(clone, depth - 1);
    if (v > best) best = v;
  }
  return best;
}

}  // namespace

std::uint64_t greedy_expert_action(const Env& env, unsigned depth) {
  if (depth == 0) throw InvalidInput("lookahead depth must be >= 1");
  const NetworkConfig& cfg = env.config();
  std::uint64_t best_action = 0;
  double best = -1.0;

  if (depth == 1) {
    const SnrMatrix next = env.peek_next_snr();
    for (std::uint64_t a = 0; a < env.n_actions(); ++a) {
      const Thresholds tau = apply_deltas(env.state().thresholds, decode_action(a, cfg.n_bs),
                                          cfg.episode.threshold_step);
      const double r = baseline_reward(next, tau, cfg.utility).reward;
      if (r > best) {
        best = r;
        best_action = a;
      }
    }
    return best_action;
  }

  const Env base = env.without_fading();
  for (std::uint64_t a = 0; a < env.n_actions(); ++a) {
    Env clone = base;
    const StepResult sr = clone.step(a);
    double v = sr.reward;
    if (!sr.done) v += best_value(clone, depth - 1);
    if (v > best) {
      best = v;
      best_action = a;
    }
  }
  return best_action;
}

std::uint64_t medium_action(const Env& env, double epsilon, RngStream& rng, unsigned depth) {
  if (rng.uniform() < epsilon) return rng.uniform_index(env.n_actions());
  return greedy_expert_action(env, depth);
}

std::uint64_t random_action(const Env& env, RngStream& rng) {
  return rng.uniform_index(env.n_actions());
}

std::uint64_t choose_action(const PolicySpec& policy, Env& env) {
  switch (policy.kind) {
    case PolicyKind::Expert: return greedy_expert_action(env, policy.lookahead_depth);
    case PolicyKind::Medium:
      return medium_action(env, policy.epsilon, env.policy_rng(), policy.lookahead_depth);
    case PolicyKind::Random: return random_action(env, env.policy_rng());
  }
  throw InvalidInput("unknown policy kind");
}

}  // namespace mobenv
