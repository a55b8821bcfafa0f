// Batch front end: simulate, collect, ablate, stats, evaluate, verify, sweep-fading.
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mobenv/config.hpp"
#include "mobenv/dataset.hpp"
#include "mobenv/env.hpp"
#include "mobenv/errors.hpp"
#include "mobenv/harness.hpp"
#include "mobenv/mac.hpp"
#include "mobenv/policy.hpp"

namespace {

using namespace mobenv;

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

struct ScenarioFlags {
  std::string config_path;
  std::string fading;
  std::string mobility;
  std::size_t horizon = 0;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario JSON (built-in defaults when omitted)");
    cmd->add_option("--fading", fading, "Override fading: none|rayleigh|rician:K");
    cmd->add_option("--mobility", mobility, "Override mobility variant: full|limited");
    cmd->add_option("--horizon", horizon, "Override episode horizon");
  }

  NetworkConfig resolve() const {
    NetworkConfig cfg = config_path.empty() ? NetworkConfig::defaults() : load_config(config_path);
    if (!fading.empty()) cfg.fading = FadingModel::parse(fading);
    if (!mobility.empty()) cfg.mobility.variant = parse_mobility_variant(mobility);
    if (horizon != 0) cfg.episode.horizon = horizon;
    cfg.validate();
    return cfg;
  }
};

struct PolicyFlags {
  std::string name = "expert";
  double epsilon = 0.3;
  unsigned depth = 1;

  // `flag` may be null when the policy is implied by another option (collect --tier).
  void attach(CLI::App* cmd, const char* flag) {
    if (flag) {
      cmd->add_option(flag, name, "expert|medium|random")
          ->check(CLI::IsMember({"expert", "medium", "random"}));
    }
    cmd->add_option("--epsilon", epsilon, "Exploration rate of the medium policy")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--lookahead", depth, "Expert lookahead depth")->check(CLI::PositiveNumber);
  }

  PolicySpec resolve(const std::string& which) const {
    PolicySpec p = PolicySpec::parse(which);
    p.epsilon = epsilon;
    p.lookahead_depth = depth;
    return p;
  }
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void print_rows(const std::vector<ReportRow>& rows) { std::cout << format_csv(rows); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mobenv: threshold-association cellular MDP, datasets and checks"};
  app.require_subcommand(1);

  // simulate
  ScenarioFlags sim_scn;
  PolicyFlags sim_pol;
  std::uint64_t sim_seed = 0;
  std::size_t sim_steps = 0;
  auto* simulate = app.add_subcommand("simulate", "Run one episode and print per-step rewards");
  sim_scn.attach(simulate);
  sim_pol.attach(simulate, "--policy");
  simulate->add_option("--seed", sim_seed, "Episode seed");
  simulate->add_option("--steps", sim_steps, "Steps to run (default: horizon)");

  // collect
  ScenarioFlags col_scn;
  PolicyFlags col_pol;
  std::string col_tiers = "expert";
  std::size_t col_n = 1;
  std::uint64_t col_seed_base = 0;
  std::string col_out;
  std::size_t col_workers = 1;
  auto* collect_cmd = app.add_subcommand("collect", "Collect a trajectory dataset (JSON Lines)");
  col_scn.attach(collect_cmd);
  col_pol.attach(collect_cmd, nullptr);
  collect_cmd->add_option("--tier", col_tiers,
                          "Tier(s) to collect, comma separated: expert,medium,random");
  collect_cmd->add_option("--n", col_n, "Trajectories per tier")->check(CLI::PositiveNumber);
  collect_cmd->add_option("--seed-base", col_seed_base,
                          "First seed; tier i uses seed-base + i*n .. + n-1");
  collect_cmd->add_option("--out", col_out, "Output data file")->required();
  collect_cmd->add_option("--workers", col_workers, "Parallel episodes")->check(CLI::PositiveNumber);

  // ablate
  std::string abl_in, abl_out;
  double abl_expert = 0.0, abl_medium = 0.0;
  std::uint64_t abl_seed = 0;
  auto* ablate_cmd = app.add_subcommand("ablate", "Drop a fraction of expert/medium trajectories");
  ablate_cmd->add_option("--in", abl_in, "Input data file")->required();
  ablate_cmd->add_option("--out", abl_out, "Output data file")->required();
  ablate_cmd->add_option("--drop-expert", abl_expert, "Fraction of expert data to drop")
      ->check(CLI::Range(0.0, 1.0));
  ablate_cmd->add_option("--drop-medium", abl_medium, "Fraction of medium data to drop")
      ->check(CLI::Range(0.0, 1.0));
  ablate_cmd->add_option("--seed", abl_seed, "Sampling seed");

  // stats
  std::string st_in;
  std::size_t st_bins = kDefaultHistogramBins;
  auto* stats_cmd = app.add_subcommand("stats", "Per-tier return statistics and histogram");
  stats_cmd->add_option("--in", st_in, "Data file")->required();
  stats_cmd->add_option("--bins", st_bins, "Histogram bins")->check(CLI::PositiveNumber);

  // evaluate
  ScenarioFlags ev_scn;
  PolicyFlags ev_pol;
  std::size_t ev_episodes = kDefaultEvalEpisodes;
  std::uint64_t ev_seed_base = 0;
  std::size_t ev_workers = 1;
  std::optional<double> ev_expert, ev_random;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "Evaluate a policy over seeded episodes");
  ev_scn.attach(evaluate_cmd);
  ev_pol.attach(evaluate_cmd, "--policy");
  evaluate_cmd->add_option("--episodes", ev_episodes, "Episodes")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--seed-base", ev_seed_base, "First seed");
  evaluate_cmd->add_option("--workers", ev_workers, "Parallel episodes")->check(CLI::PositiveNumber);
  evaluate_cmd->add_option("--baseline-expert", ev_expert, "Expert mean return (score 100)");
  evaluate_cmd->add_option("--baseline-random", ev_random, "Random mean return (score 0)");

  // verify
  ScenarioFlags vf_scn;
  std::size_t vf_samples = 100'000;
  bool vf_fixed = false;
  std::uint64_t vf_seed = 0;
  std::size_t vf_trials = 10'000;
  double vf_threshold = 0.1;
  auto* verify_cmd =
      app.add_subcommand("verify", "Monte-Carlo check of E[R] <= r plus a concavity probe");
  vf_scn.attach(verify_cmd);
  verify_cmd->add_option("--samples", vf_samples, "Fading draws");
  verify_cmd->add_flag("--fixed-allocation", vf_fixed, "Freeze c and a from the unfaded SNR");
  verify_cmd->add_option("--seed", vf_seed, "Seed of the instance and of the fading draws");
  verify_cmd->add_option("--probe-trials", vf_trials, "Concavity probes");
  verify_cmd->add_option("--threshold", vf_threshold, "Common threshold applied at every station")
      ->check(CLI::Range(0.0, 1.0));

  // sweep-fading
  ScenarioFlags sw_scn;
  PolicyFlags sw_pol;
  std::size_t sw_episodes = 100;
  std::uint64_t sw_seed_base = 0;
  std::size_t sw_workers = 1;
  std::string sw_models = "rayleigh,rician:3,rician:10,none";
  auto* sweep_cmd = app.add_subcommand("sweep-fading", "Evaluate one policy under several fading models");
  sw_scn.attach(sweep_cmd);
  sw_pol.attach(sweep_cmd, "--policy");
  sweep_cmd->add_option("--episodes", sw_episodes, "Episodes per model")->check(CLI::PositiveNumber);
  sweep_cmd->add_option("--seed-base", sw_seed_base, "First seed (shared by all models)");
  sweep_cmd->add_option("--models", sw_models, "Comma separated, most random first");
  sweep_cmd->add_option("--workers", sw_workers, "Parallel episodes")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsageError;
  }

  try {
    if (simulate->parsed()) {
      const NetworkConfig cfg = sim_scn.resolve();
      const PolicySpec policy = sim_pol.resolve(sim_pol.name);
      policy.validate();
      Env env(cfg);
      env.reset(sim_seed);
      const std::size_t steps = sim_steps == 0 ? cfg.episode.horizon : sim_steps;
      if (steps > cfg.episode.horizon) throw InvalidInput("--steps exceeds the episode horizon");
      std::cout << "t,action,reward\n";
      double total = 0.0;
      for (std::size_t t = 0; t < steps; ++t) {
        const std::uint64_t a = choose_action(policy, env);
        const StepResult sr = env.step(a);
        total += sr.reward;
        std::cout << fmt::format("{},{},{:.17g}\n", t, a, sr.reward);
      }
      std::cout << fmt::format("return: {:.17g}\n", total);
    } else if (collect_cmd->parsed()) {
      const NetworkConfig cfg = col_scn.resolve();
      DatasetManifest manifest;
      const std::vector<std::string> tiers = split(col_tiers, ',');
      if (tiers.empty()) throw InvalidInput("--tier is empty");
      for (std::size_t i = 0; i < tiers.size(); ++i) {
        const PolicySpec policy = col_pol.resolve(tiers[i]);
        manifest = merge(std::move(manifest),
                         collect(cfg, policy, col_n, col_seed_base + i * col_n, col_workers));
      }
      write_dataset(manifest, col_out);
      std::cout << fmt::format("wrote {} trajectories ({} steps) to {}\n",
                               manifest.trajectories.size(), manifest.total_steps(), col_out);
    } else if (ablate_cmd->parsed()) {
      const DatasetManifest in = read_dataset(abl_in);
      const DatasetManifest out = ablate(in, abl_expert, abl_medium, abl_seed);
      write_dataset(out, abl_out);
      for (const auto& [tier, n] : out.tier_counts()) std::cout << fmt::format("{}: {}\n", tier, n);
      for (const std::string& w : out.warnings) std::cerr << "warning: " << w << "\n";
    } else if (stats_cmd->parsed()) {
      std::cout << format_stats(return_stats(read_dataset(st_in), st_bins));
    } else if (evaluate_cmd->parsed()) {
      const NetworkConfig cfg = ev_scn.resolve();
      const PolicySpec policy = ev_pol.resolve(ev_pol.name);
      const EvalResult res = evaluate(cfg, policy, ev_episodes, ev_seed_base, ev_workers);
      ReportRow row{policy.id(), cfg.fading.label(), to_string(cfg.mobility.variant),
                    ev_episodes, res.mean, res.std, res.sem, std::nullopt};
      if (ev_expert.has_value() != ev_random.has_value()) {
        throw InvalidInput("--baseline-expert and --baseline-random must be given together");
      }
      if (ev_expert) row.score = rescale(res.mean, *ev_expert, *ev_random);
      print_rows({row});
    } else if (verify_cmd->parsed()) {
      NetworkConfig cfg = vf_scn.resolve();
      Env env(cfg);
      env.reset(vf_seed);
      const SnrMatrix& snr = env.state().snr;
      const Thresholds tau(cfg.n_bs, vf_threshold);
      RngStream rng = RngStream::derive(vf_seed, 0x5EED);
      const JensenReport report =
          verify_jensen(snr, tau, cfg.fading, cfg.utility, vf_samples, vf_fixed, rng);
      const ConcavityReport probe =
          concavity_probe(cfg.utility, connections(snr, tau), vf_trials, rng);
      std::cout << format_report(report);
      std::cout << fmt::format("concavity probes: {} failures: {} worst_violation: {:.3e} {}\n",
                               probe.trials, probe.failures, probe.worst_violation,
                               probe.passed() ? "PASS" : "FAIL");
      if (vf_fixed && !report.holds) return kDomainError;
      if (!probe.passed()) return kDomainError;
    } else if (sweep_cmd->parsed()) {
      const NetworkConfig cfg = sw_scn.resolve();
      const PolicySpec policy = sw_pol.resolve(sw_pol.name);
      std::vector<FadingModel> models;
      for (const std::string& m : split(sw_models, ',')) models.push_back(FadingModel::parse(m));
      const SweepReport rep =
          fading_sweep(cfg, policy, models, sw_episodes, sw_seed_base, sw_workers);
      std::vector<ReportRow> rows;
      for (const SweepRow& r : rep.rows) {
        rows.push_back({policy.id(), r.fading.label(), to_string(cfg.mobility.variant), sw_episodes,
                        r.result.mean, r.result.std, r.result.sem, std::nullopt});
      }
      print_rows(rows);
      for (const OrderingCheck& c : rep.checks) {
        std::cout << fmt::format("order {} <= {}: gap={:.6f} sigma={:.6f} {}\n", c.lower, c.higher,
                                 c.gap, c.sigma, c.ok ? "ok" : "VIOLATED");
      }
      std::cout << fmt::format("monotone ordering: {}\n", rep.ordered() ? "holds" : "violated");
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomainError;
  }
  return 0;
}
