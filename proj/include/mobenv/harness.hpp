#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mobenv/config.hpp"
#include "mobenv/policy.hpp"

namespace mobenv {

constexpr std::size_t kDefaultEvalEpisodes = 30;

struct EvalResult {
  std::vector<double> returns;
  double mean = 0.0;
  /// Population standard deviation of episode returns.
  double std = 0.0;
  /// Standard error of the mean, std / sqrt(n).
  double sem = 0.0;
};

/// Episodes use seeds seed_base .. seed_base + n - 1.
EvalResult evaluate(const NetworkConfig& cfg, const PolicySpec& policy,
                    std::size_t n_episodes = kDefaultEvalEpisodes, std::uint64_t seed_base = 0,
                    std::size_t workers = 1);

EvalResult summarize_returns(std::vector<double> returns);

/// 100 * (mean - random) / (expert - random). Not clipped.
double rescale(double mean, double expert_mean, double random_mean);

struct SweepRow {
  FadingModel fading;
  EvalResult result;
};

/// Paired comparison of consecutive sweep rows (row k vs row k+1).
struct OrderingCheck {
  std::string lower;
  std::string higher;
  /// mean(higher) - mean(lower)
  double gap = 0.0;
  /// Standard error of the mean of per-episode paired differences.
  double sigma = 0.0;
  /// gap >= -2 sigma
  bool ok = true;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  std::vector<OrderingCheck> checks;
  bool ordered() const;
};

/// Evaluates `policy` under each fading model with shared seeds. Models should
/// be listed from most to least random; each consecutive pair is checked for
/// a non-decreasing mean within 2 sigma.
SweepReport fading_sweep(const NetworkConfig& cfg, const PolicySpec& policy,
                         const std::vector<FadingModel>& models, std::size_t n_episodes,
                         std::uint64_t seed_base = 0, std::size_t workers = 1);

struct ReportRow {
  std::string policy_id;
  std::string fading;
  std::string mobility_variant;
  std::size_t n_episodes = 0;
  double mean = 0.0;
  double std = 0.0;
  double sem = 0.0;
  std::optional<double> score;
};

/// Header policy_id,fading,mobility_variant,n_episodes,mean,std,sem,score.
std::string format_csv(const std::vector<ReportRow>& rows);

}  // namespace mobenv
