#include "mobenv/harness.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

#include "mobenv/dataset.hpp"
#include "mobenv/errors.hpp"

namespace mobenv {

EvalResult summarize_returns(std::vector<double> returns) {
  EvalResult out;
  out.returns = std::move(returns);
  if (out.returns.empty()) return out;
  const double n = static_cast<double>(out.returns.size());
  out.mean = std::accumulate(out.returns.begin(), out.returns.end(), 0.0) / n;
  double ss = 0.0;
  for (double r : out.returns) ss += (r - out.mean) * (r - out.mean);
  out.std = std::sqrt(ss / n);
  out.sem = out.std / std::sqrt(n);
  return out;
}

EvalResult evaluate(const NetworkConfig& cfg, const PolicySpec& policy, std::size_t n_episodes,
                    std::uint64_t seed_base, std::size_t workers) {
  if (n_episodes == 0) throw InvalidInput("evaluate: n_episodes must be >= 1");
  const DatasetManifest runs = collect(cfg, policy, n_episodes, seed_base, workers);
  std::vector<double> returns;
  returns.reserve(n_episodes);
  for (const Trajectory& t : runs.trajectories) returns.push_back(t.total_return);
  return summarize_returns(std::move(returns));
}

double rescale(double mean, double expert_mean, double random_mean) {
  if (expert_mean == random_mean) {
    throw InvalidInput("rescale: expert and random baselines coincide");
  }
  return 100.0 * (mean - random_mean) / (expert_mean - random_mean);
}

bool SweepReport::ordered() const {
  for (const OrderingCheck& c : checks) {
    if (!c.ok) return false;
  }
  return true;
}

SweepReport fading_sweep(const NetworkConfig& cfg, const PolicySpec& policy,
                         const std::vector<FadingModel>& models, std::size_t n_episodes,
                         std::uint64_t seed_base, std::size_t workers) {
  if (models.size() < 2) throw InvalidInput("fading_sweep: need at least two models");
  SweepReport report;
  for (const FadingModel& m : models) {
    NetworkConfig variant = cfg;
    variant.fading = m;
    report.rows.push_back({m, evaluate(variant, policy, n_episodes, seed_base, workers)});
  }
  for (std::size_t k = 0; k + 1 < report.rows.size(); ++k) {
    const EvalResult& lo = report.rows[k].result;
    const EvalResult& hi = report.rows[k + 1].result;
    std::vector<double> diffs(n_episodes);
    for (std::size_t e = 0; e < n_episodes; ++e) diffs[e] = hi.returns[e] - lo.returns[e];
    const EvalResult d = summarize_returns(std::move(diffs));
    OrderingCheck check;
    check.lower = report.rows[k].fading.label();
    check.higher = report.rows[k + 1].fading.label();
    check.gap = hi.mean - lo.mean;
    check.sigma = d.sem;
    check.ok = check.gap >= -2.0 * check.sigma;
    report.checks.push_back(check);
  }
  return report;
}

std::string format_csv(const std::vector<ReportRow>& rows) {
  std::string out = "policy_id,fading,mobility_variant,n_episodes,mean,std,sem,score\n";
  for (const ReportRow& r : rows) {
    out += fmt::format("{},{},{},{},{:.10g},{:.10g},{:.10g},{}\n", r.policy_id, r.fading,
                       r.mobility_variant, r.n_episodes, r.mean, r.std, r.sem,
                       r.score ? fmt::format("{:.6g}", *r.score) : std::string());
  }
  return out;
}

}  // namespace mobenv
