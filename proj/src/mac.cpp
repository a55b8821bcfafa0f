#include "mobenv/mac.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "mobenv/errors.hpp"

namespace mobenv {

void UtilityParams::validate() const {
  if (!(bandwidth > 0.0)) throw ConfigError("utility: bandwidth must be > 0");
  if (!(w3 > 1.0)) throw ConfigError("utility: w3 must be > 1");
  if (!(w2 > 0.0)) throw ConfigError("utility: w2 must be > 0");
  if (!(upper > lower)) throw ConfigError("utility: upper must exceed lower");
}

double data_rate(double gamma, double bandwidth) {
  if (!(gamma >= 0.0)) throw InvalidInput("data_rate: SNR must be >= 0");
  return bandwidth * std::log2(1.0 + gamma);
}

ConnectionMatrix connections(const SnrMatrix& snr, std::span<const double> tau) {
  if (tau.size() != snr.rows()) throw InvalidInput("connections: one threshold per station required");
  ConnectionMatrix c(snr.rows(), snr.cols(), 0);
  for (std::size_t i = 0; i < snr.rows(); ++i) {
    for (std::size_t j = 0; j < snr.cols(); ++j) {
      const double g = snr(i, j);
      c(i, j) = (g >= tau[i] && g > 0.0) ? 1 : 0;
    }
  }
  return c;
}

AllocationMatrix ratefair_fractions(const SnrMatrix& snr, const ConnectionMatrix& c,
                                    double bandwidth) {
  if (!snr.same_shape(c)) throw InvalidInput("ratefair_fractions: shape mismatch");
  AllocationMatrix a(snr.rows(), snr.cols(), 0.0);
  for (std::size_t i = 0; i < snr.rows(); ++i) {
    for (std::size_t j = 0; j < snr.cols(); ++j) {
      if (!c(i, j)) continue;
      const double dij = data_rate(snr(i, j), bandwidth);
      double denom = 0.0;
      for (std::size_t k = 0; k < snr.cols(); ++k) {
        if (c(i, k)) denom += dij / data_rate(snr(i, k), bandwidth);
      }
      a(i, j) = 1.0 / denom;
    }
  }
  return a;
}

double user_rate(const SnrMatrix& snr, const ConnectionMatrix& c, const AllocationMatrix& a,
                 double bandwidth, std::size_t user, RateAggregate aggregate) {
  if (!snr.same_shape(c) || !snr.same_shape(a)) throw InvalidInput("user_rate: shape mismatch");
  if (user >= snr.cols()) throw InvalidInput("user_rate: user index out of range");
  std::size_t n_links = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < snr.rows(); ++i) {
    if (!c(i, user)) continue;
    ++n_links;
    sum += a(i, user) * std::log2(1.0 + snr(i, user));
  }
  if (n_links == 0) return 0.0;
  const double scale = aggregate == RateAggregate::Mean ? bandwidth / static_cast<double>(n_links)
                                                        : bandwidth;
  return scale * sum;
}

double raw_utility(double rate, const UtilityParams& p) {
  const double g = p.w1 * std::log(p.w2 + rate) / std::log(p.w3);
  return std::clamp(g, p.lower, p.upper);
}

double utility(double rate, const UtilityParams& p) {
  if (!(rate >= 0.0)) throw InvalidInput("utility: rate must be >= 0");
  return (raw_utility(rate, p) - p.lower) / (p.upper - p.lower);
}

double user_utility(const SnrMatrix& rate_snr, const ConnectionMatrix& c, const AllocationMatrix& a,
                    const UtilityParams& p, std::size_t user) {
  return utility(user_rate(rate_snr, c, a, p.bandwidth, user, p.aggregate), p);
}

RewardResult reward_from_allocation(const SnrMatrix& rate_snr, const ConnectionMatrix& c,
                                    const AllocationMatrix& a, const UtilityParams& p) {
  RewardResult out;
  out.utilities.resize(rate_snr.cols());
  double total = 0.0;
  for (std::size_t j = 0; j < rate_snr.cols(); ++j) {
    out.utilities[j] = user_utility(rate_snr, c, a, p, j);
    total += out.utilities[j];
  }
  out.reward = rate_snr.cols() == 0 ? 0.0 : total / static_cast<double>(rate_snr.cols());
  return out;
}

RewardResult baseline_reward(const SnrMatrix& snr, std::span<const double> tau,
                             const UtilityParams& p) {
  const ConnectionMatrix c = connections(snr, tau);
  const AllocationMatrix a = ratefair_fractions(snr, c, p.bandwidth);
  return reward_from_allocation(snr, c, a, p);
}

RewardResult reward(const SnrMatrix& snr, std::span<const double> tau, const FadingModel& fading,
                    const UtilityParams& p, RngStream& rng) {
  const ConnectionMatrix c = connections(snr, tau);
  const AllocationMatrix a = ratefair_fractions(snr, c, p.bandwidth);
  if (fading.kind == FadingKind::None) return reward_from_allocation(snr, c, a, p);
  return reward_from_allocation(fade_matrix(snr, fading, rng), c, a, p);
}

JensenReport verify_jensen(const SnrMatrix& snr, std::span<const double> tau,
                           const FadingModel& fading, const UtilityParams& p,
                           std::size_t n_samples, bool fixed_allocation, RngStream& rng) {
  if (n_samples < kMinJensenSamples) {
    throw InvalidInput(fmt::format("verify_jensen: need at least {} samples", kMinJensenSamples));
  }
  fading.validate();
  JensenReport report;
  report.samples = n_samples;
  report.fixed_allocation = fixed_allocation;
  report.fading = fading.label();

  const ConnectionMatrix c = connections(snr, tau);
  const AllocationMatrix a = ratefair_fractions(snr, c, p.bandwidth);
  report.r = reward_from_allocation(snr, c, a, p).reward;

  // Welford; a constant stream leaves the mean bit-identical to that constant.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t k = 1; k <= n_samples; ++k) {
    const SnrMatrix faded = fade_matrix(snr, fading, rng);
    double value = 0.0;
    if (fixed_allocation) {
      value = reward_from_allocation(faded, c, a, p).reward;
    } else {
      value = baseline_reward(faded, tau, p).reward;
    }
    const double delta = value - mean;
    mean += delta / static_cast<double>(k);
    m2 += delta * (value - mean);
  }
  report.mean_reward = mean;
  report.std_reward = std::sqrt(m2 / static_cast<double>(n_samples - 1));
  report.holds = report.mean_reward <=
                 report.r + 3.0 * report.std_reward / std::sqrt(static_cast<double>(n_samples));
  return report;
}

ConcavityReport concavity_probe(const UtilityParams& p, const ConnectionMatrix& c,
                                std::size_t n_trials, RngStream& rng) {
  const std::size_t rows = c.rows();
  const std::size_t cols = c.cols();

  SnrMatrix reference(rows, cols, 0.0);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (c(i, j)) reference(i, j) = rng.uniform(0.05, 1.0);
    }
  }
  const AllocationMatrix a = ratefair_fractions(reference, c, p.bandwidth);

  ConcavityReport report;
  report.trials = n_trials;
  SnrMatrix x(rows, cols);
  SnrMatrix y(rows, cols);
  SnrMatrix mix(rows, cols);
  for (std::size_t t = 0; t < n_trials; ++t) {
    for (double& v : x.values()) v = rng.uniform(0.0, 4.0);
    for (double& v : y.values()) v = rng.uniform(0.0, 4.0);
    const double lambda = rng.uniform_open();
    for (std::size_t k = 0; k < mix.size(); ++k) {
      mix.values()[k] = lambda * x.values()[k] + (1.0 - lambda) * y.values()[k];
    }
    bool failed = false;
    for (std::size_t j = 0; j < cols; ++j) {
      const double at_mix = user_utility(mix, c, a, p, j);
      const double chord =
          lambda * user_utility(x, c, a, p, j) + (1.0 - lambda) * user_utility(y, c, a, p, j);
      const double violation = chord - at_mix;
      report.worst_violation = std::max(report.worst_violation, violation);
      if (violation > kConcavityTolerance) failed = true;
    }
    if (failed) ++report.failures;
  }
  return report;
}

std::string format_report(const JensenReport& report) {
  return fmt::format(
      "fading,samples,fixed_allocation,r,mean_R,std_R,holds\n{},{},{},{:.17g},{:.17g},{:.17g},{}\n",
      report.fading, report.samples, report.fixed_allocation ? "true" : "false", report.r,
      report.mean_reward, report.std_reward, report.holds ? "true" : "false");
}

}  // namespace mobenv
