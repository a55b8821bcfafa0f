#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mobenv/radio.hpp"
#include "mobenv/rng.hpp"

namespace mobenv {

/// Per-station association thresholds, each in [0,1].
using Thresholds = std::vector<double>;
/// c(i, j) = 1 when user j is associated with station i.
using ConnectionMatrix = Grid<std::uint8_t>;
/// a(i, j): fraction of the achievable rate d(i, j) granted to user j by station i.
using AllocationMatrix = Grid<double>;

/// How a user's per-station rates are combined.
enum class RateAggregate { Mean, Sum };

/// Rate scale and the clipped-log utility g(d) = clip(w1 log(w2 + d) / log(w3), lower, upper),
/// normalized afterwards by h(x) = (x - lower) / (upper - lower).
struct UtilityParams {
  double bandwidth = 100.0;
  double w1 = 10.0;
  double w2 = 1.0;
  double w3 = 10.0;
  double lower = -20.0;
  double upper = 20.0;
  RateAggregate aggregate = RateAggregate::Mean;

  void validate() const;
  friend bool operator==(const UtilityParams&, const UtilityParams&) = default;
};

/// Achievable Shannon rate b * log2(1 + gamma).
double data_rate(double gamma, double bandwidth);

/// c(i, j) = 1 iff gamma(i, j) >= tau[i] and gamma(i, j) > 0.
ConnectionMatrix connections(const SnrMatrix& snr, std::span<const double> tau);

/// RateFair allocation: every user connected to a station receives the same
/// delivered rate, the harmonic share 1 / sum_k c(i,k) / d(i,k).
AllocationMatrix ratefair_fractions(const SnrMatrix& snr, const ConnectionMatrix& c,
                                    double bandwidth);

/// Aggregated rate f_j of user j; `snr` is the matrix feeding the log(1 + .)
/// terms, which under fading differs from the one c and a were derived from.
double user_rate(const SnrMatrix& snr, const ConnectionMatrix& c, const AllocationMatrix& a,
                 double bandwidth, std::size_t user, RateAggregate aggregate = RateAggregate::Mean);

double raw_utility(double rate, const UtilityParams& p);
/// h(g(rate)), in [0,1].
double utility(double rate, const UtilityParams& p);

struct RewardResult {
  double reward = 0.0;
  std::vector<double> utilities;
};

/// Average normalized utility given a fixed association and allocation.
/// `rate_snr` is the (possibly faded) matrix used inside the rate logarithm.
RewardResult reward_from_allocation(const SnrMatrix& rate_snr, const ConnectionMatrix& c,
                                    const AllocationMatrix& a, const UtilityParams& p);

/// Deterministic (fading-free) reward for a state SNR matrix and thresholds.
RewardResult baseline_reward(const SnrMatrix& snr, std::span<const double> tau,
                             const UtilityParams& p);

/// Step reward. Association and allocation come from the unfaded state SNR;
/// the fading gains enter only through the rate logarithms.
RewardResult reward(const SnrMatrix& snr, std::span<const double> tau, const FadingModel& fading,
                    const UtilityParams& p, RngStream& rng);

struct JensenReport {
  double r = 0.0;
  double mean_reward = 0.0;
  double std_reward = 0.0;
  std::size_t samples = 0;
  bool fixed_allocation = true;
  /// mean_reward <= r + 3 std / sqrt(n). Only meaningful with fixed_allocation.
  bool holds = true;
  std::string fading;
};

constexpr std::size_t kMinJensenSamples = 10'000;

/// Monte-Carlo estimate of E[R] under fading against the fading-free reward r.
/// With fixed_allocation, c and a are frozen from the unfaded matrix; otherwise
/// both are recomputed from every faded draw and `holds` is informational.
JensenReport verify_jensen(const SnrMatrix& snr, std::span<const double> tau,
                           const FadingModel& fading, const UtilityParams& p,
                           std::size_t n_samples, bool fixed_allocation, RngStream& rng);

struct ConcavityReport {
  std::size_t trials = 0;
  std::size_t failures = 0;
  /// Largest amount by which the chord exceeded the function value.
  double worst_violation = 0.0;
  bool passed() const { return failures == 0; }
};

constexpr double kConcavityTolerance = 1e-9;

/// Random midpoint-style probes of h(g(f_j(.))) with c fixed and a frozen from a
/// random reference matrix. Each trial draws SNR matrices x, y with entries in
/// [0, 4] and lambda in (0, 1), and checks every user.
ConcavityReport concavity_probe(const UtilityParams& p, const ConnectionMatrix& c,
                                std::size_t n_trials, RngStream& rng);

/// The user-utility map probed above, exposed for tests.
double user_utility(const SnrMatrix& rate_snr, const ConnectionMatrix& c, const AllocationMatrix& a,
                    const UtilityParams& p, std::size_t user);

std::string format_report(const JensenReport& report);

}  // namespace mobenv
