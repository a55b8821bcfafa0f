#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mobenv/config.hpp"
#include "mobenv/policy.hpp"

namespace mobenv {

struct StepRecord {
  std::size_t t = 0;
  std::vector<double> obs;
  std::uint64_t action = 0;
  double reward = 0.0;
  double rtg = 0.0;
  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// One episode. steps[t].obs is the observation the action was chosen from;
/// rtg[t] = reward[t] + rtg[t + 1] and total_return == steps[0].rtg.
struct Trajectory {
  std::uint64_t seed = 0;
  std::string policy_id;
  std::string config_hash;
  double total_return = 0.0;
  std::vector<StepRecord> steps;
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

/// Recomputes returns-to-go backwards from the stored rewards.
void fill_returns_to_go(Trajectory& traj);

Trajectory run_episode(const NetworkConfig& cfg, const PolicySpec& policy, std::uint64_t seed,
                       const std::string& config_hash);

struct CollectionRecord {
  std::string tier;
  std::size_t n = 0;
  std::uint64_t seed_base = 0;
  double epsilon = 0.0;
  unsigned lookahead_depth = 1;
  friend bool operator==(const CollectionRecord&, const CollectionRecord&) = default;
};

struct AblationRecord {
  double drop_expert = 0.0;
  double drop_medium = 0.0;
  std::uint64_t seed = 0;
  friend bool operator==(const AblationRecord&, const AblationRecord&) = default;
};

/// Trajectories grouped by policy tier (expert/medium/random), plus provenance.
struct DatasetManifest {
  std::string config_hash;
  nlohmann::json config;
  std::vector<Trajectory> trajectories;
  std::vector<CollectionRecord> collections;
  std::vector<AblationRecord> ablations;
  std::vector<std::string> warnings;

  std::size_t total_steps() const;
  std::map<std::string, std::size_t> tier_counts() const;
  std::size_t count(std::string_view tier) const;
  friend bool operator==(const DatasetManifest&, const DatasetManifest&) = default;
};

/// Trajectory k uses seed seed_base + k. Output is independent of `workers`.
DatasetManifest collect(const NetworkConfig& cfg, const PolicySpec& policy, std::size_t n_traj,
                        std::uint64_t seed_base, std::size_t workers = 1);

/// Appends `extra`'s trajectories; both must come from the same config.
DatasetManifest merge(DatasetManifest base, const DatasetManifest& extra);

/// Drops round(frac * count) uniformly chosen trajectories from the expert and
/// medium tiers; survivors keep their order. A nonzero fraction on an empty
/// tier is ignored and recorded in `warnings`.
DatasetManifest ablate(const DatasetManifest& manifest, double drop_expert, double drop_medium,
                       std::uint64_t seed);

struct TierStats {
  std::string tier;
  std::size_t count = 0;
  double mean = 0.0;
  double std = 0.0;
  double min = 0.0;
  double max = 0.0;
  std::vector<std::size_t> histogram;
};

/// Per-tier return statistics; all histograms share bins over the pooled range.
struct ReturnStats {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t bins = 0;
  std::size_t total_steps = 0;
  std::vector<TierStats> tiers;
  const TierStats* find(std::string_view tier) const;
};

constexpr std::size_t kDefaultHistogramBins = 30;

ReturnStats return_stats(const DatasetManifest& manifest, std::size_t bins = kDefaultHistogramBins);

/// Shared probability mass of two normalized histograms, in [0, 1].
double overlap_mass(const TierStats& a, const TierStats& b);

std::string format_stats(const ReturnStats& stats);

std::string serialize_trajectory(const Trajectory& traj);
Trajectory parse_trajectory(std::string_view line);

/// JSON Lines body: one trajectory per line, each terminated by '\n'.
std::string serialize_data(const DatasetManifest& manifest);
/// Sidecar document: counts, stats, provenance and the data file's SHA-256.
std::string serialize_sidecar(const DatasetManifest& manifest, const std::string& data_sha256);

std::filesystem::path sidecar_path(const std::filesystem::path& data_path);
void write_dataset(const DatasetManifest& manifest, const std::filesystem::path& data_path);
/// Reads the data file and, when present, its sidecar (checking the digest).
DatasetManifest read_dataset(const std::filesystem::path& data_path);

}  // namespace mobenv
