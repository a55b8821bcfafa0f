#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mobenv/mac.hpp"
#include "mobenv/mobility.hpp"
#include "mobenv/radio.hpp"

namespace mobenv {

struct EpisodeParams {
  std::size_t horizon = 100;
  double threshold_step = 0.1;
  double initial_threshold = 0.5;
  friend bool operator==(const EpisodeParams&, const EpisodeParams&) = default;
};

/// Immutable scenario description. Map size lives in `mobility`.
struct NetworkConfig {
  std::size_t n_bs = 3;
  std::size_t n_ues = 5;
  std::vector<Position> bs_positions;
  RadioParams radio;
  UtilityParams utility;
  MobilityConfig mobility;
  FadingModel fading;
  EpisodeParams episode;

  /// 3 stations on the horizontal midline of a 200x200 map, 5 users, Full mobility.
  static NetworkConfig defaults();

  void validate() const;
  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

/// Stations evenly spaced on the horizontal midline, one per equal-width column.
std::vector<Position> midline_stations(std::size_t n_bs, double map_width, double map_height);

/// Limited-mobility anchors drawn uniformly on the map from a fixed seed.
std::vector<Position> seeded_anchors(std::size_t n_ues, double map_width, double map_height,
                                     std::uint64_t seed);

constexpr std::uint64_t kDefaultAnchorSeed = 1;

/// Sections {network, radio, utility, mobility, fading, episode}; every key is
/// optional and unknown keys are rejected.
NetworkConfig config_from_json(const nlohmann::json& doc);
/// Fully resolved document (defaults materialized). Object keys are sorted.
nlohmann::json config_to_json(const NetworkConfig& cfg);
NetworkConfig load_config(const std::filesystem::path& path);

/// SHA-256 of the canonical serialization of the resolved config.
std::string config_hash(const NetworkConfig& cfg);

std::string to_string(MobilityVariant v);
MobilityVariant parse_mobility_variant(const std::string& text);

}  // namespace mobenv
