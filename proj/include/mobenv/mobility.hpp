#pragma once

#include <cstddef>
#include <vector>

#include "mobenv/radio.hpp"
#include "mobenv/rng.hpp"

namespace mobenv {

enum class MobilityVariant { Full, Limited };

/// Random Waypoint parameters. In the Limited variant each user is tied to an
/// anchor: it starts inside disc(anchor, init_radius) and only ever targets
/// waypoints inside disc(anchor, waypoint_radius). Anchors listed in the config
/// are fixed across episodes; when none are given they are sampled per episode.
struct MobilityConfig {
  MobilityVariant variant = MobilityVariant::Full;
  double speed = 2.5;
  double map_width = 200.0;
  double map_height = 200.0;
  double init_radius = 20.0;
  double waypoint_radius = 10.0;
  std::vector<Position> anchors;

  void validate(std::size_t n_ues) const;
  bool contains(Position p) const;
  friend bool operator==(const MobilityConfig&, const MobilityConfig&) = default;
};

struct UeMotionState {
  Position position;
  Position waypoint;
  Position anchor;
  RngStream rng;
  friend bool operator==(const UeMotionState&, const UeMotionState&) = default;
};

/// Per-user streams are derived from `rng`, so users can later be stepped independently.
std::vector<UeMotionState> init_positions(const MobilityConfig& cfg, std::size_t n_ues,
                                          RngStream& rng);

Position sample_waypoint(const MobilityConfig& cfg, const UeMotionState& state, RngStream& rng);

/// Uniform point of disc(center, radius) intersected with the map (rejection sampling).
Position sample_in_disc(const MobilityConfig& cfg, Position center, double radius, RngStream& rng);

/// Moves min(speed, remaining) toward the waypoint. On arrival a fresh waypoint
/// is drawn from the user's own stream and any leftover movement is dropped.
UeMotionState step_motion(UeMotionState state, const MobilityConfig& cfg);

}  // namespace mobenv
