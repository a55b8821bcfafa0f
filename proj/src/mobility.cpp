#include "mobenv/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "mobenv/errors.hpp"

namespace mobenv {

void MobilityConfig::validate(std::size_t n_ues) const {
  if (!(map_width > 0.0) || !(map_height > 0.0)) throw ConfigError("mobility: map must be non-empty");
  if (!(speed >= 0.0) || !std::isfinite(speed)) throw ConfigError("mobility: speed must be >= 0");
  if (!(init_radius >= 0.0) || !(waypoint_radius >= 0.0)) {
    throw ConfigError("mobility: radii must be >= 0");
  }
  if (!anchors.empty()) {
    if (anchors.size() != n_ues) throw ConfigError("mobility: need one anchor per user");
    for (const Position& a : anchors) {
      if (!contains(a)) throw ConfigError("mobility: anchor outside the map");
    }
  }
}

bool MobilityConfig::contains(Position p) const {
  return p.x >= 0.0 && p.x <= map_width && p.y >= 0.0 && p.y <= map_height;
}

Position sample_in_disc(const MobilityConfig& cfg, Position center, double radius, RngStream& rng) {
  if (radius == 0.0) return center;
  while (true) {
    const double r = radius * std::sqrt(rng.uniform());
    const double theta = 2.0 * std::numbers::pi * rng.uniform();
    const Position p{center.x + r * std::cos(theta), center.y + r * std::sin(theta)};
    if (cfg.contains(p)) return p;
  }
}

namespace {

Position uniform_on_map(const MobilityConfig& cfg, RngStream& rng) {
  const double x = rng.uniform(0.0, cfg.map_width);
  const double y = rng.uniform(0.0, cfg.map_height);
  return {x, y};
}

Position clamp_to_map(const MobilityConfig& cfg, Position p) {
  return {std::clamp(p.x, 0.0, cfg.map_width), std::clamp(p.y, 0.0, cfg.map_height)};
}

}  // namespace

Position sample_waypoint(const MobilityConfig& cfg, const UeMotionState& state, RngStream& rng) {
  if (cfg.variant == MobilityVariant::Full) return uniform_on_map(cfg, rng);
  return sample_in_disc(cfg, state.anchor, cfg.waypoint_radius, rng);
}

std::vector<UeMotionState> init_positions(const MobilityConfig& cfg, std::size_t n_ues,
                                          RngStream& rng) {
  if (n_ues == 0) throw ConfigError("mobility: at least one user required");
  cfg.validate(n_ues);
  std::vector<UeMotionState> ues;
  ues.reserve(n_ues);
  const std::uint64_t base = rng.next_u64();
  for (std::size_t j = 0; j < n_ues; ++j) {
    UeMotionState ue{{}, {}, {}, RngStream::derive(base, j)};
    if (cfg.variant == MobilityVariant::Full) {
      ue.position = uniform_on_map(cfg, ue.rng);
      ue.anchor = ue.position;
    } else {
      ue.anchor = cfg.anchors.empty() ? uniform_on_map(cfg, ue.rng) : cfg.anchors[j];
      ue.position = sample_in_disc(cfg, ue.anchor, cfg.init_radius, ue.rng);
    }
    ue.waypoint = sample_waypoint(cfg, ue, ue.rng);
    ues.push_back(std::move(ue));
  }
  return ues;
}

UeMotionState step_motion(UeMotionState state, const MobilityConfig& cfg) {
  if (cfg.speed == 0.0) return state;
  const double dx = state.waypoint.x - state.position.x;
  const double dy = state.waypoint.y - state.position.y;
  const double remaining = std::hypot(dx, dy);
  if (remaining <= cfg.speed) {
    state.position = state.waypoint;
    state.waypoint = sample_waypoint(cfg, state, state.rng);
    return state;
  }
  const double f = cfg.speed / remaining;
  state.position = clamp_to_map(cfg, {state.position.x + f * dx, state.position.y + f * dy});
  return state;
}

}  // namespace mobenv
