#pragma once

#include <span>
#include <string>
#include <vector>

#include "mobenv/grid.hpp"
#include "mobenv/rng.hpp"

namespace mobenv {

struct Position {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Position&, const Position&) = default;
};

double distance(Position a, Position b);

/// Domain in which raw SNR is rescaled between the two references.
enum class SnrScale { Decibel, Linear };

/// Log-distance link budget plus the two fixed rescaling references
/// (both stored as linear ratios).
struct RadioParams {
  double tx_power_dbm = 30.0;
  double noise_dbm = -90.0;
  double pathloss_exponent = 3.0;
  double reference_distance = 1.0;
  double reference_pathloss_db = 40.0;
  double snr_upper_ref = 0.0;
  double snr_lower_ref = 0.0;
  SnrScale scale = SnrScale::Decibel;

  /// Link-budget defaults with references set to the SNR at 1 m (upper) and
  /// at half the map diagonal (lower).
  static RadioParams with_default_refs(double map_width, double map_height);

  void validate() const;
  friend bool operator==(const RadioParams&, const RadioParams&) = default;
};

double raw_snr_db(Position bs, Position ue, const RadioParams& params);
/// Linear SNR of a BS-UE pair; distance is clamped below at reference_distance.
double raw_snr(Position bs, Position ue, const RadioParams& params);
/// Maps a raw linear SNR onto [0,1]: 0 at or below the lower reference,
/// 1 at or above the upper reference, affine in between on the configured scale.
double normalize_snr(double raw, const RadioParams& params);

enum class FadingKind { None, Rayleigh, Rician };

struct FadingModel {
  FadingKind kind = FadingKind::None;
  double omega = 1.0;
  double k_factor = 0.0;

  static FadingModel none() { return {}; }
  static FadingModel rayleigh(double omega = 1.0) { return {FadingKind::Rayleigh, omega, 0.0}; }
  static FadingModel rician(double k, double omega = 1.0) { return {FadingKind::Rician, omega, k}; }

  /// Accepts "none", "rayleigh", "rician:K".
  static FadingModel parse(const std::string& text);
  std::string label() const;

  void validate() const;
  friend bool operator==(const FadingModel&, const FadingModel&) = default;
};

/// Fading amplitude H >= 0. The channel power gain is H*H.
double sample_fading(const FadingModel& model, RngStream& rng);

/// Normalized SNRs, rows = base stations, cols = users.
using SnrMatrix = Grid<double>;

SnrMatrix snr_matrix(std::span<const Position> stations, std::span<const Position> users,
                     const RadioParams& params);

/// Multiplies every entry by an independent |H|^2 draw. The result is NOT
/// clipped; callers exposing it as state must use clip_unit.
SnrMatrix fade_matrix(const SnrMatrix& snr, const FadingModel& model, RngStream& rng);

SnrMatrix clip_unit(const SnrMatrix& snr);

}  // namespace mobenv
