#include "mobenv/radio.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "mobenv/errors.hpp"

namespace mobenv {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

RadioParams RadioParams::with_default_refs(double map_width, double map_height) {
  RadioParams p;
  const Position origin{0.0, 0.0};
  p.snr_upper_ref = raw_snr(origin, {1.0, 0.0}, p);
  p.snr_lower_ref = raw_snr(origin, {std::hypot(map_width, map_height) / 2.0, 0.0}, p);
  return p;
}

void RadioParams::validate() const {
  if (!(pathloss_exponent > 0.0)) throw ConfigError("radio: pathloss_exponent must be > 0");
  if (!(reference_distance > 0.0)) throw ConfigError("radio: reference_distance must be > 0");
  if (!std::isfinite(tx_power_dbm) || !std::isfinite(noise_dbm) ||
      !std::isfinite(reference_pathloss_db)) {
    throw ConfigError("radio: link budget terms must be finite");
  }
  if (!(snr_lower_ref > 0.0) || !(snr_upper_ref > snr_lower_ref) || !std::isfinite(snr_upper_ref)) {
    throw ConfigError("radio: require snr_upper_ref > snr_lower_ref > 0");
  }
}

double raw_snr_db(Position bs, Position ue, const RadioParams& params) {
  if (!std::isfinite(bs.x) || !std::isfinite(bs.y) || !std::isfinite(ue.x) || !std::isfinite(ue.y)) {
    throw InvalidInput("raw_snr: non-finite coordinates");
  }
  const double d = std::max(distance(bs, ue), params.reference_distance);
  return params.tx_power_dbm - params.noise_dbm - params.reference_pathloss_db -
         10.0 * params.pathloss_exponent * std::log10(d / params.reference_distance);
}

double raw_snr(Position bs, Position ue, const RadioParams& params) {
  return std::pow(10.0, raw_snr_db(bs, ue, params) / 10.0);
}

double normalize_snr(double raw, const RadioParams& params) {
  if (!(raw >= 0.0)) throw InvalidInput("normalize_snr: raw SNR must be >= 0");
  if (raw <= params.snr_lower_ref) return 0.0;
  if (raw >= params.snr_upper_ref) return 1.0;
  double v = 0.0;
  if (params.scale == SnrScale::Linear) {
    v = (raw - params.snr_lower_ref) / (params.snr_upper_ref - params.snr_lower_ref);
  } else {
    const double lo = std::log10(params.snr_lower_ref);
    v = (std::log10(raw) - lo) / (std::log10(params.snr_upper_ref) - lo);
  }
  return std::clamp(v, 0.0, 1.0);
}

FadingModel FadingModel::parse(const std::string& text) {
  if (text == "none") return none();
  if (text == "rayleigh") return rayleigh();
  constexpr std::string_view prefix = "rician:";
  if (text.starts_with(prefix)) {
    const std::string rest = text.substr(prefix.size());
    std::size_t used = 0;
    double k = 0.0;
    try {
      k = std::stod(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != rest.size()) throw InvalidInput("bad Rician K in '" + text + "'");
    FadingModel m = rician(k);
    m.validate();
    return m;
  }
  throw InvalidInput("unknown fading model '" + text + "' (expected none|rayleigh|rician:K)");
}

std::string FadingModel::label() const {
  switch (kind) {
    case FadingKind::None: return "none";
    case FadingKind::Rayleigh: return "rayleigh";
    case FadingKind::Rician: return fmt::format("rician:{}", k_factor);
  }
  return "unknown";
}

void FadingModel::validate() const {
  if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidInput("fading: omega must be > 0");
  if (kind == FadingKind::Rician && !(k_factor >= 0.0)) {
    throw InvalidInput("fading: Rician K must be >= 0");
  }
}

double sample_fading(const FadingModel& model, RngStream& rng) {
  switch (model.kind) {
    case FadingKind::None:
      return 1.0;
    case FadingKind::Rayleigh:
      model.validate();
      // Inverse CDF of 1 - exp(-h^2 / omega).
      return std::sqrt(-model.omega * std::log(rng.uniform_open()));
    case FadingKind::Rician: {
      model.validate();
      const double k = model.k_factor;
      const double los = std::sqrt(k * model.omega / (k + 1.0));
      const double sigma = std::sqrt(model.omega / (2.0 * (k + 1.0)));
      const double re = los + sigma * rng.normal();
      const double im = sigma * rng.normal();
      return std::hypot(re, im);
    }
  }
  throw InvalidInput("fading: unknown kind");
}

SnrMatrix snr_matrix(std::span<const Position> stations, std::span<const Position> users,
                     const RadioParams& params) {
  SnrMatrix out(stations.size(), users.size());
  for (std::size_t i = 0; i < stations.size(); ++i) {
    for (std::size_t j = 0; j < users.size(); ++j) {
      out(i, j) = normalize_snr(raw_snr(stations[i], users[j], params), params);
    }
  }
  return out;
}

SnrMatrix fade_matrix(const SnrMatrix& snr, const FadingModel& model, RngStream& rng) {
  if (model.kind == FadingKind::None) return snr;
  model.validate();
  SnrMatrix out = snr;
  for (double& v : out.values()) {
    const double h = sample_fading(model, rng);
    v *= h * h;
  }
  return out;
}

SnrMatrix clip_unit(const SnrMatrix& snr) {
  SnrMatrix out = snr;
  for (double& v : out.values()) v = std::clamp(v, 0.0, 1.0);
  return out;
}

}  // namespace mobenv
