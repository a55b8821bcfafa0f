#include "mobenv/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "mobenv/digest.hpp"
#include "mobenv/errors.hpp"

namespace mobenv {

using nlohmann::json;

std::vector<Position> midline_stations(std::size_t n_bs, double map_width, double map_height) {
  std::vector<Position> out;
  out.reserve(n_bs);
  for (std::size_t k = 0; k < n_bs; ++k) {
    out.push_back({map_width * (static_cast<double>(k) + 0.5) / static_cast<double>(n_bs),
                   map_height / 2.0});
  }
  return out;
}

std::vector<Position> seeded_anchors(std::size_t n_ues, double map_width, double map_height,
                                     std::uint64_t seed) {
  RngStream rng = RngStream::derive(seed, 0xA7C);
  std::vector<Position> out;
  out.reserve(n_ues);
  for (std::size_t j = 0; j < n_ues; ++j) {
    const double x = rng.uniform(0.0, map_width);
    const double y = rng.uniform(0.0, map_height);
    out.push_back({x, y});
  }
  return out;
}

NetworkConfig NetworkConfig::defaults() {
  NetworkConfig cfg;
  cfg.bs_positions = midline_stations(cfg.n_bs, cfg.mobility.map_width, cfg.mobility.map_height);
  cfg.radio = RadioParams::with_default_refs(cfg.mobility.map_width, cfg.mobility.map_height);
  cfg.mobility.anchors = seeded_anchors(cfg.n_ues, cfg.mobility.map_width, cfg.mobility.map_height,
                                        kDefaultAnchorSeed);
  return cfg;
}

void NetworkConfig::validate() const {
  if (n_bs == 0) throw ConfigError("network: n_bs must be >= 1");
  if (n_ues == 0) throw ConfigError("network: n_ues must be >= 1");
  if (n_bs > 20) throw ConfigError("network: n_bs > 20 overflows the action code");
  if (bs_positions.size() != n_bs) throw ConfigError("network: need one position per station");
  for (const Position& p : bs_positions) {
    if (!mobility.contains(p)) throw ConfigError("network: station outside the map");
  }
  radio.validate();
  utility.validate();
  mobility.validate(n_ues);
  try {
    fading.validate();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
  if (episode.horizon == 0) throw ConfigError("episode: horizon must be >= 1");
  if (!(episode.threshold_step > 0.0) || episode.threshold_step > 1.0) {
    throw ConfigError("episode: threshold_step must be in (0, 1]");
  }
  if (!(episode.initial_threshold >= 0.0 && episode.initial_threshold <= 1.0)) {
    throw ConfigError("episode: initial_threshold must be in [0, 1]");
  }
}

std::string to_string(MobilityVariant v) { return v == MobilityVariant::Full ? "full" : "limited"; }

MobilityVariant parse_mobility_variant(const std::string& text) {
  if (text == "full") return MobilityVariant::Full;
  if (text == "limited") return MobilityVariant::Limited;
  throw ConfigError("unknown mobility variant '" + text + "' (expected full|limited)");
}

namespace {

// Reads optional keys of one config section and rejects anything unrecognized.
class Section {
 public:
  Section(const json& doc, const char* name) : name_(name) {
    if (doc.contains(name)) {
      node_ = &doc.at(name);
      if (!node_->is_object()) throw ConfigError(std::string(name) + ": must be an object");
    }
  }

  bool has(const char* key) const { return node_ && node_->contains(key); }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    if (!has(key)) return;
    try {
      out = node_->at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(name_ + "." + key + ": " + e.what());
    }
  }

  const json& raw(const char* key) {
    seen_.insert(key);
    return node_->at(key);
  }

  void know(const char* key) { seen_.insert(key); }

  void finish() const {
    if (!node_) return;
    for (const auto& item : node_->items()) {
      if (!seen_.contains(item.key())) throw ConfigError(name_ + ": unknown key '" + item.key() + "'");
    }
  }

 private:
  std::string name_;
  const json* node_ = nullptr;
  std::set<std::string> seen_;
};

std::vector<Position> read_positions(const json& node, const std::string& what) {
  if (!node.is_array()) throw ConfigError(what + ": expected an array of [x, y]");
  std::vector<Position> out;
  for (const json& item : node) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw ConfigError(what + ": expected [x, y] pairs");
    }
    out.push_back({item[0].get<double>(), item[1].get<double>()});
  }
  return out;
}

json write_positions(const std::vector<Position>& ps) {
  json out = json::array();
  for (const Position& p : ps) out.push_back({p.x, p.y});
  return out;
}

}  // namespace

NetworkConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: top level must be an object");
  for (const auto& item : doc.items()) {
    static const std::set<std::string> kSections{"network", "radio", "utility",
                                                 "mobility", "fading", "episode"};
    if (!kSections.contains(item.key())) throw ConfigError("config: unknown section '" + item.key() + "'");
  }

  NetworkConfig cfg;

  Section net(doc, "network");
  net.read("n_bs", cfg.n_bs);
  net.read("n_ues", cfg.n_ues);
  net.read("map_width", cfg.mobility.map_width);
  net.read("map_height", cfg.mobility.map_height);
  if (net.has("bs_positions")) {
    cfg.bs_positions = read_positions(net.raw("bs_positions"), "network.bs_positions");
  } else {
    net.know("bs_positions");
  }
  net.finish();
  if (cfg.bs_positions.empty()) {
    cfg.bs_positions = midline_stations(cfg.n_bs, cfg.mobility.map_width, cfg.mobility.map_height);
  }

  Section radio(doc, "radio");
  radio.read("tx_power_dbm", cfg.radio.tx_power_dbm);
  radio.read("noise_dbm", cfg.radio.noise_dbm);
  radio.read("pathloss_exponent", cfg.radio.pathloss_exponent);
  radio.read("reference_distance", cfg.radio.reference_distance);
  radio.read("reference_pathloss_db", cfg.radio.reference_pathloss_db);
  std::string scale = "db";
  radio.read("scale", scale);
  if (scale == "db") {
    cfg.radio.scale = SnrScale::Decibel;
  } else if (scale == "linear") {
    cfg.radio.scale = SnrScale::Linear;
  } else {
    throw ConfigError("radio.scale: expected db|linear");
  }
  {
    const Position origin{0.0, 0.0};
    RadioParams budget = cfg.radio;
    const double half_diag = std::hypot(cfg.mobility.map_width, cfg.mobility.map_height) / 2.0;
    cfg.radio.snr_upper_ref = raw_snr(origin, {1.0, 0.0}, budget);
    cfg.radio.snr_lower_ref = raw_snr(origin, {half_diag, 0.0}, budget);
  }
  radio.read("snr_upper_ref", cfg.radio.snr_upper_ref);
  radio.read("snr_lower_ref", cfg.radio.snr_lower_ref);
  radio.finish();

  Section util(doc, "utility");
  util.read("bandwidth", cfg.utility.bandwidth);
  util.read("w1", cfg.utility.w1);
  util.read("w2", cfg.utility.w2);
  util.read("w3", cfg.utility.w3);
  util.read("lower", cfg.utility.lower);
  util.read("upper", cfg.utility.upper);
  std::string aggregate = "mean";
  util.read("aggregate", aggregate);
  if (aggregate == "mean") {
    cfg.utility.aggregate = RateAggregate::Mean;
  } else if (aggregate == "sum") {
    cfg.utility.aggregate = RateAggregate::Sum;
  } else {
    throw ConfigError("utility.aggregate: expected mean|sum");
  }
  util.finish();

  Section mob(doc, "mobility");
  std::string variant = "full";
  mob.read("variant", variant);
  cfg.mobility.variant = parse_mobility_variant(variant);
  mob.read("speed", cfg.mobility.speed);
  mob.read("init_radius", cfg.mobility.init_radius);
  mob.read("waypoint_radius", cfg.mobility.waypoint_radius);
  std::uint64_t anchor_seed = kDefaultAnchorSeed;
  mob.read("anchor_seed", anchor_seed);
  if (mob.has("anchors")) {
    const json& anchors = mob.raw("anchors");
    if (anchors.is_string() && anchors.get<std::string>() == "per-episode") {
      cfg.mobility.anchors.clear();
    } else {
      cfg.mobility.anchors = read_positions(anchors, "mobility.anchors");
    }
    if (mob.has("anchor_seed")) throw ConfigError("mobility: give anchors or anchor_seed, not both");
  } else {
    mob.know("anchors");
    cfg.mobility.anchors =
        seeded_anchors(cfg.n_ues, cfg.mobility.map_width, cfg.mobility.map_height, anchor_seed);
  }
  mob.finish();

  Section fad(doc, "fading");
  std::string kind = "none";
  fad.read("kind", kind);
  if (kind == "none") {
    cfg.fading.kind = FadingKind::None;
  } else if (kind == "rayleigh") {
    cfg.fading.kind = FadingKind::Rayleigh;
  } else if (kind == "rician") {
    cfg.fading.kind = FadingKind::Rician;
  } else {
    throw ConfigError("fading.kind: expected none|rayleigh|rician");
  }
  fad.read("omega", cfg.fading.omega);
  fad.read("k", cfg.fading.k_factor);
  fad.finish();

  Section ep(doc, "episode");
  ep.read("horizon", cfg.episode.horizon);
  ep.read("threshold_step", cfg.episode.threshold_step);
  ep.read("initial_threshold", cfg.episode.initial_threshold);
  ep.finish();

  cfg.validate();
  return cfg;
}

json config_to_json(const NetworkConfig& cfg) {
  json doc;
  doc["network"] = {{"n_bs", cfg.n_bs},
                    {"n_ues", cfg.n_ues},
                    {"map_width", cfg.mobility.map_width},
                    {"map_height", cfg.mobility.map_height},
                    {"bs_positions", write_positions(cfg.bs_positions)}};
  doc["radio"] = {{"tx_power_dbm", cfg.radio.tx_power_dbm},
                  {"noise_dbm", cfg.radio.noise_dbm},
                  {"pathloss_exponent", cfg.radio.pathloss_exponent},
                  {"reference_distance", cfg.radio.reference_distance},
                  {"reference_pathloss_db", cfg.radio.reference_pathloss_db},
                  {"snr_upper_ref", cfg.radio.snr_upper_ref},
                  {"snr_lower_ref", cfg.radio.snr_lower_ref},
                  {"scale", cfg.radio.scale == SnrScale::Decibel ? "db" : "linear"}};
  doc["utility"] = {{"bandwidth", cfg.utility.bandwidth},
                    {"w1", cfg.utility.w1},
                    {"w2", cfg.utility.w2},
                    {"w3", cfg.utility.w3},
                    {"lower", cfg.utility.lower},
                    {"upper", cfg.utility.upper},
                    {"aggregate", cfg.utility.aggregate == RateAggregate::Mean ? "mean" : "sum"}};
  json mobility = {{"variant", to_string(cfg.mobility.variant)},
                   {"speed", cfg.mobility.speed},
                   {"init_radius", cfg.mobility.init_radius},
                   {"waypoint_radius", cfg.mobility.waypoint_radius}};
  if (cfg.mobility.anchors.empty()) {
    mobility["anchors"] = "per-episode";
  } else {
    mobility["anchors"] = write_positions(cfg.mobility.anchors);
  }
  doc["mobility"] = std::move(mobility);
  const char* kind = cfg.fading.kind == FadingKind::None       ? "none"
                     : cfg.fading.kind == FadingKind::Rayleigh ? "rayleigh"
                                                               : "rician";
  doc["fading"] = {{"kind", kind}, {"omega", cfg.fading.omega}, {"k", cfg.fading.k_factor}};
  doc["episode"] = {{"horizon", cfg.episode.horizon},
                    {"threshold_step", cfg.episode.threshold_step},
                    {"initial_threshold", cfg.episode.initial_threshold}};
  return doc;
}

NetworkConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc);
}

std::string config_hash(const NetworkConfig& cfg) { return sha256_hex(config_to_json(cfg).dump()); }

}  // namespace mobenv
