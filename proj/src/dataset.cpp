#include "mobenv/dataset.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <numeric>
#include <sstream>
#include <thread>

#include "mobenv/digest.hpp"
#include "mobenv/errors.hpp"

namespace mobenv {

using nlohmann::json;
using nlohmann::ordered_json;

void fill_returns_to_go(Trajectory& traj) {
  double acc = 0.0;
  for (std::size_t t = traj.steps.size(); t-- > 0;) {
    acc = traj.steps[t].reward + acc;
    traj.steps[t].rtg = acc;
  }
  traj.total_return = traj.steps.empty() ? 0.0 : traj.steps.front().rtg;
}

Trajectory run_episode(const NetworkConfig& cfg, const PolicySpec& policy, std::uint64_t seed,
                       const std::string& config_hash) {
  policy.validate();
  Env env(cfg);
  Trajectory traj;
  traj.seed = seed;
  traj.policy_id = policy.id();
  traj.config_hash = config_hash;
  traj.steps.reserve(cfg.episode.horizon);

  Observation obs = env.reset(seed);
  while (!env.done()) {
    const std::uint64_t action = choose_action(policy, env);
    StepResult sr = env.step(action);
    traj.steps.push_back({env.state().t - 1, obs.flatten(), action, sr.reward, 0.0});
    obs = std::move(sr.observation);
  }
  fill_returns_to_go(traj);
  return traj;
}

std::size_t DatasetManifest::total_steps() const {
  std::size_t n = 0;
  for (const Trajectory& t : trajectories) n += t.steps.size();
  return n;
}

std::map<std::string, std::size_t> DatasetManifest::tier_counts() const {
  std::map<std::string, std::size_t> out;
  for (const Trajectory& t : trajectories) ++out[t.policy_id];
  return out;
}

std::size_t DatasetManifest::count(std::string_view tier) const {
  return static_cast<std::size_t>(std::count_if(
      trajectories.begin(), trajectories.end(),
      [&](const Trajectory& t) { return t.policy_id == tier; }));
}

DatasetManifest collect(const NetworkConfig& cfg, const PolicySpec& policy, std::size_t n_traj,
                        std::uint64_t seed_base, std::size_t workers) {
  if (n_traj == 0) throw InvalidInput("collect: n_traj must be >= 1");
  policy.validate();
  cfg.validate();
  DatasetManifest out;
  out.config_hash = config_hash(cfg);
  out.config = config_to_json(cfg);
  out.collections.push_back(
      {policy.id(), n_traj, seed_base, policy.kind == PolicyKind::Medium ? policy.epsilon : 0.0,
       policy.lookahead_depth});
  out.trajectories.resize(n_traj);

  workers = std::clamp<std::size_t>(workers, 1, n_traj);
  std::vector<std::exception_ptr> errors(n_traj);
  auto work = [&](std::size_t first) {
    for (std::size_t k = first; k < n_traj; k += workers) {
      try {
        out.trajectories[k] = run_episode(cfg, policy, seed_base + k, out.config_hash);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

DatasetManifest merge(DatasetManifest base, const DatasetManifest& extra) {
  if (base.trajectories.empty() && base.config_hash.empty()) return extra;
  if (base.config_hash != extra.config_hash) {
    throw DatasetError("merge: datasets come from different configs");
  }
  base.trajectories.insert(base.trajectories.end(), extra.trajectories.begin(),
                           extra.trajectories.end());
  base.collections.insert(base.collections.end(), extra.collections.begin(),
                          extra.collections.end());
  base.ablations.insert(base.ablations.end(), extra.ablations.begin(), extra.ablations.end());
  base.warnings.insert(base.warnings.end(), extra.warnings.begin(), extra.warnings.end());
  return base;
}

DatasetManifest ablate(const DatasetManifest& manifest, double drop_expert, double drop_medium,
                       std::uint64_t seed) {
  for (double f : {drop_expert, drop_medium}) {
    if (!(f >= 0.0 && f <= 1.0)) throw InvalidInput("ablate: fractions must be in [0, 1]");
  }
  if (drop_expert == 0.0 && drop_medium == 0.0) return manifest;

  DatasetManifest out = manifest;
  std::vector<bool> keep(manifest.trajectories.size(), true);
  const std::pair<const char*, double> plan[] = {{"expert", drop_expert}, {"medium", drop_medium}};
  std::uint64_t stream = 0;
  for (const auto& [tier, frac] : plan) {
    ++stream;
    if (frac == 0.0) continue;
    std::vector<std::size_t> members;
    for (std::size_t k = 0; k < manifest.trajectories.size(); ++k) {
      if (manifest.trajectories[k].policy_id == tier) members.push_back(k);
    }
    if (members.empty()) {
      out.warnings.push_back(fmt::format("ablate: tier '{}' is empty; drop of {} ignored", tier, frac));
      continue;
    }
    const auto survivors = static_cast<std::size_t>(
        std::llround((1.0 - frac) * static_cast<double>(members.size())));
    const std::size_t n_drop = members.size() - survivors;
    // Partial Fisher-Yates: the first n_drop slots become the dropped set.
    RngStream rng = RngStream::derive(seed, stream);
    for (std::size_t i = 0; i < n_drop; ++i) {
      const std::size_t j = i + rng.uniform_index(members.size() - i);
      std::swap(members[i], members[j]);
      keep[members[i]] = false;
    }
  }
  out.trajectories.clear();
  for (std::size_t k = 0; k < manifest.trajectories.size(); ++k) {
    if (keep[k]) out.trajectories.push_back(manifest.trajectories[k]);
  }
  out.ablations.push_back({drop_expert, drop_medium, seed});
  return out;
}

const TierStats* ReturnStats::find(std::string_view tier) const {
  for (const TierStats& t : tiers) {
    if (t.tier == tier) return &t;
  }
  return nullptr;
}

namespace {

std::vector<std::string> tier_order(const DatasetManifest& manifest) {
  std::vector<std::string> order = {"expert", "medium", "random"};
  for (const auto& [tier, n] : manifest.tier_counts()) {
    if (std::find(order.begin(), order.end(), tier) == order.end()) order.push_back(tier);
  }
  return order;
}

}  // namespace

ReturnStats return_stats(const DatasetManifest& manifest, std::size_t bins) {
  if (manifest.trajectories.empty()) throw DatasetError("stats: dataset is empty");
  if (bins == 0) throw InvalidInput("stats: bins must be >= 1");
  ReturnStats stats;
  stats.bins = bins;
  stats.total_steps = manifest.total_steps();
  stats.lo = manifest.trajectories.front().total_return;
  stats.hi = stats.lo;
  for (const Trajectory& t : manifest.trajectories) {
    stats.lo = std::min(stats.lo, t.total_return);
    stats.hi = std::max(stats.hi, t.total_return);
  }
  const double width = stats.hi - stats.lo;

  for (const std::string& tier : tier_order(manifest)) {
    std::vector<double> returns;
    for (const Trajectory& t : manifest.trajectories) {
      if (t.policy_id == tier) returns.push_back(t.total_return);
    }
    if (returns.empty()) continue;
    TierStats ts;
    ts.tier = tier;
    ts.count = returns.size();
    const double n = static_cast<double>(returns.size());
    ts.mean = std::accumulate(returns.begin(), returns.end(), 0.0) / n;
    double ss = 0.0;
    for (double r : returns) ss += (r - ts.mean) * (r - ts.mean);
    ts.std = std::sqrt(ss / n);
    ts.min = *std::min_element(returns.begin(), returns.end());
    ts.max = *std::max_element(returns.begin(), returns.end());
    ts.histogram.assign(bins, 0);
    for (double r : returns) {
      std::size_t b = 0;
      if (width > 0.0) {
        b = std::min(bins - 1, static_cast<std::size_t>((r - stats.lo) / width * static_cast<double>(bins)));
      }
      ++ts.histogram[b];
    }
    stats.tiers.push_back(std::move(ts));
  }
  return stats;
}

double overlap_mass(const TierStats& a, const TierStats& b) {
  if (a.histogram.size() != b.histogram.size()) throw InvalidInput("overlap_mass: bin mismatch");
  if (a.count == 0 || b.count == 0) return 0.0;
  double mass = 0.0;
  for (std::size_t k = 0; k < a.histogram.size(); ++k) {
    mass += std::min(static_cast<double>(a.histogram[k]) / static_cast<double>(a.count),
                     static_cast<double>(b.histogram[k]) / static_cast<double>(b.count));
  }
  return mass;
}

std::string format_stats(const ReturnStats& stats) {
  std::string out = fmt::format("total steps: {}\n", stats.total_steps);
  out += fmt::format("return range: [{:.6f}, {:.6f}] bins: {}\n", stats.lo, stats.hi, stats.bins);
  for (const TierStats& t : stats.tiers) {
    out += fmt::format("tier {}: count={} mean={:.6f} std={:.6f} min={:.6f} max={:.6f}\n", t.tier,
                       t.count, t.mean, t.std, t.min, t.max);
  }
  const double width = stats.bins ? (stats.hi - stats.lo) / static_cast<double>(stats.bins) : 0.0;
  out += "histogram bin_lo";
  for (const TierStats& t : stats.tiers) out += " " + t.tier;
  out += "\n";
  for (std::size_t b = 0; b < stats.bins; ++b) {
    out += fmt::format("bin {:.6f}", stats.lo + width * static_cast<double>(b));
    for (const TierStats& t : stats.tiers) out += fmt::format(" {}", t.histogram[b]);
    out += "\n";
  }
  const TierStats* e = stats.find("expert");
  const TierStats* m = stats.find("medium");
  if (e && m) out += fmt::format("overlap expert/medium: {:.6f}\n", overlap_mass(*e, *m));
  return out;
}

std::string serialize_trajectory(const Trajectory& traj) {
  ordered_json doc;
  doc["seed"] = traj.seed;
  doc["policy_id"] = traj.policy_id;
  doc["config_hash"] = traj.config_hash;
  doc["total_return"] = traj.total_return;
  ordered_json steps = ordered_json::array();
  for (const StepRecord& s : traj.steps) {
    ordered_json step;
    step["t"] = s.t;
    step["obs"] = s.obs;
    step["action"] = s.action;
    step["reward"] = s.reward;
    step["rtg"] = s.rtg;
    steps.push_back(std::move(step));
  }
  doc["steps"] = std::move(steps);
  return doc.dump();
}

Trajectory parse_trajectory(std::string_view line) {
  try {
    const json doc = json::parse(line);
    Trajectory traj;
    traj.seed = doc.at("seed").get<std::uint64_t>();
    traj.policy_id = doc.at("policy_id").get<std::string>();
    traj.config_hash = doc.at("config_hash").get<std::string>();
    traj.total_return = doc.at("total_return").get<double>();
    for (const json& s : doc.at("steps")) {
      traj.steps.push_back({s.at("t").get<std::size_t>(), s.at("obs").get<std::vector<double>>(),
                            s.at("action").get<std::uint64_t>(), s.at("reward").get<double>(),
                            s.at("rtg").get<double>()});
    }
    return traj;
  } catch (const json::exception& e) {
    throw DatasetError(std::string("malformed trajectory line: ") + e.what());
  }
}

std::string serialize_data(const DatasetManifest& manifest) {
  std::string out;
  for (const Trajectory& t : manifest.trajectories) {
    out += serialize_trajectory(t);
    out += '\n';
  }
  return out;
}

std::string serialize_sidecar(const DatasetManifest& manifest, const std::string& data_sha256) {
  ordered_json doc;
  doc["format"] = "mobenv-dataset/1";
  doc["config_hash"] = manifest.config_hash;
  doc["data_sha256"] = data_sha256;
  doc["total_steps"] = manifest.total_steps();
  ordered_json counts = ordered_json::object();
  for (const auto& [tier, n] : manifest.tier_counts()) counts[tier] = n;
  doc["tier_counts"] = std::move(counts);
  ordered_json tiers = ordered_json::array();
  if (!manifest.trajectories.empty()) {
    for (const TierStats& t : return_stats(manifest).tiers) {
      tiers.push_back({{"tier", t.tier}, {"count", t.count}, {"mean", t.mean},
                       {"std", t.std}, {"min", t.min}, {"max", t.max}});
    }
  }
  doc["stats"] = std::move(tiers);
  ordered_json collections = ordered_json::array();
  for (const CollectionRecord& c : manifest.collections) {
    collections.push_back({{"tier", c.tier}, {"n", c.n}, {"seed_base", c.seed_base},
                           {"epsilon", c.epsilon}, {"lookahead_depth", c.lookahead_depth}});
  }
  doc["collections"] = std::move(collections);
  ordered_json ablations = ordered_json::array();
  for (const AblationRecord& a : manifest.ablations) {
    ablations.push_back(
        {{"drop_expert", a.drop_expert}, {"drop_medium", a.drop_medium}, {"seed", a.seed}});
  }
  doc["ablations"] = std::move(ablations);
  doc["warnings"] = manifest.warnings;
  doc["config"] = ordered_json::parse(manifest.config.dump());
  return doc.dump(2) + "\n";
}

std::filesystem::path sidecar_path(const std::filesystem::path& data_path) {
  std::filesystem::path p = data_path;
  p += ".manifest.json";
  return p;
}

void write_dataset(const DatasetManifest& manifest, const std::filesystem::path& data_path) {
  for (const Trajectory& t : manifest.trajectories) {
    if (t.config_hash != manifest.config_hash) {
      throw DatasetError("write_dataset: trajectory config hash differs from the manifest");
    }
  }
  const std::string data = serialize_data(manifest);
  {
    std::ofstream out(data_path, std::ios::binary | std::ios::trunc);
    if (!out) throw DatasetError("cannot write " + data_path.string());
    out << data;
  }
  std::ofstream side(sidecar_path(data_path), std::ios::binary | std::ios::trunc);
  if (!side) throw DatasetError("cannot write " + sidecar_path(data_path).string());
  side << serialize_sidecar(manifest, sha256_hex(data));
}

DatasetManifest read_dataset(const std::filesystem::path& data_path) {
  std::ifstream in(data_path, std::ios::binary);
  if (!in) throw DatasetError("cannot open " + data_path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string data = buf.str();

  DatasetManifest manifest;
  std::istringstream lines(data);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    manifest.trajectories.push_back(parse_trajectory(line));
  }

  const std::filesystem::path side = sidecar_path(data_path);
  if (std::filesystem::exists(side)) {
    std::ifstream sin(side);
    json doc;
    try {
      doc = json::parse(sin);
      if (doc.at("data_sha256").get<std::string>() != sha256_hex(data)) {
        throw DatasetError("dataset digest does not match its manifest: " + data_path.string());
      }
      manifest.config_hash = doc.at("config_hash").get<std::string>();
      manifest.config = doc.at("config");
      for (const json& c : doc.at("collections")) {
        manifest.collections.push_back({c.at("tier").get<std::string>(), c.at("n").get<std::size_t>(),
                                        c.at("seed_base").get<std::uint64_t>(),
                                        c.at("epsilon").get<double>(),
                                        c.at("lookahead_depth").get<unsigned>()});
      }
      for (const json& a : doc.at("ablations")) {
        manifest.ablations.push_back({a.at("drop_expert").get<double>(),
                                      a.at("drop_medium").get<double>(),
                                      a.at("seed").get<std::uint64_t>()});
      }
      manifest.warnings = doc.at("warnings").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
      throw DatasetError("malformed manifest " + side.string() + ": " + e.what());
    }
  } else if (!manifest.trajectories.empty()) {
    manifest.config_hash = manifest.trajectories.front().config_hash;
  }

  for (const Trajectory& t : manifest.trajectories) {
    if (t.config_hash != manifest.config_hash) {
      throw DatasetError("trajectory config hash differs from the manifest");
    }
  }
  return manifest;
}

}  // namespace mobenv
