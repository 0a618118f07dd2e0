#include "qrep/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>

#include "qrep/presets.hpp"
#include "qrep/protocol.hpp"
#include "qrep/timing.hpp"

#ifndef QREP_VERSION
#define QREP_VERSION "unknown"
#endif

namespace qrep {
namespace {

using nlohmann::json;

struct Entry {
  ExperimentKind kind;
  const char* name;
};

constexpr std::array<Entry, 9> kExperiments{{{ExperimentKind::Table3, "table3"},
                                             {ExperimentKind::Table4, "table4"},
                                             {ExperimentKind::Table5, "table5"},
                                             {ExperimentKind::Table6, "table6"},
                                             {ExperimentKind::Fig2, "fig2"},
                                             {ExperimentKind::Fig4, "fig4"},
                                             {ExperimentKind::Fig6, "fig6"},
                                             {ExperimentKind::Direct, "direct"},
                                             {ExperimentKind::Custom, "custom"}}};

constexpr int kMaxProfileLinks = 512;

bool is_table(ExperimentKind k) {
  return k == ExperimentKind::Table3 || k == ExperimentKind::Table4 || k == ExperimentKind::Table5 ||
         k == ExperimentKind::Table6;
}

bool is_time_sweep(ExperimentKind k) { return k == ExperimentKind::Fig4 || k == ExperimentKind::Fig6; }

ChainConfig dfs_chain(int version, std::optional<double> storage) {
  ChainConfig c;
  c.encoding = Encoding::Dfs;
  c.swap_version = version;
  c.storage_time_s = storage;
  return c;
}

ExperimentConfig defaults(ExperimentKind kind) {
  ExperimentConfig c;
  c.experiment = kind;
  c.preset = "current";
  switch (kind) {
    case ExperimentKind::Table3:
      c.chain = dfs_chain(1, 1.0);
      c.links = {4, 8, 10, 11};
      break;
    case ExperimentKind::Table4:
      c.chain = dfs_chain(2, 1.0);
      c.links = {4, 6, 7, 8};
      break;
    case ExperimentKind::Table5:
      c.preset = "improved";
      c.chain = dfs_chain(1, 1.0);
      c.links = {16, 32, 64, 70, 71, 72};
      break;
    case ExperimentKind::Table6:
      c.preset = "improved";
      c.chain = dfs_chain(2, 1.0);
      c.links = {16, 32, 47, 48};
      break;
    case ExperimentKind::Fig2:
      c.chain.encoding = Encoding::None;
      c.chain.swap_version.reset();
      c.chain.storage_time_s.reset();
      c.links = {4, 8, 16};
      c.distances = {1.0, 40.0, 1.0};
      break;
    case ExperimentKind::Fig4:
      c.chain = dfs_chain(1, std::nullopt);
      c.curves = {{1, 4}, {1, 8}, {1, 10}, {2, 4}, {2, 6}, {2, 7}};
      c.distances = {20.0, 1200.0, 20.0};
      break;
    case ExperimentKind::Fig6:
      c.preset = "improved";
      c.chain = dfs_chain(1, std::nullopt);
      c.curves = {{1, 16}, {1, 32}, {1, 64}, {1, 70}, {2, 16}, {2, 32}, {2, 47}};
      c.distances = {100.0, 10000.0, 100.0};
      break;
    case ExperimentKind::Direct:
      c.distances = {10.0, 700.0, 10.0};
      break;
    case ExperimentKind::Custom:
      c.preset.clear();
      break;
  }
  return c;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 step
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

template <typename F>
void parallel_rows(std::size_t count, F&& body) {
  std::exception_ptr error;
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(count); ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(qrep_experiment_error)
      if (!error) error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);
}

template <typename T>
T read_value(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("bad value for '") + key + "'");
  }
}

void apply_file(ExperimentConfig& c, const json& file) {
  if (file.is_null()) return;
  if (!file.is_object()) throw ValidationError("config must be a JSON object");
  static const std::array<const char*, 16> known{"experiment", "version", "summary",   "preset",
                                                 "hardware",   "noise",   "chain",     "timing",
                                                 "links",      "curves",  "distances_km", "fidelity_floor",
                                                 "time_budget_s", "seed", "trials",    "comment"};
  for (const auto& [key, value] : file.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ValidationError("unknown config key '" + key + "'");
    }
  }
  if (file.contains("experiment") && read_value<std::string>(file, "experiment") != experiment_name(c.experiment)) {
    throw ValidationError("config was written for experiment '" + read_value<std::string>(file, "experiment") + "'");
  }
  if (file.contains("hardware")) from_json(file.at("hardware"), c.hw);
  if (file.contains("noise")) from_json(file.at("noise"), c.noise);
  if (file.contains("chain")) from_json(file.at("chain"), c.chain);
  if (file.contains("timing")) from_json(file.at("timing"), c.timing);
  if (file.contains("links")) c.links = read_value<std::vector<int>>(file, "links");
  if (file.contains("curves")) {
    c.curves.clear();
    const auto& arr = file.at("curves");
    if (!arr.is_array()) throw ValidationError("curves must be an array");
    for (const auto& item : arr) {
      if (!item.is_object()) throw ValidationError("each curve is an object");
      c.curves.push_back({read_value<int>(item, "swap_version"), read_value<int>(item, "num_links")});
    }
  }
  if (file.contains("distances_km")) {
    const auto& g = file.at("distances_km");
    if (!g.is_object()) throw ValidationError("distances_km must be an object");
    if (g.contains("start")) c.distances.start_km = read_value<double>(g, "start");
    if (g.contains("stop")) c.distances.stop_km = read_value<double>(g, "stop");
    if (g.contains("step")) c.distances.step_km = read_value<double>(g, "step");
  }
  if (file.contains("fidelity_floor")) c.fidelity_floor = read_value<double>(file, "fidelity_floor");
  if (file.contains("time_budget_s")) c.time_budget_s = read_value<double>(file, "time_budget_s");
  if (file.contains("seed")) {
    if (file.at("seed").is_null()) {
      c.seed.reset();
    } else {
      c.seed = read_value<std::uint64_t>(file, "seed");
    }
  }
  if (file.contains("trials")) c.trials = read_value<std::uint64_t>(file, "trials");
}

ResultTable run_table(const ExperimentConfig& c) {
  ResultTable t;
  t.columns = {"num_links", "fidelity", "acceptance_probability", "chsh_value"};
  const int max_requested = *std::max_element(c.links.begin(), c.links.end());
  std::vector<ChainResult> results;
  if (c.chain.storage_time_s) {
    results = simulate_chain_profile(c.chain, c.hw, c.noise, max_requested);
    if (results.back().fidelity >= c.fidelity_floor) {
      results = simulate_chain_profile(c.chain, c.hw, c.noise, kMaxProfileLinks, c.fidelity_floor);
    }
  } else {
    for (int n = 1; n <= kMaxProfileLinks; ++n) {
      ChainConfig cfg = c.chain;
      cfg.num_links = n;
      results.push_back(simulate_chain(cfg, c.hw, c.noise));
      if (n >= max_requested && results.back().fidelity < c.fidelity_floor) break;
    }
  }
  for (int n : c.links) {
    const ChainResult& r = results[static_cast<std::size_t>(n - 1)];
    t.rows.push_back({static_cast<double>(n), r.fidelity, r.acceptance_probability, chsh_value(r.fidelity)});
  }
  int max_links = 0;
  for (std::size_t i = 0; i < results.size() && results[i].fidelity >= c.fidelity_floor; ++i) {
    max_links = static_cast<int>(i) + 1;
  }
  t.summary["fidelity_floor"] = c.fidelity_floor;
  t.summary["max_links_above_floor"] = max_links;
  t.summary["storage_time_s"] = results.front().storage_time_s;
  return t;
}

ResultTable run_fig2(const ExperimentConfig& c) {
  ResultTable t;
  t.columns = {"num_links", "distance_km", "fidelity", "storage_time_s"};
  const auto distances = c.distances.points();
  const std::size_t per_curve = distances.size();
  t.rows.resize(c.links.size() * per_curve);
  parallel_rows(t.rows.size(), [&](std::size_t i) {
    const int n = c.links[i / per_curve];
    const double d = distances[i % per_curve];
    ChainConfig cfg = c.chain;
    cfg.num_links = n;
    cfg.link_length_km = d / n;
    const ChainResult r = simulate_chain(cfg, c.hw, c.noise);
    t.rows[i] = {static_cast<double>(n), d, r.fidelity, r.storage_time_s};
  });
  json crossings = json::object();
  for (std::size_t k = 0; k < c.links.size(); ++k) {
    json first = nullptr;
    for (std::size_t j = 0; j < per_curve; ++j) {
      const auto& row = t.rows[k * per_curve + j];
      if (row[2] < c.fidelity_floor) {
        first = row[1];
        break;
      }
    }
    crossings[std::to_string(c.links[k])] = first;
  }
  t.summary["fidelity_floor"] = c.fidelity_floor;
  t.summary["first_distance_below_floor_km"] = crossings;
  return t;
}

json max_distance_json(const MaxDistanceResult& r) {
  return json{{"feasible", r.feasible},
              {"distance_km", r.distance_km},
              {"num_links", r.num_links},
              {"link_length_km", r.link_length_km},
              {"fidelity", r.fidelity},
              {"acceptance_probability", r.acceptance_probability},
              {"total_time_s", r.total_time_s},
              {"max_links_above_floor", r.max_links_above_floor},
              {"diagnostics", r.diagnostics}};
}

ResultTable run_time_sweep(const ExperimentConfig& c) {
  ResultTable t;
  t.columns = {"swap_version",    "num_links",    "distance_km",    "fidelity",      "acceptance_probability",
               "storage_time_s",  "expected_time_s", "total_time_s", "sampled_time_s", "direct_time_s"};
  const auto distances = c.distances.points();
  const std::size_t per_curve = distances.size();
  const std::uint64_t seed = *c.seed;

  // Below one second the auto policy pins DFS storage at 1 s, so most points
  // share one profile per swap version.
  std::map<int, std::vector<ChainResult>> pinned;
  for (const auto& curve : c.curves) {
    ChainConfig cfg = c.chain;
    cfg.swap_version = curve.swap_version;
    if (!cfg.storage_time_s) cfg.storage_time_s = 1.0;
    auto& prof = pinned[curve.swap_version];
    if (static_cast<int>(prof.size()) < curve.num_links) prof = simulate_chain_profile(cfg, c.hw, c.noise, curve.num_links);
  }

  t.rows.resize(c.curves.size() * per_curve);
  parallel_rows(t.rows.size(), [&](std::size_t i) {
    const Curve& curve = c.curves[i / per_curve];
    const double d = distances[i % per_curve];
    ChainConfig cfg = c.chain;
    cfg.swap_version = curve.swap_version;
    cfg.num_links = curve.num_links;
    cfg.link_length_km = d / curve.num_links;
    const double storage = resolve_storage_time(cfg, c.hw);
    const std::vector<ChainResult>& prof = pinned.at(curve.swap_version);
    ChainResult r;
    const double pinned_storage = prof.front().storage_time_s;
    if (storage == pinned_storage || (dephasing_saturated(storage / c.noise.tau_s) &&
                                      dephasing_saturated(pinned_storage / c.noise.tau_s))) {
      r = prof[static_cast<std::size_t>(curve.num_links - 1)];
    } else {
      cfg.storage_time_s = storage;
      r = simulate_chain(cfg, c.hw, c.noise);
    }
    const TimingEstimate est = total_time(cfg, c.hw, r.acceptance_probability, c.timing);
    const double p_link = link_success_probability(c.hw, cfg.link_length_km, c.timing.half_bsm_factor);
    const double sampled = mean_sampled_chain_time(p_link, cfg.num_links, cfg.link_length_km, c.hw.c_fiber_km_s,
                                                   c.trials, derive_seed(seed, i));
    t.rows[i] = {static_cast<double>(curve.swap_version),
                 static_cast<double>(curve.num_links),
                 d,
                 r.fidelity,
                 r.acceptance_probability,
                 storage,
                 est.expected_time_s,
                 est.total_time_s,
                 sampled * est.repetition_factor + est.classical_comm_bound_s,
                 direct_transmission_time(d, c.hw)};
  });

  std::vector<int> versions;
  for (const auto& curve : c.curves)
    if (std::find(versions.begin(), versions.end(), curve.swap_version) == versions.end())
      versions.push_back(curve.swap_version);
  json reach = json::object();
  for (int v : versions) {
    ChainConfig tmpl = c.chain;
    tmpl.swap_version = v;
    reach["version" + std::to_string(v)] =
        max_distance_json(max_distance(tmpl, c.hw, c.noise, c.time_budget_s, c.fidelity_floor, c.timing));
  }
  t.summary["time_budget_s"] = c.time_budget_s;
  t.summary["fidelity_floor"] = c.fidelity_floor;
  t.summary["max_distance"] = reach;
  return t;
}

ResultTable run_direct(const ExperimentConfig& c) {
  ResultTable t;
  t.columns = {"distance_km", "expected_time_s"};
  for (double d : c.distances.points()) t.rows.push_back({d, direct_transmission_time(d, c.hw)});
  // Distance at which the expected time reaches the budget.
  double lo = 1.0, hi = 1.0;
  while (direct_transmission_time(hi, c.hw) < c.time_budget_s && hi < 1e6) hi *= 2.0;
  if (direct_transmission_time(lo, c.hw) >= c.time_budget_s) {
    t.summary["budget_distance_km"] = nullptr;
  } else {
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (direct_transmission_time(mid, c.hw) < c.time_budget_s ? lo : hi) = mid;
    }
    t.summary["budget_distance_km"] = 0.5 * (lo + hi);
  }
  t.summary["time_budget_s"] = c.time_budget_s;
  return t;
}

ResultTable run_custom(const ExperimentConfig& c) {
  ResultTable t;
  t.columns = {"num_links",    "link_length_km",  "distance_km",  "fidelity", "acceptance_probability",
               "storage_time_s", "expected_time_s", "total_time_s", "chsh_value"};
  const ChainResult r = simulate_chain(c.chain, c.hw, c.noise);
  const TimingEstimate est = total_time(c.chain, c.hw, r.acceptance_probability, c.timing);
  t.rows.push_back({static_cast<double>(c.chain.num_links), c.chain.link_length_km, c.chain.total_distance_km(),
                    r.fidelity, r.acceptance_probability, r.storage_time_s, est.expected_time_s, est.total_time_s,
                    chsh_value(r.fidelity)});
  t.summary["bell_diagonal"] = r.bell_diagonal;
  return t;
}

}  // namespace

std::string_view experiment_name(ExperimentKind kind) {
  for (const auto& e : kExperiments)
    if (e.kind == kind) return e.name;
  return "?";
}

std::optional<ExperimentKind> parse_experiment(std::string_view name) {
  for (const auto& e : kExperiments)
    if (name == e.name) return e.kind;
  return std::nullopt;
}

const std::vector<ExperimentKind>& all_experiments() {
  static const std::vector<ExperimentKind> all = [] {
    std::vector<ExperimentKind> v;
    for (const auto& e : kExperiments) v.push_back(e.kind);
    return v;
  }();
  return all;
}

bool uses_monte_carlo(ExperimentKind kind) { return is_time_sweep(kind); }

std::vector<double> DistanceGrid::points() const {
  std::vector<double> out;
  const auto count = static_cast<std::int64_t>(std::floor((stop_km - start_km) / step_km + 1e-9)) + 1;
  for (std::int64_t k = 0; k < count; ++k) out.push_back(start_km + static_cast<double>(k) * step_km);
  return out;
}

void ExperimentConfig::validate() const {
  hw.validate();
  noise.validate();
  chain.validate();
  const auto kind = experiment;
  if (is_table(kind) || kind == ExperimentKind::Fig2) {
    if (links.empty()) throw ValidationError("links must not be empty");
    for (int n : links)
      if (n < 1 || n > kMaxProfileLinks) throw ValidationError("link counts must lie in [1, 512]");
  }
  if (is_table(kind) && chain.encoding != Encoding::Dfs) throw ValidationError("table experiments use DFS chains");
  if (is_time_sweep(kind)) {
    if (chain.encoding != Encoding::Dfs) throw ValidationError("time sweeps use DFS chains");
    if (curves.empty()) throw ValidationError("curves must not be empty");
    for (const auto& cv : curves) {
      if (cv.swap_version != 1 && cv.swap_version != 2) throw ValidationError("curve swap_version must be 1 or 2");
      if (cv.num_links < 1 || cv.num_links > kMaxProfileLinks) throw ValidationError("curve num_links out of range");
    }
  }
  if (kind == ExperimentKind::Fig2 || is_time_sweep(kind) || kind == ExperimentKind::Direct) {
    if (!(distances.start_km > 0.0 && distances.step_km > 0.0 && distances.stop_km >= distances.start_km)) {
      throw ValidationError("distance grid needs 0 < start <= stop and step > 0");
    }
    if ((distances.stop_km - distances.start_km) / distances.step_km > 1e6) {
      throw ValidationError("distance grid too fine");
    }
  }
  if (!(fidelity_floor > 0.0 && fidelity_floor < 1.0)) throw ValidationError("fidelity_floor must lie in (0, 1)");
  if (!(time_budget_s > 0.0) || !std::isfinite(time_budget_s)) throw ValidationError("time_budget_s must be positive");
  if (trials < 1) throw ValidationError("trials must be positive");
  if (uses_monte_carlo(kind) && !seed) throw ValidationError("this experiment samples waiting times; give --seed");
}

ExperimentConfig resolve_config(ExperimentKind kind, const json& file, const FlagOverrides& flags) {
  ExperimentConfig c = defaults(kind);
  if (file.is_object() && file.contains("preset")) c.preset = read_value<std::string>(file, "preset");
  if (!c.preset.empty()) {
    const Preset& p = find_preset(c.preset);
    c.hw = p.hw;
    c.noise = p.noise;
  }
  if (kind == ExperimentKind::Custom) {
    const bool complete = file.is_object() && complete_hardware(file.value("hardware", json())) &&
                          complete_noise(file.value("noise", json())) && complete_chain(file.value("chain", json()));
    if (!complete) throw ValidationError("custom needs complete hardware, noise and chain sections in --config");
  }
  apply_file(c, file);
  if (flags.seed) c.seed = flags.seed;
  if (flags.trials) c.trials = *flags.trials;
  c.validate();
  return c;
}

ResultTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  switch (config.experiment) {
    case ExperimentKind::Table3:
    case ExperimentKind::Table4:
    case ExperimentKind::Table5:
    case ExperimentKind::Table6:
      return run_table(config);
    case ExperimentKind::Fig2:
      return run_fig2(config);
    case ExperimentKind::Fig4:
    case ExperimentKind::Fig6:
      return run_time_sweep(config);
    case ExperimentKind::Direct:
      return run_direct(config);
    case ExperimentKind::Custom:
      return run_custom(config);
  }
  throw ValidationError("unknown experiment");
}

void write_csv(std::ostream& out, const ResultTable& table) {
  for (std::size_t k = 0; k < table.columns.size(); ++k) out << (k ? "," : "") << table.columns[k];
  out << '\n';
  char buf[64];
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.12g", row[k]);
      out << (k ? "," : "") << buf;
    }
    out << '\n';
  }
}

json sidecar(const ExperimentConfig& c, const ResultTable& table) {
  json j;
  j["experiment"] = experiment_name(c.experiment);
  j["version"] = version_string();
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["trials"] = c.trials;
  if (!c.preset.empty()) j["preset"] = c.preset;
  j["hardware"] = c.hw;
  j["noise"] = c.noise;
  j["chain"] = c.chain;
  j["timing"] = c.timing;
  j["links"] = c.links;
  json curves = json::array();
  for (const auto& cv : c.curves) curves.push_back({{"swap_version", cv.swap_version}, {"num_links", cv.num_links}});
  j["curves"] = curves;
  j["distances_km"] = {{"start", c.distances.start_km}, {"stop", c.distances.stop_km}, {"step", c.distances.step_km}};
  j["fidelity_floor"] = c.fidelity_floor;
  j["time_budget_s"] = c.time_budget_s;
  j["summary"] = table.summary;
  return j;
}

std::string version_string() { return QREP_VERSION; }

}  // namespace qrep
