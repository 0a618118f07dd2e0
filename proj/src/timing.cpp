#include "qrep/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <vector>

#include "qrep/protocol.hpp"

namespace qrep {
namespace {

constexpr std::uint64_t kTrialsPerChunk = 4096;
constexpr int kMaxSearchLinks = 256;

void check_length(double km) {
  if (!(km > 0.0) || !std::isfinite(km)) throw ValidationError("length must be positive and finite");
}

void check_chain_inputs(double p_link, int num_links, double link_length_km, double c_km_s) {
  if (!(p_link > 0.0 && p_link <= 1.0)) throw ValidationError("P_link must lie in (0, 1]");
  if (num_links < 1) throw ValidationError("num_links must be at least 1");
  check_length(link_length_km);
  if (!(c_km_s > 0.0)) throw ValidationError("speed of light must be positive");
}

// 1 - (1 - P)^n without cancellation for small P.
double any_success(double p_link, int n) {
  if (p_link >= 1.0) return 1.0;
  return -std::expm1(n * std::log1p(-p_link));
}

// log(1 - q) per draw type: index k - 1 holds the stage with k links pending
// (sequential) or a single link (parallel, index 0).
std::vector<double> log_fail_table(double p_link, int num_links, WaitingModel model) {
  const int size = model == WaitingModel::Sequential ? num_links : 1;
  std::vector<double> out(static_cast<std::size_t>(size));
  for (int k = 1; k <= size; ++k) {
    const double q = any_success(p_link, k);
    out[static_cast<std::size_t>(k - 1)] = q >= 1.0 ? -std::numeric_limits<double>::infinity() : std::log1p(-q);
  }
  return out;
}

// Attempts until the first success, by inversion: 1 + floor(log U / log(1 - q)).
double geometric_attempts(double log_fail, std::mt19937_64& rng) {
  if (std::isinf(log_fail)) return 1.0;
  const double u = 1.0 - std::uniform_real_distribution<double>()(rng);  // (0, 1]
  return 1.0 + std::floor(std::log(u) / log_fail);
}

double sample_attempts(const std::vector<double>& log_fail, int num_links, WaitingModel model,
                       std::mt19937_64& rng) {
  if (model == WaitingModel::Sequential) {
    double total = 0.0;
    for (int pending = num_links; pending >= 1; --pending)
      total += geometric_attempts(log_fail[static_cast<std::size_t>(pending - 1)], rng);
    return total;
  }
  double slowest = 0.0;
  for (int k = 0; k < num_links; ++k) slowest = std::max(slowest, geometric_attempts(log_fail[0], rng));
  return slowest;
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::uint64_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

bool repeats(const ChainConfig& config) {
  return config.encoding == Encoding::Dfs && config.swap_version && *config.swap_version == 1;
}

struct Probe {
  bool ok = false;
  double fidelity = 0.0;
  double acceptance = 1.0;
  double time_s = 0.0;
};

}  // namespace

void HardwareParams::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0, 1]");
  if (!(eta_d >= 0.0 && eta_d <= 1.0)) throw ValidationError("eta_d must lie in [0, 1]");
  if (!(L_att_km > 0.0)) throw ValidationError("attenuation length must be positive");
  if (!(c_fiber_km_s > 0.0)) throw ValidationError("speed of light must be positive");
  if (!(pair_rate_hz > 0.0)) throw ValidationError("pair rate must be positive");
  if (!(link_fidelity >= 0.25 && link_fidelity <= 1.0)) throw ValidationError("link fidelity must lie in [1/4, 1]");
}

double link_success_probability(const HardwareParams& hw, double link_length_km, bool half_bsm_factor) {
  hw.validate();
  check_length(link_length_km);
  // eta_t^2 = exp(-L0 / L_att): two photons, each over half the link.
  const double eta_t2 = std::exp(-link_length_km / hw.L_att_km);
  return (half_bsm_factor ? 0.5 : 1.0) * hw.p * hw.p * eta_t2 * hw.eta_d * hw.eta_d;
}

double expected_chain_time(double p_link, int num_links, double link_length_km, double c_km_s) {
  check_chain_inputs(p_link, num_links, link_length_km, c_km_s);
  double sum = 0.0;
  for (int n = 1; n <= num_links; ++n) sum += 1.0 / any_success(p_link, n);
  return link_length_km / c_km_s * sum;
}

double approx_chain_time(const HardwareParams& hw, int n_doublings, double link_length_km) {
  hw.validate();
  check_length(link_length_km);
  if (n_doublings < 0) throw ValidationError("n must be non-negative");
  const double per_link = link_success_probability(hw, link_length_km, false);
  if (!(per_link > 0.0)) throw ValidationError("link success probability is zero");
  return std::pow(1.5, n_doublings) * (link_length_km / hw.c_fiber_km_s) / per_link;
}

double sample_chain_time(double p_link, int num_links, double link_length_km, double c_km_s, std::uint64_t seed,
                         WaitingModel model) {
  check_chain_inputs(p_link, num_links, link_length_km, c_km_s);
  auto rng = chunk_rng(seed, 0);
  const auto table = log_fail_table(p_link, num_links, model);
  return sample_attempts(table, num_links, model, rng) * link_length_km / c_km_s;
}

double mean_sampled_chain_time(double p_link, int num_links, double link_length_km, double c_km_s,
                               std::uint64_t trials, std::uint64_t seed, WaitingModel model) {
  check_chain_inputs(p_link, num_links, link_length_km, c_km_s);
  if (trials == 0) throw ValidationError("trials must be positive");
  const std::uint64_t chunks = (trials + kTrialsPerChunk - 1) / kTrialsPerChunk;
  std::vector<double> sums(chunks, 0.0);
  const auto table = log_fail_table(p_link, num_links, model);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < static_cast<std::int64_t>(chunks); ++c) {
    const auto chunk = static_cast<std::uint64_t>(c);
    auto rng = chunk_rng(seed, chunk);
    const std::uint64_t begin = chunk * kTrialsPerChunk;
    const std::uint64_t end = std::min(trials, begin + kTrialsPerChunk);
    double s = 0.0;
    for (std::uint64_t t = begin; t < end; ++t) s += sample_attempts(table, num_links, model, rng);
    sums[chunk] = s;
  }
  double total = 0.0;
  for (double s : sums) total += s;
  return total / static_cast<double>(trials) * link_length_km / c_km_s;
}

TimingEstimate total_time(const ChainConfig& config, const HardwareParams& hw, double acceptance_probability,
                          const TimingOptions& options) {
  config.validate();
  if (acceptance_probability == 0.0) throw InfeasibleError("acceptance probability is zero");
  if (!(acceptance_probability > 0.0 && acceptance_probability <= 1.0)) {
    throw ValidationError("acceptance probability must lie in (0, 1]");
  }
  const double p_link = link_success_probability(hw, config.link_length_km, options.half_bsm_factor);
  if (!(p_link > 0.0)) throw InfeasibleError("link success probability is zero");
  TimingEstimate est;
  est.expected_time_s = expected_chain_time(p_link, config.num_links, config.link_length_km, hw.c_fiber_km_s);
  if (options.include_classical) est.classical_comm_bound_s = config.total_distance_km() / hw.c_fiber_km_s;
  if (options.include_repetition && repeats(config)) est.repetition_factor = 1.0 / acceptance_probability;
  est.total_time_s = est.expected_time_s * est.repetition_factor + est.classical_comm_bound_s;
  return est;
}

double direct_transmission_time(double total_distance_km, const HardwareParams& hw) {
  hw.validate();
  check_length(total_distance_km);
  // Pair transmission over the whole distance, two detectors.
  const double success = hw.pair_rate_hz * std::exp(-total_distance_km / hw.L_att_km) * hw.eta_d * hw.eta_d;
  if (!(success > 0.0)) return std::numeric_limits<double>::infinity();
  return 1.0 / success + total_distance_km / hw.c_fiber_km_s;
}

double expected_distribution_time(const ChainConfig& config, const HardwareParams& hw, const TimingOptions& options) {
  config.validate();
  const double p_link = link_success_probability(hw, config.link_length_km, options.half_bsm_factor);
  if (!(p_link > 0.0)) return std::numeric_limits<double>::infinity();
  double t = expected_chain_time(p_link, config.num_links, config.link_length_km, hw.c_fiber_km_s);
  if (options.include_classical) t += config.total_distance_km() / hw.c_fiber_km_s;
  return t;
}

MaxDistanceResult max_distance(const ChainConfig& tmpl, const HardwareParams& hw, const NoiseModel& noise,
                               double time_budget_s, double fidelity_floor, const TimingOptions& options) {
  hw.validate();
  noise.validate();
  if (!(fidelity_floor > 0.0 && fidelity_floor < 1.0)) throw ValidationError("fidelity floor must lie in (0, 1)");
  if (!(time_budget_s >= 0.0) || !std::isfinite(time_budget_s)) throw ValidationError("budget must be finite");
  MaxDistanceResult best;
  if (time_budget_s == 0.0) {
    best.diagnostics = "zero time budget";
    return best;
  }

  ChainConfig base = tmpl;
  base.num_links = 1;
  base.link_length_km = 1.0;
  base.validate();

  // DFS fidelities do not depend on distance once the storage time is fixed;
  // the auto policy is evaluated at the budget.
  const bool distance_dependent = base.encoding == Encoding::None && !base.storage_time_s;
  std::vector<ChainResult> profile;
  if (!distance_dependent) {
    ChainConfig fixed = base;
    if (!fixed.storage_time_s) fixed.storage_time_s = std::max(1.0, time_budget_s);
    // Fidelity is non-increasing in N, so the pass can stop below the floor.
    profile = simulate_chain_profile(fixed, hw, noise, kMaxSearchLinks, fidelity_floor);
  }

  auto evaluate = [&](int n, double distance_km) {
    Probe pr;
    ChainConfig cfg = base;
    cfg.num_links = n;
    cfg.link_length_km = distance_km / n;
    if (distance_dependent) {
      const ChainResult r = simulate_chain(cfg, hw, noise);
      pr.fidelity = r.fidelity;
      pr.acceptance = r.acceptance_probability;
    } else {
      pr.fidelity = profile[static_cast<std::size_t>(n - 1)].fidelity;
      pr.acceptance = profile[static_cast<std::size_t>(n - 1)].acceptance_probability;
    }
    pr.time_s = total_time(cfg, hw, pr.acceptance, options).total_time_s;
    pr.ok = pr.fidelity >= fidelity_floor && pr.time_s <= time_budget_s;
    return pr;
  };

  int max_links = 0;
  if (distance_dependent) {
    for (int n = 1; n <= kMaxSearchLinks; ++n) {
      ChainConfig cfg = base;
      cfg.num_links = n;
      if (simulate_chain(cfg, hw, noise).fidelity < fidelity_floor) break;
      max_links = n;
    }
  } else {
    for (std::size_t i = 0; i < profile.size(); ++i) {
      if (profile[i].fidelity < fidelity_floor) break;
      max_links = static_cast<int>(i) + 1;
    }
  }
  best.max_links_above_floor = max_links;
  if (max_links == 0) {
    best.diagnostics = "no link count reaches the fidelity floor";
    return best;
  }

  for (int n = 1; n <= max_links; ++n) {
    // Both constraints get worse with distance, so the feasible set is a
    // prefix of the 1 km grid.
    if (!evaluate(n, 1.0).ok) continue;
    std::int64_t lo = 1;
    std::int64_t hi = 2;
    while (evaluate(n, static_cast<double>(hi)).ok) {
      lo = hi;
      hi *= 2;
      if (hi > 1'000'000) break;
    }
    while (hi - lo > 1) {
      const std::int64_t mid = lo + (hi - lo) / 2;
      if (evaluate(n, static_cast<double>(mid)).ok) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double d = static_cast<double>(lo);
    if (d > best.distance_km) {
      const Probe pr = evaluate(n, d);
      best.feasible = true;
      best.distance_km = d;
      best.num_links = n;
      best.link_length_km = d / n;
      best.fidelity = pr.fidelity;
      best.acceptance_probability = pr.acceptance;
      best.total_time_s = pr.time_s;
    }
  }

  std::ostringstream diag;
  if (best.feasible) {
    diag << "fidelity floor allows up to " << max_links << " links; best " << best.num_links << " links at "
         << best.distance_km << " km";
  } else {
    diag << "no distance of at least 1 km fits the budget with up to " << max_links << " links";
  }
  best.diagnostics = diag.str();
  return best;
}

}  // namespace qrep
