#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "qrep/channels.hpp"
#include "qrep/params.hpp"

namespace qrep {

struct TimingEstimate {
  double expected_time_s = 0.0;         // waiting time until every link is up
  double classical_comm_bound_s = 0.0;  // N L0 / c, or 0 when disabled
  double repetition_factor = 1.0;       // 1/P for version-1 chains
  double total_time_s = 0.0;            // expected * repetition + classical
};

/// Heralded-link success probability (1/2) p^2 eta_t^2 eta_d^2.
///
/// Each photon travels half the link to the midpoint station, so the
/// per-photon transmission is exp(-L0 / (2 L_att)) and eta_t^2 = exp(-L0 / L_att).
/// With `half_bsm_factor` off the 1/2 linear-optics factor is dropped.
double link_success_probability(const HardwareParams& hw, double link_length_km, bool half_bsm_factor = true);

/// Expected time until all N links are up:
/// (L0/c) * sum_{n=1..N} 1 / (1 - (1 - P)^n).
double expected_chain_time(double p_link, int num_links, double link_length_km, double c_km_s);

/// (3/2)^n (L0/c) / (p^2 eta_t^2 eta_d^2) for a chain of 2^n links.
double approx_chain_time(const HardwareParams& hw, int n_doublings, double link_length_km);

/// How a Monte Carlo sample of the waiting time is drawn.
enum class WaitingModel {
  // Sum of N stages; stage k waits for the first success among the k links
  // still pending. Its mean is exactly expected_chain_time().
  Sequential,
  // All links attempt in parallel and the chain is ready when the slowest
  // link succeeds. Attempt counts are discrete, so simultaneous successes
  // make its mean fall below expected_chain_time() when P is not small.
  Parallel,
};

double sample_chain_time(double p_link, int num_links, double link_length_km, double c_km_s, std::uint64_t seed,
                         WaitingModel model = WaitingModel::Sequential);

/// Mean of `trials` samples. Trials are split into fixed chunks seeded from
/// (seed, chunk index), so the result does not depend on the thread count.
double mean_sampled_chain_time(double p_link, int num_links, double link_length_km, double c_km_s,
                               std::uint64_t trials, std::uint64_t seed,
                               WaitingModel model = WaitingModel::Sequential);

TimingEstimate total_time(const ChainConfig& config, const HardwareParams& hw, double acceptance_probability,
                          const TimingOptions& options = {});

/// Direct transmission of photon pairs over the full distance:
/// 1 / (rate exp(-D/L_att) eta_d^2) + D/c.
double direct_transmission_time(double total_distance_km, const HardwareParams& hw);

/// Expected distribution time used by the `auto` storage policy:
/// waiting time plus the classical bound, no repetition factor.
double expected_distribution_time(const ChainConfig& config, const HardwareParams& hw,
                                  const TimingOptions& options = {});

struct MaxDistanceResult {
  bool feasible = false;
  double distance_km = 0.0;
  int num_links = 0;
  double link_length_km = 0.0;
  double fidelity = 0.0;
  double acceptance_probability = 0.0;
  double total_time_s = 0.0;
  int max_links_above_floor = 0;
  std::string diagnostics;
};

/// Largest total distance (1 km grid) reachable within `time_budget_s` with
/// an end-to-end fidelity of at least `fidelity_floor`, over link counts up
/// to the fidelity-limited maximum. `tmpl` supplies encoding, swap version
/// and storage policy; its num_links and link_length_km are ignored.
MaxDistanceResult max_distance(const ChainConfig& tmpl, const HardwareParams& hw, const NoiseModel& noise,
                               double time_budget_s, double fidelity_floor, const TimingOptions& options = {});

}  // namespace qrep
