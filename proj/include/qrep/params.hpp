#pragma once

#include <optional>

namespace qrep {

/// Photon source, fiber and detector parameters.
struct HardwareParams {
  double p = 0.35;               // ion emits a photon into fiber, conversion included
  double eta_d = 0.9;            // detector efficiency
  double L_att_km = 22.0;        // fiber attenuation length
  double c_fiber_km_s = 2.0e5;   // speed of light in fiber
  double pair_rate_hz = 1.0e10;  // photon-pair source for the direct-transmission baseline
  double link_fidelity = 0.99;   // Werner fidelity of a heralded ion-ion link

  void validate() const;
  friend bool operator==(const HardwareParams&, const HardwareParams&) = default;
};

enum class Encoding { None, Dfs };

enum class CompositionOrder { LeftToRight, RightToLeft };

/// Repeater chain layout. `storage_time_s` empty means the `auto` policy:
/// the storage time is derived from the expected distribution time at the
/// configured distance (at least 1 s for DFS chains).
struct ChainConfig {
  int num_links = 1;
  double link_length_km = 1.0;
  Encoding encoding = Encoding::Dfs;
  std::optional<int> swap_version = 1;  // 1 or 2, DFS only
  std::optional<double> storage_time_s;
  CompositionOrder order = CompositionOrder::LeftToRight;

  double total_distance_km() const { return num_links * link_length_km; }
  void validate() const;
  friend bool operator==(const ChainConfig&, const ChainConfig&) = default;
};

/// Switches for the distribution-time model.
struct TimingOptions {
  // P_link carries the 1/2 linear-optics Bell-measurement factor.
  bool half_bsm_factor = true;
  // Version-1 chains repeat on average 1/P times.
  bool include_repetition = true;
  // Add the N L0 / c classical-communication bound.
  bool include_classical = true;

  friend bool operator==(const TimingOptions&, const TimingOptions&) = default;
};

}  // namespace qrep
