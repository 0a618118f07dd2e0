#include "qrep/presets.hpp"

#include <algorithm>
#include <initializer_list>
#include <string>

namespace qrep {
namespace {

using nlohmann::json;

constexpr std::initializer_list<const char*> kHardwareKeys = {"p", "eta_d", "L_att_km", "c_fiber_km_s", "pair_rate_hz",
                                                              "link_fidelity"};
constexpr std::initializer_list<const char*> kNoiseKeys = {"p_g1", "p_g2", "p_meas", "measurement_noise", "tau_s",
                                                           "ideal"};
constexpr std::initializer_list<const char*> kChainKeys = {"num_links", "link_length_km", "encoding", "swap_version",
                                                           "storage_time_s", "order"};
constexpr std::initializer_list<const char*> kTimingKeys = {"half_bsm_factor", "include_repetition",
                                                            "include_classical"};

void require_object(const json& j, const char* what) {
  if (!j.is_object()) throw ValidationError(std::string(what) + " must be a JSON object");
}

void reject_unknown(const json& j, std::initializer_list<const char*> keys, const char* what) {
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; });
    if (!known) throw ValidationError(std::string("unknown ") + what + " key '" + key + "'");
  }
}

bool has_all(const json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) return false;
  return std::all_of(keys.begin(), keys.end(), [&](const char* k) { return j.contains(k); });
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("bad value for '") + key + "'");
  }
}

std::vector<Preset> build_presets() {
  std::vector<Preset> out;

  Preset current;
  current.name = "current";
  current.summary = "present-day trapped-ion hardware";
  current.provenance =
      "99% ion-ion link fidelity; gate errors 0.1% (one qubit) and 0.5% (two qubits); 10 ms collective-dephasing "
      "coherence time; ion-photon emission with conversion p = 0.35; detectors 90%; 22 km attenuation length; "
      "10 GHz pair source for direct transmission";
  out.push_back(current);

  Preset improved;
  improved.name = "improved";
  improved.summary = "improved ion-photon interface and gates";
  improved.provenance =
      "99.9% ion-ion link fidelity; gate errors 0.01% (one qubit) and 0.1% (two qubits); emission with conversion "
      "p = 0.75; other values as in 'current'";
  improved.hw.p = 0.75;
  improved.hw.link_fidelity = 0.999;
  improved.noise.p_g1 = 0.9999;
  improved.noise.p_g2 = 0.999;
  improved.noise.p_meas = 0.9999;
  out.push_back(improved);

  Preset ideal;
  ideal.name = "ideal";
  ideal.summary = "perfect links, gates and readout";
  ideal.provenance = "noiseless reference for invariant checks; photon losses as in 'current'";
  ideal.hw.link_fidelity = 1.0;
  ideal.noise = NoiseModel::noiseless();
  out.push_back(ideal);

  return out;
}

}  // namespace

const std::vector<Preset>& presets() {
  static const std::vector<Preset> all = build_presets();
  return all;
}

const Preset& find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ValidationError("unknown preset '" + std::string(name) + "'");
}

void to_json(json& j, const HardwareParams& hw) {
  j = json{{"p", hw.p},
           {"eta_d", hw.eta_d},
           {"L_att_km", hw.L_att_km},
           {"c_fiber_km_s", hw.c_fiber_km_s},
           {"pair_rate_hz", hw.pair_rate_hz},
           {"link_fidelity", hw.link_fidelity}};
}

void from_json(const json& j, HardwareParams& hw) {
  require_object(j, "hardware");
  reject_unknown(j, kHardwareKeys, "hardware");
  read(j, "p", hw.p);
  read(j, "eta_d", hw.eta_d);
  read(j, "L_att_km", hw.L_att_km);
  read(j, "c_fiber_km_s", hw.c_fiber_km_s);
  read(j, "pair_rate_hz", hw.pair_rate_hz);
  read(j, "link_fidelity", hw.link_fidelity);
}

void to_json(json& j, const NoiseModel& noise) {
  j = json{{"p_g1", noise.p_g1},   {"p_g2", noise.p_g2}, {"p_meas", noise.p_meas},
           {"measurement_noise", noise.measurement_noise},
           {"tau_s", noise.tau_s}, {"ideal", noise.ideal}};
}

void from_json(const json& j, NoiseModel& noise) {
  require_object(j, "noise");
  reject_unknown(j, kNoiseKeys, "noise");
  read(j, "p_g1", noise.p_g1);
  read(j, "p_g2", noise.p_g2);
  read(j, "p_meas", noise.p_meas);
  read(j, "measurement_noise", noise.measurement_noise);
  read(j, "tau_s", noise.tau_s);
  read(j, "ideal", noise.ideal);
}

void to_json(json& j, const ChainConfig& chain) {
  j = json{{"num_links", chain.num_links},
           {"link_length_km", chain.link_length_km},
           {"encoding", chain.encoding == Encoding::Dfs ? "dfs" : "none"},
           {"order", chain.order == CompositionOrder::LeftToRight ? "left_to_right" : "right_to_left"}};
  j["swap_version"] = chain.swap_version ? json(*chain.swap_version) : json(nullptr);
  j["storage_time_s"] = chain.storage_time_s ? json(*chain.storage_time_s) : json("auto");
}

void from_json(const json& j, ChainConfig& chain) {
  require_object(j, "chain");
  reject_unknown(j, kChainKeys, "chain");
  read(j, "num_links", chain.num_links);
  read(j, "link_length_km", chain.link_length_km);
  if (j.contains("encoding")) {
    std::string enc;
    read(j, "encoding", enc);
    if (enc == "dfs") {
      chain.encoding = Encoding::Dfs;
      if (!chain.swap_version) chain.swap_version = 1;
    } else if (enc == "none") {
      chain.encoding = Encoding::None;
      chain.swap_version.reset();
    } else {
      throw ValidationError("encoding must be 'none' or 'dfs'");
    }
  }
  if (j.contains("swap_version")) {
    if (j.at("swap_version").is_null()) {
      chain.swap_version.reset();
    } else {
      int v = 0;
      read(j, "swap_version", v);
      chain.swap_version = v;
    }
  }
  if (j.contains("storage_time_s")) {
    const auto& st = j.at("storage_time_s");
    if (st.is_string() && st.get<std::string>() == "auto") {
      chain.storage_time_s.reset();
    } else if (st.is_number()) {
      chain.storage_time_s = st.get<double>();
    } else {
      throw ValidationError("storage_time_s must be a number or \"auto\"");
    }
  }
  if (j.contains("order")) {
    std::string order;
    read(j, "order", order);
    if (order == "left_to_right") {
      chain.order = CompositionOrder::LeftToRight;
    } else if (order == "right_to_left") {
      chain.order = CompositionOrder::RightToLeft;
    } else {
      throw ValidationError("order must be 'left_to_right' or 'right_to_left'");
    }
  }
}

void to_json(json& j, const TimingOptions& opts) {
  j = json{{"half_bsm_factor", opts.half_bsm_factor},
           {"include_repetition", opts.include_repetition},
           {"include_classical", opts.include_classical}};
}

void from_json(const json& j, TimingOptions& opts) {
  require_object(j, "timing");
  reject_unknown(j, kTimingKeys, "timing");
  read(j, "half_bsm_factor", opts.half_bsm_factor);
  read(j, "include_repetition", opts.include_repetition);
  read(j, "include_classical", opts.include_classical);
}

bool complete_hardware(const json& j) { return has_all(j, kHardwareKeys); }
bool complete_noise(const json& j) { return has_all(j, kNoiseKeys); }

bool complete_chain(const json& j) {
  if (!has_all(j, {"num_links", "link_length_km", "encoding", "storage_time_s"})) return false;
  return j.at("encoding") != "dfs" || j.contains("swap_version");
}

}  // namespace qrep
