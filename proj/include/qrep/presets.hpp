#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qrep/channels.hpp"
#include "qrep/params.hpp"

namespace qrep {

struct Preset {
  std::string name;
  std::string summary;
  std::string provenance;
  HardwareParams hw;
  NoiseModel noise;
};

const std::vector<Preset>& presets();
// ValidationError for unknown names.
const Preset& find_preset(std::string_view name);

// JSON forms. from_json applies only the keys present on top of the target's
// current values and rejects unknown keys, so partial override objects work.
void to_json(nlohmann::json& j, const HardwareParams& hw);
void from_json(const nlohmann::json& j, HardwareParams& hw);
void to_json(nlohmann::json& j, const NoiseModel& noise);
void from_json(const nlohmann::json& j, NoiseModel& noise);
void to_json(nlohmann::json& j, const ChainConfig& chain);
void from_json(const nlohmann::json& j, ChainConfig& chain);
void to_json(nlohmann::json& j, const TimingOptions& opts);
void from_json(const nlohmann::json& j, TimingOptions& opts);

// True when `j` sets every field of the corresponding struct.
bool complete_hardware(const nlohmann::json& j);
bool complete_noise(const nlohmann::json& j);
bool complete_chain(const nlohmann::json& j);

}  // namespace qrep
