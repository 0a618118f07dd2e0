#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qrep/channels.hpp"
#include "qrep/params.hpp"

namespace qrep {

enum class ExperimentKind { Table3, Table4, Table5, Table6, Fig2, Fig4, Fig6, Direct, Custom };

std::string_view experiment_name(ExperimentKind kind);
std::optional<ExperimentKind> parse_experiment(std::string_view name);
const std::vector<ExperimentKind>& all_experiments();
bool uses_monte_carlo(ExperimentKind kind);

struct Curve {
  int swap_version = 1;
  int num_links = 1;

  friend bool operator==(const Curve&, const Curve&) = default;
};

struct DistanceGrid {
  double start_km = 1.0;
  double stop_km = 1.0;
  double step_km = 1.0;

  std::vector<double> points() const;
  friend bool operator==(const DistanceGrid&, const DistanceGrid&) = default;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::Custom;
  std::string preset;
  HardwareParams hw;
  NoiseModel noise;
  ChainConfig chain;
  TimingOptions timing;
  std::vector<int> links;     // table and fig2 sweeps
  std::vector<Curve> curves;  // fig4 and fig6 sweeps
  DistanceGrid distances;
  double fidelity_floor = 0.78;
  double time_budget_s = 1.0;
  std::optional<std::uint64_t> seed;
  std::uint64_t trials = 10000;

  void validate() const;
};

struct FlagOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
};

// Experiment defaults, then the preset, then `file`, then flags. For
// `custom` the file must give complete hardware, noise and chain sections.
ExperimentConfig resolve_config(ExperimentKind kind, const nlohmann::json& file, const FlagOverrides& flags);

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  nlohmann::json summary = nlohmann::json::object();
};

// Sweep points run on the OpenMP worker pool; rows come back in sweep order.
ResultTable run_experiment(const ExperimentConfig& config);

// Header row, 12 significant digits, LF line endings.
void write_csv(std::ostream& out, const ResultTable& table);

// Resolved parameters, version and seed; accepted back by resolve_config().
nlohmann::json sidecar(const ExperimentConfig& config, const ResultTable& table);

std::string version_string();

}  // namespace qrep
