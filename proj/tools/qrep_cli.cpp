// qrep: batch runner for repeater-chain experiments.
//
//   qrep run <experiment> [--config file.json] [--seed N] [--trials N] [--out file.csv]
//   qrep verify [--suite name]
//   qrep presets
//
// Exit status: 0 ok, 1 verification failure, 2 usage or config error,
// 3 infeasible experiment.

#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qrep/experiments.hpp"
#include "qrep/presets.hpp"
#include "qrep/verify.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kVerifyFailed = 1;
constexpr int kUsage = 2;
constexpr int kInfeasible = 3;

using nlohmann::json;

bool apply_thread_cap() {
  const char* env = std::getenv("SIM_THREADS");
  if (!env || !*env) return true;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    std::cerr << "error: SIM_THREADS must be a positive integer\n";
    return false;
  }
  omp_set_num_threads(static_cast<int>(n));
  return true;
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  if (p.extension() == ".csv") return p.replace_extension(".json");
  return p.string() + ".json";
}

int cmd_run(const std::string& name, const std::string& config_path, std::optional<std::uint64_t> seed,
            std::optional<std::uint64_t> trials, std::string out) {
  const auto kind = qrep::parse_experiment(name);
  if (!kind) {
    std::cerr << "error: unknown experiment '" << name << "'\n";
    return kUsage;
  }
  json file;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open " << config_path << "\n";
      return kUsage;
    }
    try {
      file = json::parse(in);
    } catch (const json::parse_error& e) {
      std::cerr << "error: " << config_path << ": " << e.what() << "\n";
      return kUsage;
    }
  }

  qrep::ExperimentConfig config;
  try {
    config = qrep::resolve_config(*kind, file, {seed, trials});
  } catch (const qrep::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  qrep::ResultTable table;
  try {
    table = qrep::run_experiment(config);
  } catch (const qrep::InfeasibleError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const qrep::DegenerateStateError& e) {
    std::cerr << "infeasible: " << e.what() << "\n";
    return kInfeasible;
  } catch (const qrep::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  if (out.empty()) out = std::string(qrep::experiment_name(*kind)) + ".csv";
  if (out == "-") {
    qrep::write_csv(std::cout, table);
    return kOk;
  }
  std::ofstream csv(out, std::ios::binary);
  if (!csv) {
    std::cerr << "error: cannot write " << out << "\n";
    return kUsage;
  }
  qrep::write_csv(csv, table);
  const auto meta_path = sidecar_path(out);
  std::ofstream meta(meta_path, std::ios::binary);
  meta << qrep::sidecar(config, table).dump(2) << '\n';
  std::cout << "wrote " << out << " (" << table.rows.size() << " rows) and " << meta_path.string() << "\n";
  if (!table.summary.empty()) std::cout << table.summary.dump(2) << "\n";
  return kOk;
}

int cmd_verify(const std::string& suite) {
  std::vector<std::string> names = qrep::suite_names();
  if (!suite.empty()) {
    if (std::find(names.begin(), names.end(), suite) == names.end()) {
      std::cerr << "error: unknown suite '" << suite << "'\n";
      return kUsage;
    }
    names = {suite};
  }
  bool all = true;
  for (const auto& name : names) {
    const auto report = qrep::run_suite(name);
    std::cout << "[" << report.name << "] " << (report.passed ? "PASS" : "FAIL") << "\n";
    for (const auto& line : report.lines) std::cout << "  " << line << "\n";
    all = all && report.passed;
  }
  return all ? kOk : kVerifyFailed;
}

int cmd_presets() {
  for (const auto& p : qrep::presets()) {
    std::cout << p.name << ": " << p.summary << "\n  " << p.provenance << "\n";
    std::cout << "  hardware " << json(p.hw).dump() << "\n  noise    " << json(p.noise).dump() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trapped-ion repeater chain simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qrep::version_string());

  auto* run = app.add_subcommand("run", "Run a named experiment and write CSV plus a JSON sidecar");
  std::string experiment, config_path, out;
  std::optional<std::uint64_t> seed, trials;
  std::string names;
  for (auto k : qrep::all_experiments()) names += (names.empty() ? "" : ", ") + std::string(qrep::experiment_name(k));
  run->add_option("experiment", experiment, "One of: " + names)->required();
  run->add_option("--config", config_path, "JSON config (flags override file values)");
  run->add_option("--seed", seed, "RNG seed (required for sampled experiments)");
  run->add_option("--trials", trials, "Monte Carlo trials per sweep point");
  run->add_option("--out", out, "CSV path, '-' for stdout (default <experiment>.csv)");

  auto* verify = app.add_subcommand("verify", "Run the oracle suites");
  std::string suite;
  verify->add_option("--suite", suite, "Run one suite only");

  app.add_subcommand("presets", "List named parameter sets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  if (!apply_thread_cap()) return kUsage;

  if (*run) return cmd_run(experiment, config_path, seed, trials, out);
  if (*verify) return cmd_verify(suite);
  return cmd_presets();
}
