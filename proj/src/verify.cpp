#include "qrep/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>

#include "qrep/oracles.hpp"
#include "qrep/timing.hpp"

namespace qrep {
namespace {

std::string fmt(const char* pattern, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

void record(SuiteReport& r, bool ok, const std::string& what) {
  r.passed = r.passed && ok;
  r.lines.push_back((ok ? "ok   " : "FAIL ") + what);
}

double max_diff(const RawMatrix& a, const RawMatrix& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) m = std::max(m, std::abs(a.data[k] - b.data[k]));
  return m;
}

SuiteReport dephasing_suite() {
  SuiteReport r{"dephasing", true, {}};
  std::mt19937_64 rng(20140101);
  std::uniform_int_distribution<int> size(1, 4);
  const double sigmas[] = {0.1, 1.0, 10.0};
  for (int s = 0; s < 50; ++s) {
    const int n = size(rng);
    const RawMatrix rho = oracles::random_density(n, rng);
    // Random split of the register into contiguous trap groups.
    std::vector<std::vector<int>> groups(1);
    for (int q = 0; q < n; ++q) {
      if (q > 0 && std::bernoulli_distribution(0.5)(rng)) groups.emplace_back();
      groups.back().push_back(q);
    }
    double worst = 0.0;
    for (double sigma : sigmas) {
      RawMatrix analytic = rho;
      kernels::dephase(analytic, groups, sigma);
      worst = std::max(worst, max_diff(analytic, oracles::dephase_quadrature(rho, groups, sigma)));
    }
    record(r, worst <= 1e-8, fmt("state %2d (%d qubits, %zu groups): max deviation %.3e", s, n, groups.size(), worst));
  }
  return r;
}

SuiteReport timing_suite() {
  SuiteReport r{"timing", true, {}};
  const double length = 10.0, c = 2.0e5;
  std::uint64_t seed = 7;
  for (double p : {0.5, 0.01}) {
    for (int n : {2, 10}) {
      const double exact = expected_chain_time(p, n, length, c);
      const double mc = mean_sampled_chain_time(p, n, length, c, 100000, seed++);
      const double rel = std::abs(mc - exact) / exact;
      record(r, rel < 0.01, fmt("P=%.2f N=%2d: closed form %.6e s, sampled %.6e s, rel %.2e", p, n, exact, mc, rel));
    }
  }
  return r;
}

SuiteReport tables_suite() {
  SuiteReport r{"tables", true, {}};
  const std::string v1 = oracles::check_table(kVersion1Table, 1);
  record(r, v1.empty(), "version 1 table" + (v1.empty() ? std::string(" matches enumeration") : ": " + v1));
  const std::string v2 = oracles::check_table(kVersion2Table, 2);
  record(r, v2.empty(), "version 2 table" + (v2.empty() ? std::string(" matches enumeration") : ": " + v2));
  return r;
}

SuiteReport clifford_suite() {
  SuiteReport r{"clifford", true, {}};
  const std::pair<LogicalGate, const char*> gates[] = {
      {LogicalGate::S, "S_L"}, {LogicalGate::H, "H_L"}, {LogicalGate::CZ, "CZ_L"}};
  for (const auto& [gate, name] : gates) {
    const auto chk = oracles::check_logical_gate(gate);
    record(r, chk.leakage <= 1e-10 && chk.target_error <= 1e-10,
           fmt("%-4s leakage %.2e, deviation from target %.2e", name, chk.leakage, chk.target_error));
  }
  return r;
}

SuiteReport purification_suite() {
  SuiteReport r{"purification", true, {}};
  const NoiseModel ideal = NoiseModel::noiseless();
  for (double f : {0.6, 0.75, 0.85, 0.95}) {
    const double rest = (1.0 - f) / 3.0;
    const std::array<double, 4> w{f, rest, rest, rest};
    const auto [p_map, w_map] = oracles::recurrence_map(w);
    const QuantumState link = elementary_link(f);
    const auto phys = purification_round(link, link, ideal, PurificationLevel::Physical);
    const auto pops = bell_populations(phys.purified);
    double dev = std::abs(phys.success_probability - p_map);
    for (std::size_t k = 0; k < 4; ++k) dev = std::max(dev, std::abs(pops[k] - w_map[k]));
    record(r, dev <= 1e-10, fmt("F=%.2f physical round vs closed-form map: deviation %.2e", f, dev));

    const QuantumState logical_link = encoded_link(f, ideal);
    const auto logi = purification_round(logical_link, logical_link, ideal, PurificationLevel::Logical);
    const QuantumState decoded = dfs_decode(dfs_decode(logi.purified, {2, 3}, ideal), {0, 1}, ideal);
    const double ldev = std::max(std::abs(logi.success_probability - phys.success_probability),
                                 decoded.max_abs_diff(phys.purified));
    record(r, ldev <= 1e-10, fmt("F=%.2f logical round vs physical round: deviation %.2e", f, ldev));
    record(r, pops[0] > f, fmt("F=%.2f fidelity after one round %.6f", f, pops[0]));
  }
  return r;
}

struct Suite {
  std::string name;
  std::function<SuiteReport()> run;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all{{"dephasing", dephasing_suite},
                                      {"timing", timing_suite},
                                      {"tables", tables_suite},
                                      {"clifford", clifford_suite},
                                      {"purification", purification_suite}};
  return all;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : suites()) v.push_back(s.name);
    return v;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name) {
  for (const auto& s : suites())
    if (s.name == name) return s.run();
  throw ValidationError("unknown suite '" + name + "'");
}

}  // namespace qrep
