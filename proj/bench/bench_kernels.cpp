// Bit-indexed OpenMP kernels against the dense serial reference, plus one
// full composition step of each chain type.
//
//   ./qrep_bench --benchmark_filter=Apply2q
//   OMP_NUM_THREADS=4 ./qrep_bench

#include <benchmark/benchmark.h>

#include <random>

#include "qrep/kernels.hpp"
#include "qrep/oracles.hpp"
#include "qrep/protocol.hpp"

namespace {

using namespace qrep;

RawMatrix sample_state(int n) {
  std::mt19937_64 rng(static_cast<std::uint64_t>(n));
  return oracles::random_density(n, rng);
}

Mat4 cnot() {
  Mat4 u{};
  u[0] = u[5] = u[11] = u[14] = 1.0;
  return u;
}

Mat2 hadamard() {
  const double h = 1.0 / std::sqrt(2.0);
  return {h, h, h, -h};
}

void BM_Apply1q_Parallel(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  RawMatrix rho = sample_state(n);
  for (auto _ : st) {
    kernels::apply_1q(rho, n / 2, hadamard());
    benchmark::DoNotOptimize(rho.data.data());
  }
}

void BM_Apply1q_Reference(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  RawMatrix rho = sample_state(n);
  for (auto _ : st) {
    kernels::reference::apply_1q(rho, n / 2, hadamard());
    benchmark::DoNotOptimize(rho.data.data());
  }
}

void BM_Apply2q_Parallel(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  RawMatrix rho = sample_state(n);
  for (auto _ : st) {
    kernels::apply_2q(rho, n - 1, 0, cnot());
    benchmark::DoNotOptimize(rho.data.data());
  }
}

void BM_Apply2q_Reference(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  RawMatrix rho = sample_state(n);
  for (auto _ : st) {
    kernels::reference::apply_2q(rho, n - 1, 0, cnot());
    benchmark::DoNotOptimize(rho.data.data());
  }
}

void BM_Depolarize_Parallel(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  RawMatrix rho = sample_state(n);
  for (auto _ : st) {
    kernels::depolarize(rho, 1, 0.995);
    benchmark::DoNotOptimize(rho.data.data());
  }
}

void BM_Depolarize_Reference(benchmark::State& st) {
  const int n = static_cast<int>(st.range(0));
  RawMatrix rho = sample_state(n);
  for (auto _ : st) {
    kernels::reference::depolarize(rho, 1, 0.995);
    benchmark::DoNotOptimize(rho.data.data());
  }
}

const std::vector<std::vector<int>> kGroups{{0, 1}, {2, 3, 4, 5}, {6, 7}};

void BM_Dephase_Parallel(benchmark::State& st) {
  RawMatrix rho = sample_state(8);
  for (auto _ : st) {
    kernels::dephase(rho, kGroups, 0.01);
    benchmark::DoNotOptimize(rho.data.data());
  }
}

void BM_Dephase_Reference(benchmark::State& st) {
  RawMatrix rho = sample_state(8);
  for (auto _ : st) {
    kernels::reference::dephase(rho, kGroups, 0.01);
    benchmark::DoNotOptimize(rho.data.data());
  }
}

void BM_PartialTrace_Parallel(benchmark::State& st) {
  const RawMatrix rho = sample_state(8);
  const std::vector<int> keep{0, 1, 6, 7};
  for (auto _ : st) benchmark::DoNotOptimize(kernels::partial_trace(rho, keep));
}

void BM_PartialTrace_Reference(benchmark::State& st) {
  const RawMatrix rho = sample_state(8);
  const std::vector<int> keep{0, 1, 6, 7};
  for (auto _ : st) benchmark::DoNotOptimize(kernels::reference::partial_trace(rho, keep));
}

void BM_ChainLinks(benchmark::State& st) {
  ChainConfig cfg;
  cfg.num_links = static_cast<int>(st.range(1));
  cfg.storage_time_s = 1.0;
  switch (st.range(0)) {
    case 0:
      cfg.encoding = Encoding::None;
      cfg.swap_version.reset();
      break;
    default:
      cfg.swap_version = static_cast<int>(st.range(0));
  }
  const HardwareParams hw;
  const NoiseModel noise;
  for (auto _ : st) benchmark::DoNotOptimize(simulate_chain(cfg, hw, noise).fidelity);
  st.SetLabel(st.range(0) == 0 ? "unencoded" : "version " + std::to_string(st.range(0)));
}

}  // namespace

BENCHMARK(BM_Apply1q_Parallel)->DenseRange(4, 8, 2);
BENCHMARK(BM_Apply1q_Reference)->DenseRange(4, 8, 2);
BENCHMARK(BM_Apply2q_Parallel)->DenseRange(4, 8, 2);
BENCHMARK(BM_Apply2q_Reference)->DenseRange(4, 8, 2);
BENCHMARK(BM_Depolarize_Parallel)->DenseRange(4, 8, 2);
BENCHMARK(BM_Depolarize_Reference)->DenseRange(4, 8, 2);
BENCHMARK(BM_Dephase_Parallel);
BENCHMARK(BM_Dephase_Reference);
BENCHMARK(BM_PartialTrace_Parallel);
BENCHMARK(BM_PartialTrace_Reference);
BENCHMARK(BM_ChainLinks)->Args({0, 10})->Args({1, 10})->Args({2, 10})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
