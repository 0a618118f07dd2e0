#include <gtest/gtest.h>
#include <omp.h>

#include <cmath>

#include "qrep/protocol.hpp"
#include "qrep/timing.hpp"

namespace qrep {
namespace {

constexpr double kC = 2.0e5;

HardwareParams lossless() {
  HardwareParams hw;
  hw.p = 1.0;
  hw.eta_d = 1.0;
  return hw;
}

ChainConfig chain(int links, double link_km, int version = 1) {
  ChainConfig c;
  c.num_links = links;
  c.link_length_km = link_km;
  c.swap_version = version;
  c.storage_time_s = 1.0;
  return c;
}

TEST(Timing, LinkSuccessProbability) {
  EXPECT_NEAR(link_success_probability(lossless(), 1e-9), 0.5, 1e-9);
  EXPECT_NEAR(link_success_probability(lossless(), 1e-9, false), 1.0, 1e-9);
  const HardwareParams hw;
  const double p80 = link_success_probability(hw, 80.0);
  EXPECT_NEAR(p80, 0.5 * 0.35 * 0.35 * 0.81 * std::exp(-80.0 / 22.0), 1e-15);
  EXPECT_NEAR(p80, 1.31e-3, 0.01e-3);
  HardwareParams longer = hw;
  longer.L_att_km = 44.0;
  EXPECT_NEAR(link_success_probability(longer, 80.0) / p80, std::exp(80.0 / 44.0), 1e-12);
  EXPECT_THROW(link_success_probability(hw, 0.0), ValidationError);
  EXPECT_THROW(link_success_probability(hw, -3.0), ValidationError);
}

TEST(Timing, ExpectedChainTimeLimits) {
  EXPECT_NEAR(expected_chain_time(1.0, 7, 10.0, kC), 7 * 10.0 / kC, 1e-18);
  EXPECT_NEAR(expected_chain_time(0.01, 1, 10.0, kC), 10.0 / kC / 0.01, 1e-15);
  EXPECT_THROW(expected_chain_time(0.0, 3, 10.0, kC), ValidationError);
  EXPECT_THROW(expected_chain_time(0.5, 0, 10.0, kC), ValidationError);
}

TEST(Timing, ExpectedChainTimeMonotoneAndBounded) {
  for (double p : {0.9, 0.1, 1e-4}) {
    double prev = 0.0;
    for (int n = 1; n <= 20; ++n) {
      const double t = expected_chain_time(p, n, 10.0, kC);
      EXPECT_GT(t, prev);
      EXPECT_GE(t, 10.0 / kC / p * (1 - 1e-12));
      EXPECT_LE(t, n * 10.0 / kC / p * (1 + 1e-12));
      EXPECT_LT(expected_chain_time(p * 1.1 > 1 ? 1.0 : p * 1.1, n, 10.0, kC), t);
      prev = t;
    }
  }
}

TEST(Timing, ApproxChainTime) {
  EXPECT_NEAR(approx_chain_time(lossless(), 0, 1e-6), 1e-6 / kC, 1e-15);
  const HardwareParams hw;
  for (int n = 0; n < 5; ++n)
    EXPECT_NEAR(approx_chain_time(hw, n + 1, 50.0) / approx_chain_time(hw, n, 50.0), 1.5, 1e-12);
  const double exact = expected_chain_time(link_success_probability(hw, 50.0), 8, 50.0, kC);
  const double ratio = approx_chain_time(hw, 3, 50.0) / exact;
  EXPECT_GE(ratio, 0.5);
  EXPECT_LE(ratio, 3.0);
}

TEST(Timing, SamplerWithCertainSuccess) {
  for (auto model : {WaitingModel::Sequential, WaitingModel::Parallel}) {
    const double expected = model == WaitingModel::Sequential ? 5 * 10.0 / kC : 10.0 / kC;
    EXPECT_NEAR(sample_chain_time(1.0, 5, 10.0, kC, 3, model), expected, 1e-18);
  }
  EXPECT_NEAR(mean_sampled_chain_time(1.0, 5, 10.0, kC, 1000, 1), expected_chain_time(1.0, 5, 10.0, kC), 1e-15);
}

TEST(Timing, SamplerIsDeterministic) {
  EXPECT_EQ(sample_chain_time(0.01, 10, 10.0, kC, 42), sample_chain_time(0.01, 10, 10.0, kC, 42));
  EXPECT_NE(sample_chain_time(0.01, 10, 10.0, kC, 42), sample_chain_time(0.01, 10, 10.0, kC, 43));
  const int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  const double serial = mean_sampled_chain_time(0.05, 6, 10.0, kC, 50000, 99);
  omp_set_num_threads(3);
  const double threaded = mean_sampled_chain_time(0.05, 6, 10.0, kC, 50000, 99);
  omp_set_num_threads(saved);
  EXPECT_EQ(serial, threaded);
}

TEST(Timing, SamplerMeanMatchesClosedForm) {
  std::uint64_t seed = 1000;
  for (double p : {0.5, 0.01}) {
    for (int n : {2, 10}) {
      const double exact = expected_chain_time(p, n, 10.0, kC);
      EXPECT_NEAR(mean_sampled_chain_time(p, n, 10.0, kC, 100000, seed++) / exact, 1.0, 0.01);
    }
  }
}

TEST(Timing, ParallelModelFallsShortForLargeP) {
  // Discrete maxima tie often when P is large.
  const double exact = expected_chain_time(0.5, 10, 10.0, kC);
  EXPECT_LT(mean_sampled_chain_time(0.5, 10, 10.0, kC, 100000, 5, WaitingModel::Parallel), 0.8 * exact);
}

TEST(Timing, TotalTime) {
  const HardwareParams hw;
  const ChainConfig one = chain(1, 40.0);
  const double p = link_success_probability(hw, 40.0);
  const auto est = total_time(one, hw, 1.0);
  EXPECT_DOUBLE_EQ(est.total_time_s, expected_chain_time(p, 1, 40.0, kC) + 40.0 / kC);
  EXPECT_DOUBLE_EQ(est.repetition_factor, 1.0);

  const ChainConfig four = chain(4, 40.0);
  const auto full = total_time(four, hw, 1.0), half = total_time(four, hw, 0.5);
  EXPECT_DOUBLE_EQ(half.total_time_s - half.classical_comm_bound_s, 2 * (full.total_time_s - full.classical_comm_bound_s));
  EXPECT_DOUBLE_EQ(half.repetition_factor, 2.0);
  EXPECT_DOUBLE_EQ(total_time(chain(4, 40.0, 2), hw, 0.5).repetition_factor, 1.0);

  TimingOptions bare;
  bare.include_classical = false;
  bare.include_repetition = false;
  EXPECT_DOUBLE_EQ(total_time(four, hw, 0.5, bare).total_time_s, full.expected_time_s);

  EXPECT_THROW(total_time(four, hw, 0.0), InfeasibleError);
  EXPECT_THROW(total_time(four, hw, 1.5), ValidationError);
  HardwareParams dark = hw;
  dark.p = 0.0;
  EXPECT_THROW(total_time(four, dark, 1.0), InfeasibleError);
}

TEST(Timing, TenLinksAt800KmTakeAboutOneSecond) {
  const HardwareParams hw;
  const ChainConfig cfg = chain(10, 80.0);
  const auto r = simulate_chain(cfg, hw, NoiseModel{});
  const double t = total_time(cfg, hw, r.acceptance_probability).total_time_s;
  EXPECT_GT(t, 0.75);
  EXPECT_LT(t, 1.25);
}

TEST(Timing, DirectTransmission) {
  HardwareParams ideal_det;
  ideal_det.eta_d = 1.0;
  EXPECT_NEAR(direct_transmission_time(1e-9, ideal_det), 1e-10, 1e-14);
  const HardwareParams hw;
  const double t500 = direct_transmission_time(500.0, hw);
  EXPECT_GT(t500, 0.9);
  EXPECT_LT(t500, 1.1);
  const double w1 = direct_transmission_time(300.0, hw) - 300.0 / kC;
  const double w2 = direct_transmission_time(322.0, hw) - 322.0 / kC;
  EXPECT_NEAR(w2 / w1, std::exp(1.0), 1e-9);
  EXPECT_LT(direct_transmission_time(480.0, hw), 1.0);
  EXPECT_GT(direct_transmission_time(530.0, hw), 1.0);
  EXPECT_THROW(direct_transmission_time(0.0, hw), ValidationError);
}

TEST(Timing, MaxDistanceZeroBudgetIsInfeasible) {
  const auto r = max_distance(chain(1, 1.0), HardwareParams{}, NoiseModel{}, 0.0, 0.78);
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(Timing, MaxDistanceWithTightFloorIsInfeasible) {
  const auto r = max_distance(chain(1, 1.0), HardwareParams{}, NoiseModel{}, 1.0, 0.995);
  EXPECT_FALSE(r.feasible);
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(Timing, MaxDistanceRespectsBudget) {
  const HardwareParams hw;
  const NoiseModel noise;
  const auto r = max_distance(chain(1, 1.0, 2), hw, noise, 0.1, 0.78);
  ASSERT_TRUE(r.feasible);
  EXPECT_LE(r.total_time_s, 0.1);
  EXPECT_GE(r.fidelity, 0.78);
  EXPECT_EQ(r.distance_km, std::round(r.distance_km));
  ChainConfig past = chain(r.num_links, (r.distance_km + 1) / r.num_links, 2);
  past.storage_time_s = 1.0;
  EXPECT_GT(total_time(past, hw, 1.0).total_time_s, 0.1);
}

}  // namespace
}  // namespace qrep
