#include <gtest/gtest.h>

#include <cmath>

#include "helpers.hpp"
#include "qrep/protocol.hpp"
#include "qrep/timing.hpp"

namespace qrep {
namespace {

const NoiseModel kIdeal = NoiseModel::noiseless();

QuantumState perfect_logical_pair() { return encoded_link(1.0, kIdeal); }

QuantumState two_logical_pairs() { return tensor(perfect_logical_pair(), perfect_logical_pair()); }

ChainConfig dfs(int version, int links, double storage = 1.0) {
  ChainConfig c;
  c.encoding = Encoding::Dfs;
  c.swap_version = version;
  c.num_links = links;
  c.link_length_km = 80.0;
  c.storage_time_s = storage;
  return c;
}

ChainConfig bare(int links, double storage) {
  ChainConfig c;
  c.encoding = Encoding::None;
  c.swap_version.reset();
  c.num_links = links;
  c.link_length_km = 1.0;
  c.storage_time_s = storage;
  return c;
}

const SwapBranch& branch_with(const std::vector<SwapBranch>& branches, std::vector<int> outcomes) {
  for (const auto& b : branches)
    if (b.result.outcomes == outcomes) return b;
  throw std::runtime_error("no such branch");
}

TEST(Protocol, ElementaryLink) {
  const auto pops = bell_populations(elementary_link(0.99));
  EXPECT_NEAR(pops[0], 0.99, 1e-15);
  for (int k = 1; k < 4; ++k) EXPECT_NEAR(pops[static_cast<std::size_t>(k)], 0.01 / 3, 1e-15);
  EXPECT_NEAR(fidelity(elementary_link(1.0), bell_vector(BellState::PhiPlus)), 1.0, 1e-15);
  EXPECT_NEAR(bell_populations(elementary_link(0.999))[0], 0.999, 1e-15);
  EXPECT_THROW(elementary_link(0.2), ValidationError);
  EXPECT_THROW(elementary_link(1.01), ValidationError);
}

TEST(Protocol, EncodeIdealSingleQubit) {
  const cplx a = 0.6, b = cplx(0, 0.8);
  const auto in = from_pure(std::vector<cplx>{a, b});
  const auto out = dfs_encode(in, 0, kIdeal);
  const auto expected = from_pure(std::vector<cplx>{0, a, b, 0});
  EXPECT_LT(out.max_abs_diff(expected), 1e-14);
  EXPECT_LT(dfs_decode(out, {0, 1}, kIdeal).max_abs_diff(in), 1e-14);
}

TEST(Protocol, EncodeBothHalvesGivesLogicalBellPair) {
  const auto phys = elementary_link(1.0);
  const auto enc = dfs_encode(dfs_encode(phys, 1, kIdeal), 0, kIdeal);
  EXPECT_LT(enc.max_abs_diff(perfect_logical_pair()), 1e-14);
  // |phi+_L> = (|0101> + |1010>)/sqrt2
  EXPECT_NEAR(enc(0b0101, 0b1010).real(), 0.5, 1e-14);
  const auto dec = dfs_decode(dfs_decode(enc, {2, 3}, kIdeal), {0, 1}, kIdeal);
  EXPECT_LT(dec.max_abs_diff(phys), 1e-14);
}

TEST(Protocol, NoisyEncodingLeaksFromCodespace) {
  NoiseModel noise;
  noise.p_g2 = 0.995;
  const auto out = dfs_encode(QuantumState::basis(1, 0), 0, noise);
  // Leakage happens only when the ancilla flips before the CNOT.
  const double codespace = out(0b01, 0b01).real() + out(0b10, 0b10).real();
  EXPECT_NEAR(1.0 - codespace, (1.0 - 0.995) / 2.0, 1e-14);
  EXPECT_THROW(dfs_encode(QuantumState::maximally_mixed(8), 0, noise), CapacityError);
}

TEST(Protocol, NoisyDecodingLowersFidelity) {
  const NoiseModel noise;
  const auto dec = dfs_decode(dfs_decode(perfect_logical_pair(), {2, 3}, noise), {0, 1}, noise);
  const double f = fidelity(dec, bell_vector(BellState::PhiPlus));
  EXPECT_LT(f, 1.0);
  EXPECT_GT(f, 0.98);
}

TEST(Protocol, LogicalBellPairIsDephasingInvariant) {
  const auto pair = perfect_logical_pair();
  for (double sigma : {0.3, 5.0, 100.0}) {
    EXPECT_LT(collective_dephasing(pair, {{{0, 1}, {2, 3}}, sigma}).max_abs_diff(pair), 1e-12);
  }
  const auto reg = two_logical_pairs();
  for (double sigma : {0.3, 5.0, 100.0}) {
    EXPECT_LT(collective_dephasing(reg, {{{0, 1}, {2, 3, 4, 5}, {6, 7}}, sigma}).max_abs_diff(reg), 1e-12);
  }
}

TEST(Protocol, Version1Examples) {
  const auto branches = logical_bsm_v1(two_logical_pairs(), {}, kIdeal);
  ASSERT_EQ(branches.size(), 16u);
  const auto& first = branch_with(branches, {+1, -1, +1, -1});
  ASSERT_TRUE(first.result.projected_bell);
  EXPECT_EQ(*first.result.projected_bell, BellState::PhiPlus);
  double unlisted = 0.0, total = 0.0;
  for (const auto& b : branches) {
    total += b.result.branch_probability;
    if (!b.result.accepted) unlisted += b.result.branch_probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_LT(unlisted, 1e-15);
}

TEST(Protocol, Version1RejectsUnderNoise) {
  const NoiseModel noise;
  const auto reg = tensor(encoded_link(0.99, noise), encoded_link(0.99, noise));
  double unlisted = 0.0, total = 0.0;
  for (const auto& b : logical_bsm_v1(reg, {}, noise)) {
    total += b.result.branch_probability;
    if (!b.result.accepted) unlisted += b.result.branch_probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
  EXPECT_GT(unlisted, 1e-4);
  EXPECT_LT(unlisted, 0.1);
}

TEST(Protocol, Version2Examples) {
  const auto branches = logical_bsm_v2(two_logical_pairs(), {}, kIdeal);
  EXPECT_EQ(*branch_with(branches, {+1, +1, +1, +1}).result.projected_bell, BellState::PhiPlus);
  EXPECT_EQ(*branch_with(branches, {+1, +1, +1, -1}).result.projected_bell, BellState::PsiPlus);
  const NoiseModel noise;
  double total = 0.0;
  for (const auto& b : logical_bsm_v2(two_logical_pairs(), {}, noise)) {
    EXPECT_TRUE(b.result.accepted);
    total += b.result.branch_probability;
  }
  EXPECT_NEAR(total, 1.0, 1e-10);
}

TEST(Protocol, LogicalBranchesAgreeAfterCorrection) {
  for (auto bsm : {&logical_bsm_v1, &logical_bsm_v2}) {
    for (const auto& b : bsm(two_logical_pairs(), {}, kIdeal)) {
      if (!b.post_state || !b.result.accepted) continue;
      const auto fixed = apply_logical_correction(*b.post_state, {2, 3}, b.result.correction);
      EXPECT_LT(fixed.max_abs_diff(perfect_logical_pair()), 1e-10);
    }
  }
}

TEST(Protocol, BsmRejectsWrongRegisters) {
  EXPECT_THROW(logical_bsm_v1(QuantumState::maximally_mixed(4), {}, kIdeal), ValidationError);
  BsmQubitMap dup;
  dup.q2 = dup.q1;
  EXPECT_THROW(logical_bsm_v2(two_logical_pairs(), dup, kIdeal), ValidationError);
  EXPECT_THROW(physical_bsm(QuantumState::maximally_mixed(3), kIdeal), ValidationError);
}

TEST(Protocol, PhysicalSwapOfPerfectPairs) {
  const auto reg = tensor(elementary_link(1.0), elementary_link(1.0));
  const auto branches = physical_bsm(reg, kIdeal);
  ASSERT_EQ(branches.size(), 4u);
  for (const auto& b : branches) {
    EXPECT_NEAR(b.result.branch_probability, 0.25, 1e-12);
    const auto fixed = apply_physical_correction(*b.post_state, 1, b.result.correction);
    EXPECT_LT(fixed.max_abs_diff(elementary_link(1.0)), 1e-10);
  }
}

QuantumState physical_swap_mix(double f, const NoiseModel& noise) {
  const auto reg = tensor(elementary_link(f), elementary_link(f));
  RawMatrix mix(2);
  for (const auto& b : physical_bsm(reg, noise)) {
    if (!b.post_state) continue;
    const auto fixed = apply_physical_correction(*b.post_state, 1, b.result.correction);
    for (std::size_t k = 0; k < mix.data.size(); ++k) mix.data[k] += b.result.branch_probability * fixed.raw().data[k];
  }
  return QuantumState::unchecked(std::move(mix));
}

TEST(Protocol, PhysicalSwapOfWernerPairs) {
  for (double f : {0.99, 0.9, 0.7}) {
    const auto out = physical_swap_mix(f, kIdeal);
    const auto pops = bell_populations(out);
    EXPECT_NEAR(pops[0], f * f + (1 - f) * (1 - f) / 3, 1e-12);
    const double r = (1 - f) / 3;
    const auto oracle = oracles::swap_map({f, r, r, r}, {f, r, r, r});
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NEAR(pops[k], oracle[k], 1e-12);
    EXPECT_LT(bell_twirl(out).max_abs_diff(out), 1e-12);
  }
}

TEST(Protocol, PhysicalSwapDegradesWithGateNoise) {
  double last = 2.0;
  for (double p : {1.0, 0.995, 0.99}) {
    NoiseModel noise;
    noise.p_g2 = p;
    const double f = fidelity(physical_swap_mix(0.99, noise), bell_vector(BellState::PhiPlus));
    EXPECT_LT(f, last);
    last = f;
  }
}

TEST(Protocol, CorrectionFrames) {
  EXPECT_EQ(correction_for(BellState::PhiPlus), PauliFrame::I);
  EXPECT_EQ(correction_for(BellState::PhiMinus), PauliFrame::Z);
  EXPECT_EQ(correction_for(BellState::PsiPlus), PauliFrame::X);
  EXPECT_EQ(correction_for(BellState::PsiMinus), PauliFrame::XZ);
}

TEST(Protocol, ClassifyAgainstTables) {
  for (const auto& row : kVersion1Table) EXPECT_EQ(classify(kVersion1Table, row.outcomes), row.bell);
  for (const auto& row : kVersion2Table) EXPECT_EQ(classify(kVersion2Table, row.outcomes), row.bell);
  EXPECT_FALSE(classify(kVersion1Table, {+1, +1, +1, -1}).has_value());
  EXPECT_EQ(oracles::check_table(kVersion1Table, 1), "");
  EXPECT_EQ(oracles::check_table(kVersion2Table, 2), "");
}

TEST(Protocol, CorruptedTableIsDetected) {
  auto corrupted = kVersion1Table;
  corrupted[2].bell = BellState::PsiMinus;
  EXPECT_NE(oracles::check_table(corrupted, 1), "");
  auto swapped = kVersion2Table;
  std::swap(swapped[6].bell, swapped[10].bell);
  EXPECT_NE(oracles::check_table(swapped, 2), "");
}

TEST(Protocol, ChainConfigValidation) {
  ChainConfig c = dfs(1, 4);
  c.swap_version = 3;
  EXPECT_THROW(c.validate(), ValidationError);
  c = bare(4, 0.0);
  c.swap_version = 1;
  EXPECT_THROW(c.validate(), ValidationError);
  c = dfs(1, 0);
  EXPECT_THROW(c.validate(), ValidationError);
  c = dfs(1, 2, -1.0);
  EXPECT_THROW(c.validate(), ValidationError);
}

TEST(Protocol, SingleLinkKeepsLinkFidelity) {
  HardwareParams hw;
  hw.link_fidelity = 0.97;
  const auto r = simulate_chain(dfs(1, 1, 0.0), hw, kIdeal);
  EXPECT_NEAR(r.fidelity, 0.97, 1e-12);
  EXPECT_DOUBLE_EQ(r.acceptance_probability, 1.0);
}

TEST(Protocol, IdealChainsArePerfect) {
  HardwareParams hw;
  hw.link_fidelity = 1.0;
  for (int n = 1; n <= 8; ++n) {
    for (const auto& cfg : {dfs(1, n, 0.0), dfs(2, n, 0.0), bare(n, 0.0)}) {
      const auto r = simulate_chain(cfg, hw, kIdeal);
      EXPECT_NEAR(r.fidelity, 1.0, 1e-10) << n;
      EXPECT_NEAR(r.acceptance_probability, 1.0, 1e-10);
    }
  }
}

TEST(Protocol, FourLinkChainsMatchReference) {
  const HardwareParams hw;
  const NoiseModel noise;
  EXPECT_NEAR(simulate_chain(dfs(1, 4), hw, noise).fidelity, 0.901, 0.015);
  EXPECT_NEAR(simulate_chain(dfs(2, 4), hw, noise).fidelity, 0.874, 0.015);
}

TEST(Protocol, CompositionOrderDoesNotMatter) {
  const HardwareParams hw;
  const NoiseModel noise;
  for (const auto& base : {dfs(1, 4), dfs(2, 4), bare(4, 0.002)}) {
    ChainConfig rl = base;
    rl.order = CompositionOrder::RightToLeft;
    const auto a = simulate_chain(base, hw, noise), b = simulate_chain(rl, hw, noise);
    EXPECT_NEAR(a.fidelity, b.fidelity, 1e-9);
    EXPECT_NEAR(a.acceptance_probability, b.acceptance_probability, 1e-9);
  }
}

TEST(Protocol, Version1BeatsVersion2AndFidelityFalls) {
  const HardwareParams hw;
  const NoiseModel noise;
  const auto p1 = simulate_chain_profile(dfs(1, 1), hw, noise, 8);
  const auto p2 = simulate_chain_profile(dfs(2, 1), hw, noise, 8);
  for (std::size_t k = 0; k < p1.size(); ++k) {
    EXPECT_GE(p1[k].fidelity, p2[k].fidelity - 1e-12);
    if (k > 0) {
      EXPECT_LE(p1[k].fidelity, p1[k - 1].fidelity);
      EXPECT_LE(p2[k].fidelity, p2[k - 1].fidelity);
      EXPECT_LE(p1[k].acceptance_probability, p1[k - 1].acceptance_probability);
    }
    EXPECT_DOUBLE_EQ(p2[k].acceptance_probability, 1.0);
  }
}

TEST(Protocol, ProfileMatchesIndividualChains) {
  const HardwareParams hw;
  const NoiseModel noise;
  const auto prof = simulate_chain_profile(dfs(1, 1), hw, noise, 5);
  for (int n = 1; n <= 5; ++n) {
    const auto r = simulate_chain(dfs(1, n), hw, noise);
    EXPECT_NEAR(prof[static_cast<std::size_t>(n - 1)].fidelity, r.fidelity, 1e-13);
    EXPECT_NEAR(prof[static_cast<std::size_t>(n - 1)].acceptance_probability, r.acceptance_probability, 1e-13);
  }
  const auto stopped = simulate_chain_profile(dfs(1, 1), hw, noise, 100, 0.85);
  EXPECT_LT(stopped.back().fidelity, 0.85);
  EXPECT_GE(stopped[stopped.size() - 2].fidelity, 0.85);
  ChainConfig autos = dfs(1, 1);
  autos.storage_time_s.reset();
  EXPECT_THROW(simulate_chain_profile(autos, hw, noise, 3), ValidationError);
}

TEST(Protocol, OutputIsBellDiagonalWithConsistentPopulations) {
  const HardwareParams hw;
  const NoiseModel noise;
  for (const auto& cfg : {dfs(1, 4), dfs(2, 5), bare(3, 0.001)}) {
    const auto r = simulate_chain(cfg, hw, noise);
    EXPECT_LT(r.bell_offdiagonal, 1e-9);
    double sum = 0.0;
    for (double w : r.bell_diagonal) sum += w;
    EXPECT_NEAR(sum, 1.0, 1e-10);
    EXPECT_NEAR(r.fidelity, r.bell_diagonal[0], 1e-12);
    ASSERT_TRUE(r.decoded_state);
    EXPECT_NEAR(fidelity(*r.decoded_state, bell_vector(BellState::PhiPlus)), r.fidelity, 1e-12);
  }
}

TEST(Protocol, StoragePolicy) {
  const HardwareParams hw;
  ChainConfig c = dfs(1, 4);
  EXPECT_DOUBLE_EQ(resolve_storage_time(c, hw), 1.0);
  c.storage_time_s.reset();
  c.link_length_km = 5.0;
  EXPECT_DOUBLE_EQ(resolve_storage_time(c, hw), 1.0);
  c.link_length_km = 150.0;
  EXPECT_GT(resolve_storage_time(c, hw), 1.0);
  ChainConfig b = bare(4, 0.0);
  b.storage_time_s.reset();
  EXPECT_NEAR(resolve_storage_time(b, hw), expected_distribution_time(b, hw), 1e-15);
}

TEST(Protocol, Chsh) {
  EXPECT_NEAR(chsh_value(1.0), 2.0 * std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(chsh_value(0.25), 0.0, 1e-15);
  EXPECT_NEAR(chsh_value(0.7803), 2.0, 0.002);
  EXPECT_NEAR(chsh_value(chsh_threshold_fidelity()), 2.0, 1e-14);
  EXPECT_THROW(chsh_value(0.1), ValidationError);
}

}  // namespace
}  // namespace qrep
