#include "qrep/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qrep/timing.hpp"

namespace qrep {
namespace {

struct RawBranch {
  std::array<int, 4> outcomes;  // +-1 in label order
  RawMatrix block;              // unnormalized state of the surviving qubits
  double probability;
};

std::array<int, 4> outcomes_of(unsigned pattern, int count) {
  std::array<int, 4> out{1, 1, 1, 1};
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = (pattern >> (count - 1 - i)) & 1u ? -1 : 1;
  return out;
}

std::array<int, 4> bits_of(unsigned pattern, int count) {
  std::array<int, 4> out{0, 0, 0, 0};
  for (int i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = static_cast<int>((pattern >> (count - 1 - i)) & 1u);
  return out;
}

// Gates and readout preparation of a logical Bell measurement, then all 16
// readout branches.
std::vector<RawBranch> logical_branches(RawMatrix rho, const BsmQubitMap& map, int version, const NoiseModel& noise) {
  if (version == 1) {
    inplace::noisy_gate(rho, GateSpec{Gate::CNOT, {map.q3, map.q2}}, noise);
    inplace::noisy_gate(rho, GateSpec{Gate::CNOT, {map.q1, map.q4}}, noise);
    inplace::prepare_x_readout(rho, map.q1, noise);
    inplace::prepare_x_readout(rho, map.q3, noise);
    inplace::prepare_z_readout(rho, map.q2, noise);
    inplace::prepare_z_readout(rho, map.q4, noise);
  } else {
    inplace::noisy_gate(rho, GateSpec{Gate::CNOT, {map.q3, map.q4}}, noise);
    inplace::prepare_x_readout(rho, map.q1, noise);
    inplace::prepare_x_readout(rho, map.q2, noise);
    inplace::prepare_x_readout(rho, map.q3, noise);
    inplace::prepare_z_readout(rho, map.q4, noise);
  }
  const auto measured = map.as_array();
  std::vector<RawBranch> branches;
  branches.reserve(16);
  for (unsigned pattern = 0; pattern < 16; ++pattern) {
    const auto bits = bits_of(pattern, 4);
    RawMatrix block = kernels::fixed_block(rho, measured, bits);
    const double prob = std::max(0.0, kernels::trace(block).real());
    branches.push_back({outcomes_of(pattern, 4), std::move(block), prob});
  }
  return branches;
}

// Physical swap on [L, R, M, S]: CNOT R -> M, H on R, Z readout of R and M.
std::vector<RawBranch> physical_branches(RawMatrix rho, const NoiseModel& noise) {
  inplace::noisy_gate(rho, GateSpec{Gate::CNOT, {1, 2}}, noise);
  inplace::prepare_x_readout(rho, 1, noise);
  inplace::prepare_z_readout(rho, 2, noise);
  const std::array<int, 2> measured{1, 2};
  std::vector<RawBranch> branches;
  for (unsigned pattern = 0; pattern < 4; ++pattern) {
    const auto bits = bits_of(pattern, 2);
    RawMatrix block = kernels::fixed_block(rho, measured, std::span<const int>(bits.data(), 2));
    const double prob = std::max(0.0, kernels::trace(block).real());
    branches.push_back({outcomes_of(pattern, 2), std::move(block), prob});
  }
  return branches;
}

BellState physical_projection(const std::array<int, 4>& outcomes) {
  const bool phase = outcomes[0] == -1;
  const bool parity = outcomes[1] == -1;
  if (!parity) return phase ? BellState::PhiMinus : BellState::PhiPlus;
  return phase ? BellState::PsiMinus : BellState::PsiPlus;
}

void correct_logical(RawMatrix& rho, int data, int ancilla, PauliFrame frame) {
  if (frame == PauliFrame::X || frame == PauliFrame::XZ) {
    inplace::apply_pauli(rho, data, Gate::X);
    inplace::apply_pauli(rho, ancilla, Gate::X);
  }
  if (frame == PauliFrame::Z || frame == PauliFrame::XZ) inplace::apply_pauli(rho, data, Gate::Z);
}

void correct_physical(RawMatrix& rho, int qubit, PauliFrame frame) {
  if (frame == PauliFrame::X || frame == PauliFrame::XZ) inplace::apply_pauli(rho, qubit, Gate::X);
  if (frame == PauliFrame::Z || frame == PauliFrame::XZ) inplace::apply_pauli(rho, qubit, Gate::Z);
}

std::span<const OutcomeRow> table_for(int version) {
  if (version == 1) return kVersion1Table;
  return kVersion2Table;
}

void validate_map(const QuantumState& state, const BsmQubitMap& map) {
  if (state.num_qubits() != 8) throw ValidationError("logical Bell measurement expects an 8-qubit register");
  const auto q = map.as_array();
  for (std::size_t i = 0; i < 4; ++i) {
    validate_qubit(state, q[i]);
    for (std::size_t j = 0; j < i; ++j)
      if (q[i] == q[j]) throw ValidationError("Bell-measurement qubits must be distinct");
  }
}

std::vector<SwapBranch> logical_bsm(const QuantumState& state, const BsmQubitMap& map, int version,
                                    const NoiseModel& noise) {
  validate_map(state, map);
  const auto table = table_for(version);
  std::vector<SwapBranch> out;
  for (auto& raw : logical_branches(state.raw(), map, version, noise)) {
    SwapBranch br;
    br.result.outcomes.assign(raw.outcomes.begin(), raw.outcomes.end());
    br.result.projected_bell = classify(table, raw.outcomes);
    br.result.accepted = br.result.projected_bell.has_value();
    if (br.result.accepted) br.result.correction = correction_for(*br.result.projected_bell);
    br.result.branch_probability = raw.probability;
    if (raw.probability > kBranchEpsilon) {
      for (cplx& v : raw.block.data) v /= raw.probability;
      br.post_state = QuantumState::unchecked(std::move(raw.block));
    }
    out.push_back(std::move(br));
  }
  return out;
}

constexpr int kLogicalSwapVersionNone = 0;

struct SwapOutcome {
  RawMatrix state;
  double accepted_probability;
};

// One composition step on the tensored register: collective dephasing per
// trap, the configured Bell measurement, corrections, and the accepted mix.
SwapOutcome swap_step(RawMatrix joint, Encoding encoding, int version, double sigma, const NoiseModel& noise) {
  std::vector<RawBranch> branches;
  if (encoding == Encoding::Dfs) {
    const std::vector<std::vector<int>> traps{{0, 1}, {2, 3, 4, 5}, {6, 7}};
    kernels::dephase(joint, traps, sigma);
    branches = logical_branches(std::move(joint), BsmQubitMap{}, version, noise);
  } else {
    const std::vector<std::vector<int>> traps{{0}, {1, 2}, {3}};
    kernels::dephase(joint, traps, sigma);
    branches = physical_branches(std::move(joint), noise);
  }
  const auto table = table_for(version);
  RawMatrix mixed;
  double accepted = 0.0;
  for (auto& br : branches) {
    BellState bell;
    if (encoding == Encoding::Dfs) {
      const auto cls = classify(table, br.outcomes);
      if (!cls) continue;
      bell = *cls;
      correct_logical(br.block, 2, 3, correction_for(bell));
    } else {
      bell = physical_projection(br.outcomes);
      correct_physical(br.block, 1, correction_for(bell));
    }
    accepted += br.probability;
    if (mixed.data.empty()) {
      mixed = std::move(br.block);
    } else {
      for (std::size_t k = 0; k < mixed.data.size(); ++k) mixed.data[k] += br.block.data[k];
    }
  }
  if (!(accepted > 0.0)) throw InfeasibleError("no accepted swap outcome");
  for (cplx& v : mixed.data) v /= accepted;
  return {std::move(mixed), std::min(accepted, 1.0)};
}

RawMatrix initial_link(const ChainConfig& config, const HardwareParams& hw, const NoiseModel& noise) {
  if (config.encoding == Encoding::Dfs) return encoded_link(hw.link_fidelity, noise).raw();
  return elementary_link(hw.link_fidelity).raw();
}

ChainResult finalize(const RawMatrix& pair, const ChainConfig& config, const NoiseModel& noise, double acceptance) {
  QuantumState decoded = QuantumState::unchecked(pair);
  if (config.encoding == Encoding::Dfs) {
    RawMatrix m = pair;
    inplace::noisy_gate(m, GateSpec{Gate::CNOT, {0, 1}}, noise);
    inplace::noisy_gate(m, GateSpec{Gate::CNOT, {2, 3}}, noise);
    const std::array<int, 2> keep{0, 2};
    decoded = QuantumState::unchecked(kernels::partial_trace(m, keep));
  }
  ChainResult result;
  result.acceptance_probability = acceptance;
  double worst = 0.0;
  for (int i = 0; i < 4; ++i) {
    const auto bi = bell_vector(static_cast<BellState>(i));
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const auto bj = bell_vector(static_cast<BellState>(j));
      cplx elem = 0.0;
      for (std::size_t r = 0; r < 4; ++r)
        for (std::size_t c = 0; c < 4; ++c) elem += std::conj(bi[r]) * decoded(r, c) * bj[c];
      worst = std::max(worst, std::abs(elem));
    }
  }
  result.bell_offdiagonal = worst;
  const QuantumState werner = werner_enforce(decoded);
  result.bell_diagonal = bell_populations(werner);
  result.fidelity = result.bell_diagonal[0];
  result.decoded_state = std::move(decoded);
  return result;
}

int version_of(const ChainConfig& config) {
  return config.encoding == Encoding::Dfs ? *config.swap_version : kLogicalSwapVersionNone;
}

}  // namespace

void ChainConfig::validate() const {
  if (num_links < 1) throw ValidationError("num_links must be at least 1");
  if (!(link_length_km > 0.0) || !std::isfinite(link_length_km)) throw ValidationError("link length must be positive");
  if (encoding == Encoding::Dfs) {
    if (!swap_version || (*swap_version != 1 && *swap_version != 2)) {
      throw ValidationError("DFS chains need swap version 1 or 2");
    }
  } else if (swap_version) {
    throw ValidationError("swap version applies to DFS chains only");
  }
  if (storage_time_s && !(*storage_time_s >= 0.0 && std::isfinite(*storage_time_s))) {
    throw ValidationError("storage time must be finite and non-negative");
  }
}

PauliFrame correction_for(BellState projected) {
  switch (projected) {
    case BellState::PhiPlus: return PauliFrame::I;
    case BellState::PhiMinus: return PauliFrame::Z;
    case BellState::PsiPlus: return PauliFrame::X;
    case BellState::PsiMinus: return PauliFrame::XZ;
  }
  return PauliFrame::I;
}

std::optional<BellState> classify(std::span<const OutcomeRow> table, const std::array<int, 4>& outcomes) {
  for (const auto& row : table)
    if (row.outcomes == outcomes) return row.bell;
  return std::nullopt;
}

QuantumState elementary_link(double fidelity) {
  if (!(fidelity >= 0.25 && fidelity <= 1.0)) throw ValidationError("link fidelity must lie in [1/4, 1]");
  const double rest = (1.0 - fidelity) / 3.0;
  return bell_diagonal_state({fidelity, rest, rest, rest});
}

QuantumState dfs_encode(const QuantumState& state, int data_qubit, const NoiseModel& noise) {
  validate_qubit(state, data_qubit);
  const int n = state.num_qubits();
  if (n + 1 > kMaxQubits) throw CapacityError("no room for an encoding ancilla");
  const RawMatrix one = QuantumState::basis(1, 1).raw();
  RawMatrix joint = kernels::kron(state.raw(), one);
  std::vector<int> order;
  for (int q = 0; q <= data_qubit; ++q) order.push_back(q);
  order.push_back(n);
  for (int q = data_qubit + 1; q < n; ++q) order.push_back(q);
  joint = kernels::permute_qubits(joint, order);
  inplace::noisy_gate(joint, GateSpec{Gate::CNOT, {data_qubit, data_qubit + 1}}, noise);
  return QuantumState::unchecked(std::move(joint));
}

QuantumState dfs_decode(const QuantumState& state, std::array<int, 2> logical_pair, const NoiseModel& noise) {
  const GateSpec cnot{Gate::CNOT, {logical_pair[0], logical_pair[1]}};
  validate_gate(state.num_qubits(), cnot);
  if (state.num_qubits() < 2) throw ValidationError("decoding needs a logical pair");
  RawMatrix m = state.raw();
  inplace::noisy_gate(m, cnot, noise);
  std::vector<int> keep;
  for (int q = 0; q < state.num_qubits(); ++q)
    if (q != logical_pair[1]) keep.push_back(q);
  return QuantumState::unchecked(kernels::partial_trace(m, keep));
}

QuantumState encoded_link(double fidelity, const NoiseModel& noise) {
  QuantumState s = dfs_encode(elementary_link(fidelity), 0, noise);  // [a, a', b]
  return dfs_encode(s, 2, noise);                                      // [a, a', b, b']
}

std::vector<SwapBranch> logical_bsm_v1(const QuantumState& state, const BsmQubitMap& map, const NoiseModel& noise) {
  return logical_bsm(state, map, 1, noise);
}

std::vector<SwapBranch> logical_bsm_v2(const QuantumState& state, const BsmQubitMap& map, const NoiseModel& noise) {
  return logical_bsm(state, map, 2, noise);
}

std::vector<SwapBranch> physical_bsm(const QuantumState& state, const NoiseModel& noise) {
  if (state.num_qubits() != 4) throw ValidationError("physical Bell measurement expects a 4-qubit register");
  std::vector<SwapBranch> out;
  for (auto& raw : physical_branches(state.raw(), noise)) {
    SwapBranch br;
    br.result.outcomes = {raw.outcomes[0], raw.outcomes[1]};
    const BellState bell = physical_projection(raw.outcomes);
    br.result.projected_bell = bell;
    br.result.correction = correction_for(bell);
    br.result.branch_probability = raw.probability;
    if (raw.probability > kBranchEpsilon) {
      for (cplx& v : raw.block.data) v /= raw.probability;
      br.post_state = QuantumState::unchecked(std::move(raw.block));
    }
    out.push_back(std::move(br));
  }
  return out;
}

QuantumState apply_logical_correction(const QuantumState& state, std::array<int, 2> logical_pair, PauliFrame frame) {
  validate_qubit(state, logical_pair[0]);
  validate_qubit(state, logical_pair[1]);
  RawMatrix m = state.raw();
  correct_logical(m, logical_pair[0], logical_pair[1], frame);
  return QuantumState::unchecked(std::move(m));
}

QuantumState apply_physical_correction(const QuantumState& state, int qubit, PauliFrame frame) {
  validate_qubit(state, qubit);
  RawMatrix m = state.raw();
  correct_physical(m, qubit, frame);
  return QuantumState::unchecked(std::move(m));
}

double resolve_storage_time(const ChainConfig& config, const HardwareParams& hw) {
  if (config.storage_time_s) return *config.storage_time_s;
  const double t = expected_distribution_time(config, hw);
  return config.encoding == Encoding::Dfs ? std::max(1.0, t) : t;
}

ChainResult simulate_chain(const ChainConfig& config, const HardwareParams& hw, const NoiseModel& noise) {
  config.validate();
  hw.validate();
  noise.validate();
  const double storage = resolve_storage_time(config, hw);
  const double sigma = storage / noise.tau_s;
  const int version = version_of(config);
  const RawMatrix link = initial_link(config, hw, noise);

  RawMatrix current = link;
  double acceptance = 1.0;
  if (config.num_links == 1) {
    const std::vector<std::vector<int>> traps = config.encoding == Encoding::Dfs
                                                    ? std::vector<std::vector<int>>{{0, 1}, {2, 3}}
                                                    : std::vector<std::vector<int>>{{0}, {1}};
    kernels::dephase(current, traps, sigma);
  }
  for (int k = 1; k < config.num_links; ++k) {
    RawMatrix joint = config.order == CompositionOrder::LeftToRight ? kernels::kron(current, link)
                                                                      : kernels::kron(link, current);
    auto step = swap_step(std::move(joint), config.encoding, version, sigma, noise);
    current = std::move(step.state);
    acceptance *= step.accepted_probability;
  }
  ChainResult result = finalize(current, config, noise, acceptance);
  result.storage_time_s = storage;
  result.sigma = sigma;
  return result;
}

std::vector<ChainResult> simulate_chain_profile(const ChainConfig& config, const HardwareParams& hw,
                                                const NoiseModel& noise, int max_links,
                                                std::optional<double> stop_below) {
  if (!config.storage_time_s) throw ValidationError("chain profiles need a fixed storage time");
  if (config.order != CompositionOrder::LeftToRight) throw ValidationError("chain profiles compose left to right");
  ChainConfig single = config;
  single.num_links = 1;
  std::vector<ChainResult> results;
  if (max_links < 1) return results;
  results.push_back(simulate_chain(single, hw, noise));
  auto done = [&] { return stop_below && results.back().fidelity < *stop_below; };
  if (done()) return results;

  const double sigma = *config.storage_time_s / noise.tau_s;
  const int version = version_of(config);
  const RawMatrix link = initial_link(config, hw, noise);
  RawMatrix current = link;
  double acceptance = 1.0;
  for (int n = 2; n <= max_links; ++n) {
    auto step = swap_step(kernels::kron(current, link), config.encoding, version, sigma, noise);
    current = std::move(step.state);
    acceptance *= step.accepted_probability;
    ChainResult r = finalize(current, config, noise, acceptance);
    r.storage_time_s = *config.storage_time_s;
    r.sigma = sigma;
    r.decoded_state.reset();
    results.push_back(std::move(r));
    if (done()) break;
  }
  return results;
}

double chsh_value(double fidelity) {
  if (!(fidelity >= 0.25 && fidelity <= 1.0)) throw ValidationError("fidelity must lie in [1/4, 1]");
  return 2.0 * std::sqrt(2.0) * (4.0 * fidelity - 1.0) / 3.0;
}

double chsh_threshold_fidelity() { return (1.0 + 3.0 / std::sqrt(2.0)) / 4.0; }

}  // namespace qrep
