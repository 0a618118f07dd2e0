#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "qrep/channels.hpp"
#include "qrep/params.hpp"

namespace qrep {

// Pauli correction applied to one end of a swapped pair.
enum class PauliFrame { I, X, Z, XZ };

PauliFrame correction_for(BellState projected);

// One row of a logical Bell-measurement outcome table. Outcomes are listed
// for the four measured qubits in label order 1..4.
struct OutcomeRow {
  std::array<int, 4> outcomes;
  BellState bell;
};

// Version 1: CNOT 3->2, CNOT 1->4; qubits 1, 3 read in X, qubits 2, 4 in Z.
// Patterns not listed are discarded.
inline constexpr std::array<OutcomeRow, 8> kVersion1Table{{
    {{+1, -1, +1, -1}, BellState::PhiPlus},
    {{-1, -1, -1, -1}, BellState::PhiPlus},
    {{+1, -1, -1, -1}, BellState::PhiMinus},
    {{-1, -1, +1, -1}, BellState::PhiMinus},
    {{+1, +1, +1, +1}, BellState::PsiPlus},
    {{-1, +1, -1, +1}, BellState::PsiPlus},
    {{+1, +1, -1, +1}, BellState::PsiMinus},
    {{-1, +1, +1, +1}, BellState::PsiMinus},
}};

// Version 2: CNOT 3->4; qubits 1, 2, 3 read in X, qubit 4 in Z. Every
// pattern is accepted.
inline constexpr std::array<OutcomeRow, 16> kVersion2Table{{
    {{+1, +1, +1, +1}, BellState::PhiPlus},
    {{+1, -1, -1, +1}, BellState::PhiPlus},
    {{-1, +1, -1, +1}, BellState::PhiPlus},
    {{-1, -1, +1, +1}, BellState::PhiPlus},
    {{+1, +1, -1, +1}, BellState::PhiMinus},
    {{+1, -1, +1, +1}, BellState::PhiMinus},
    {{-1, +1, +1, +1}, BellState::PhiMinus},
    {{-1, -1, -1, +1}, BellState::PhiMinus},
    {{+1, +1, +1, -1}, BellState::PsiPlus},
    {{+1, -1, -1, -1}, BellState::PsiPlus},
    {{-1, +1, -1, -1}, BellState::PsiPlus},
    {{-1, -1, +1, -1}, BellState::PsiPlus},
    {{+1, +1, -1, -1}, BellState::PsiMinus},
    {{+1, -1, +1, -1}, BellState::PsiMinus},
    {{-1, +1, +1, -1}, BellState::PsiMinus},
    {{-1, -1, -1, -1}, BellState::PsiMinus},
}};

std::optional<BellState> classify(std::span<const OutcomeRow> table, const std::array<int, 4>& outcomes);

// Register indices of the four co-located qubits, by label. Labels 1 and 3
// form one logical qubit (data, ancilla), labels 2 and 4 the other.
struct BsmQubitMap {
  int q1 = 2;
  int q2 = 4;
  int q3 = 3;
  int q4 = 5;

  std::array<int, 4> as_array() const { return {q1, q2, q3, q4}; }
};

struct SwapResult {
  std::vector<int> outcomes;  // +-1 per measured qubit, in label order
  std::optional<BellState> projected_bell;
  PauliFrame correction = PauliFrame::I;
  bool accepted = true;
  double branch_probability = 0.0;
};

struct SwapBranch {
  SwapResult result;
  // Normalized state of the surviving qubits before the correction; empty
  // for branches of vanishing probability.
  std::optional<QuantumState> post_state;
};

struct ChainResult {
  double fidelity = 0.0;
  double acceptance_probability = 1.0;
  std::array<double, 4> bell_diagonal{};  // phi+, phi-, psi+, psi- after werner_enforce
  // Largest off-diagonal magnitude in the Bell basis before the final twirl.
  double bell_offdiagonal = 0.0;
  double storage_time_s = 0.0;
  double sigma = 0.0;
  std::optional<QuantumState> decoded_state;  // end-to-end pair before werner_enforce
};

QuantumState elementary_link(double fidelity);

// Inserts an ancilla in |1> directly after `data_qubit` and applies a noisy
// CNOT data -> ancilla: |0> -> |01>, |1> -> |10>.
QuantumState dfs_encode(const QuantumState& state, int data_qubit, const NoiseModel& noise);

// Noisy CNOT data -> ancilla, then traces out the ancilla.
QuantumState dfs_decode(const QuantumState& state, std::array<int, 2> logical_pair, const NoiseModel& noise);

// Werner link encoded on both ends: [a_data, a_anc, b_data, b_anc].
QuantumState encoded_link(double fidelity, const NoiseModel& noise);

// Logical Bell measurements on an 8-qubit register. The correction refers to
// the second surviving logical qubit (the last two surviving indices).
std::vector<SwapBranch> logical_bsm_v1(const QuantumState& state, const BsmQubitMap& map, const NoiseModel& noise);
std::vector<SwapBranch> logical_bsm_v2(const QuantumState& state, const BsmQubitMap& map, const NoiseModel& noise);

// Physical swap on [L, R, M, S] with R, M co-located; correction on S.
std::vector<SwapBranch> physical_bsm(const QuantumState& state, const NoiseModel& noise);

QuantumState apply_logical_correction(const QuantumState& state, std::array<int, 2> logical_pair, PauliFrame frame);
QuantumState apply_physical_correction(const QuantumState& state, int qubit, PauliFrame frame);

double resolve_storage_time(const ChainConfig& config, const HardwareParams& hw);

ChainResult simulate_chain(const ChainConfig& config, const HardwareParams& hw, const NoiseModel& noise);

// Results for 1..max_links links from one left-to-right pass. Requires a
// fixed storage time (storage_time_s set). With `stop_below` the pass ends
// after the first result whose fidelity is below it.
std::vector<ChainResult> simulate_chain_profile(const ChainConfig& config, const HardwareParams& hw,
                                                const NoiseModel& noise, int max_links,
                                                std::optional<double> stop_below = std::nullopt);

// Maximal CHSH value 2 sqrt(2) (4F - 1) / 3 of a Werner state.
double chsh_value(double fidelity);
// Werner fidelity at which chsh_value reaches 2.
double chsh_threshold_fidelity();

}  // namespace qrep
