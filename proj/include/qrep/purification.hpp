#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "qrep/channels.hpp"

namespace qrep {

enum class LogicalGate { S, H, CZ };

// Physical circuit, in application order, for a logical generator on the DFS
// code |0_L> = |01>, |1_L> = |10>. S and H act on the logical qubit (0, 1);
// CZ acts on the logical qubits (0, 1) and (2, 3). H comes out as i H on the
// codespace, which is H up to a global phase.
std::vector<GateSpec> logical_clifford(LogicalGate gate);

// Maps circuit qubit k to register index map[k].
std::vector<GateSpec> relabel(std::span<const GateSpec> circuit, std::span<const int> map);

QuantumState apply_circuit(const QuantumState& state, std::span<const GateSpec> circuit, const NoiseModel& noise);

struct LogicalMeasurement {
  int logical_bit;
  double probability;
  std::optional<QuantumState> post_state;  // empty when probability <= 1e-12
};

// Z readout of the data qubit of a (data, ancilla) pair; reading |0> means
// logical 0. Both branches, logical 0 first.
std::array<LogicalMeasurement, 2> logical_measure_z(const QuantumState& state, std::array<int, 2> logical_pair);

enum class PurificationLevel { Physical, Logical };

struct PurificationResult {
  double success_probability = 0.0;
  QuantumState purified;  // 2 qubits (physical) or [a_d, a_a, b_d, b_a] (logical)
};

// One round of the recurrence protocol. Alice rotates her halves by H S H,
// Bob by H S^3 H, both apply CNOT from the first pair to the second, the
// second pair is read out in Z and the first kept when the results agree.
// At the logical level every gate goes through logical_clifford(), with
// CNOT = H_L(t) CZ_L H_L(t), and the readout through logical_measure_z().
PurificationResult purification_round(const QuantumState& pair_a, const QuantumState& pair_b, const NoiseModel& noise,
                                      PurificationLevel level);

}  // namespace qrep
