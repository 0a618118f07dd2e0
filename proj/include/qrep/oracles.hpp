#pragma once

// Independent checks used by `verify` and the test suites. Nothing here
// reuses the production kernels except the serial reference ones.

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qrep/protocol.hpp"
#include "qrep/purification.hpp"

namespace qrep::oracles {

// Random full-rank density matrix (normalized G G^dagger, complex Gaussian G).
RawMatrix random_density(int num_qubits, std::mt19937_64& rng);

// Collective dephasing by trapezoid quadrature over the Gaussian angle, one
// trap group at a time, using explicit diagonal unitaries.
RawMatrix dephase_quadrature(const RawMatrix& rho, std::span<const std::vector<int>> groups, double sigma,
                             int nodes = 4001);

// Projected Bell state for each of the 16 readout patterns (label 1 most
// significant, bit 1 meaning outcome -1), from an ideal run on two perfect
// logical Bell pairs. Empty where the pattern never occurs.
std::array<std::optional<BellState>, 16> generate_table(int version);

// Empty when `table` agrees with generate_table(version); otherwise the first
// mismatch. Version 1 tables list only the occurring patterns.
std::string check_table(std::span<const OutcomeRow> table, int version);

// Full unitary of a gate list on n qubits.
RawMatrix circuit_unitary(int num_qubits, std::span<const GateSpec> circuit);

struct CodespaceCheck {
  double leakage = 0.0;       // norm of the part mapped out of the codespace
  double target_error = 0.0;  // max deviation from the target after fixing the global phase
};

// Restriction of a logical generator to the DFS codespace compared with the
// ideal logical gate.
CodespaceCheck check_logical_gate(LogicalGate gate);

// Recurrence map on Bell-diagonal weights (phi+, phi-, psi+, psi-) for the
// rotations used by purification_round(). Returns the success probability
// and the new weights.
std::pair<double, std::array<double, 4>> recurrence_map(const std::array<double, 4>& weights);

// Bell-diagonal swap of two pairs with ideal operations.
std::array<double, 4> swap_map(const std::array<double, 4>& a, const std::array<double, 4>& b);

}  // namespace qrep::oracles
