#pragma once

#include <array>
#include <span>
#include <vector>

#include "qrep/state.hpp"

namespace qrep {

/// Gate and memory noise. Each parameter is the weight kept by the
/// depolarizing map, so 1 means noiseless.
struct NoiseModel {
  double p_g1 = 0.999;  // single-qubit gates
  double p_g2 = 0.995;  // two-qubit gates (applied to each involved qubit)
  double p_meas = 0.999;  // applied to a qubit right before it is measured
  bool measurement_noise = true;
  double tau_s = 0.01;  // collective-dephasing coherence time
  bool ideal = false;   // switches every gate and measurement error off

  static NoiseModel noiseless() {
    NoiseModel n;
    n.ideal = true;
    return n;
  }

  double single() const { return ideal ? 1.0 : p_g1; }
  double two() const { return ideal ? 1.0 : p_g2; }
  double meas() const { return (ideal || !measurement_noise) ? 1.0 : p_meas; }
  double level(Gate g) const { return gate_arity(g) == 2 ? two() : single(); }

  void validate() const;
  friend bool operator==(const NoiseModel&, const NoiseModel&) = default;
};

struct DephasingContext {
  std::vector<std::vector<int>> trap_groups;  // disjoint sets of co-trapped qubits
  double sigma = 0.0;                         // storage time over coherence time

  void validate(int num_qubits) const;
};

// True once exp(-sigma^2 dm^2 / 2) underflows to zero for every dm != 0: all
// coherences between different collective Z sums are gone and any larger
// sigma gives a bit-identical state.
inline bool dephasing_saturated(double sigma) { return 2.0 * sigma * sigma > 800.0; }

enum class BellState { PhiPlus, PhiMinus, PsiPlus, PsiMinus };

std::string_view bell_name(BellState b);
std::array<cplx, 4> bell_vector(BellState b);
// Populations in the order phi+, phi-, psi+, psi-.
std::array<double, 4> bell_populations(const QuantumState& two_qubit);
QuantumState bell_diagonal_state(const std::array<double, 4>& populations);

QuantumState local_depolarizing(const QuantumState& state, int qubit, double p_g);
QuantumState noisy_gate(const QuantumState& state, const GateSpec& gate, const NoiseModel& noise);
QuantumState collective_dephasing(const QuantumState& state, const DephasingContext& ctx);
QuantumState bell_twirl(const QuantumState& state);
QuantumState werner_enforce(const QuantumState& state);

// In-place variants on raw matrices for the protocol inner loops.
namespace inplace {

void noisy_gate(RawMatrix& rho, const GateSpec& gate, const NoiseModel& noise);
// Noisy Hadamard followed by measurement noise: prepares an X-basis readout.
void prepare_x_readout(RawMatrix& rho, int qubit, const NoiseModel& noise);
void prepare_z_readout(RawMatrix& rho, int qubit, const NoiseModel& noise);
void apply_pauli(RawMatrix& rho, int qubit, Gate pauli);

}  // namespace inplace
}  // namespace qrep
