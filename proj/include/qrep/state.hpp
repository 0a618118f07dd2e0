#pragma once

#include <array>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "qrep/errors.hpp"
#include "qrep/kernels.hpp"

namespace qrep {

inline constexpr int kMaxQubits = 8;

enum class Gate { I, X, Y, Z, H, S, CNOT, CZ };

std::string_view gate_name(Gate g);
int gate_arity(Gate g);
// Row-major matrix of the gate; for two-qubit gates the first target is the high bit.
std::vector<cplx> gate_matrix(Gate g);

// A gate applied to specific register indices (control first for CNOT).
struct GateSpec {
  Gate gate;
  std::vector<int> targets;

  friend bool operator==(const GateSpec&, const GateSpec&) = default;
};

/// Density matrix over 1..8 qubits; qubit 0 is the most significant bit of
/// the basis index.
///
/// Values built with from_matrix() are checked for Hermiticity, unit trace
/// and positivity; tiny negative eigenvalues (>= -1e-9) are clamped and the
/// state renormalized. States produced by the operations in this header are
/// valid by construction and are not re-checked.
class QuantumState {
 public:
  static QuantumState from_matrix(RawMatrix m);

  // Wraps a matrix the caller guarantees is a valid state.
  static QuantumState unchecked(RawMatrix m);

  static QuantumState maximally_mixed(int num_qubits);
  static QuantumState basis(int num_qubits, std::size_t index);

  int num_qubits() const { return m_.num_qubits; }
  std::size_t dim() const { return m_.dim(); }
  const cplx& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const RawMatrix& raw() const { return m_; }

  // Largest |rho - other| elementwise.
  double max_abs_diff(const QuantumState& other) const;

 private:
  explicit QuantumState(RawMatrix m) : m_(std::move(m)) {}
  RawMatrix m_;
};

enum class Basis { Z, X };

struct MeasurementBranch {
  int outcome;         // +1 or -1
  double probability;  // in [0, 1]
  std::optional<QuantumState> post_state;  // empty when probability <= 1e-12
};

inline constexpr double kBranchEpsilon = 1e-12;

QuantumState from_pure(std::span<const cplx> amplitudes);

// a's qubits occupy the lower register indices.
QuantumState tensor(const QuantumState& a, const QuantumState& b);

QuantumState apply_unitary(const QuantumState& state, const GateSpec& gate);

// Both outcomes of a projective measurement, +1 first.
std::array<MeasurementBranch, 2> measure(const QuantumState& state, int qubit, Basis basis);

// The requested branch; DegenerateStateError if its probability is <= 1e-12.
MeasurementBranch measure_outcome(const QuantumState& state, int qubit, Basis basis, int outcome);

MeasurementBranch sample_measure(const QuantumState& state, int qubit, Basis basis, std::mt19937_64& rng);

QuantumState partial_trace(const QuantumState& state, std::span<const int> keep);

// <phi| rho |phi> for a normalized reference vector.
double fidelity(const QuantumState& state, std::span<const cplx> reference);

void validate_qubit(const QuantumState& state, int qubit);
void validate_gate(int num_qubits, const GateSpec& gate);

}  // namespace qrep
