#include "qrep/state.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

namespace qrep {
namespace {

constexpr double kHermitianTol = 1e-10;
constexpr double kTraceTol = 1e-10;
constexpr double kNegativityTol = 1e-9;

void check_size(int n) {
  if (n < 1 || n > kMaxQubits) {
    throw CapacityError("register of " + std::to_string(n) + " qubits outside [1, 8]");
  }
}

Eigen::MatrixXcd to_eigen(const RawMatrix& m) {
  const auto d = static_cast<Eigen::Index>(m.dim());
  Eigen::MatrixXcd out(d, d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index c = 0; c < d; ++c) out(r, c) = m(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  return out;
}

const Mat2 kHadamard = {M_SQRT1_2, M_SQRT1_2, M_SQRT1_2, -M_SQRT1_2};

}  // namespace

std::string_view gate_name(Gate g) {
  switch (g) {
    case Gate::I: return "I";
    case Gate::X: return "X";
    case Gate::Y: return "Y";
    case Gate::Z: return "Z";
    case Gate::H: return "H";
    case Gate::S: return "S";
    case Gate::CNOT: return "CNOT";
    case Gate::CZ: return "CZ";
  }
  return "?";
}

int gate_arity(Gate g) { return (g == Gate::CNOT || g == Gate::CZ) ? 2 : 1; }

std::vector<cplx> gate_matrix(Gate g) {
  const cplx i{0.0, 1.0};
  switch (g) {
    case Gate::I: return {1, 0, 0, 1};
    case Gate::X: return {0, 1, 1, 0};
    case Gate::Y: return {0, -i, i, 0};
    case Gate::Z: return {1, 0, 0, -1};
    case Gate::H: return {kHadamard.begin(), kHadamard.end()};
    case Gate::S: return {1, 0, 0, i};
    case Gate::CNOT: return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0};
    case Gate::CZ: return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, -1};
  }
  throw ValidationError("unknown gate");
}

QuantumState QuantumState::from_matrix(RawMatrix m) {
  check_size(m.num_qubits);
  if (m.data.size() != m.dim() * m.dim()) throw ValidationError("matrix size does not match qubit count");
  const std::size_t d = m.dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = r; c < d; ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > kHermitianTol) throw ValidationError("matrix is not Hermitian");
  const cplx tr = kernels::trace(m);
  if (std::abs(tr - 1.0) > kTraceTol) throw ValidationError("trace differs from 1");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(to_eigen(m));
  const double min_eig = eig.eigenvalues().minCoeff();
  if (min_eig < -kNegativityTol) throw ValidationError("matrix is not positive semidefinite");
  if (min_eig < 0.0) {
    Eigen::VectorXd clamped = eig.eigenvalues().cwiseMax(0.0);
    clamped /= clamped.sum();
    const Eigen::MatrixXcd fixed = eig.eigenvectors() * clamped.asDiagonal() * eig.eigenvectors().adjoint();
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) m(r, c) = fixed(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  // Symmetrize away roundoff so downstream Hermiticity checks are exact.
  for (std::size_t r = 0; r < d; ++r) {
    m(r, r) = m(r, r).real();
    for (std::size_t c = r + 1; c < d; ++c) {
      const cplx avg = 0.5 * (m(r, c) + std::conj(m(c, r)));
      m(r, c) = avg;
      m(c, r) = std::conj(avg);
    }
  }
  return QuantumState(std::move(m));
}

QuantumState QuantumState::unchecked(RawMatrix m) { return QuantumState(std::move(m)); }

QuantumState QuantumState::maximally_mixed(int num_qubits) {
  check_size(num_qubits);
  RawMatrix m(num_qubits);
  for (std::size_t i = 0; i < m.dim(); ++i) m(i, i) = 1.0 / static_cast<double>(m.dim());
  return QuantumState(std::move(m));
}

QuantumState QuantumState::basis(int num_qubits, std::size_t index) {
  check_size(num_qubits);
  RawMatrix m(num_qubits);
  if (index >= m.dim()) throw ValidationError("basis index out of range");
  m(index, index) = 1.0;
  return QuantumState(std::move(m));
}

double QuantumState::max_abs_diff(const QuantumState& other) const {
  if (other.num_qubits() != num_qubits()) throw ValidationError("dimension mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < m_.data.size(); ++k) worst = std::max(worst, std::abs(m_.data[k] - other.m_.data[k]));
  return worst;
}

QuantumState from_pure(std::span<const cplx> amplitudes) {
  const std::size_t d = amplitudes.size();
  if (d < 2 || (d & (d - 1)) != 0) throw ValidationError("amplitude vector length is not a power of two");
  const int n = std::countr_zero(d);
  check_size(n);
  double norm = 0.0;
  for (const cplx& a : amplitudes) norm += std::norm(a);
  if (std::abs(norm - 1.0) > 1e-10) throw ValidationError("amplitude vector is not normalized");
  RawMatrix m(n);
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) m(r, c) = amplitudes[r] * std::conj(amplitudes[c]);
  return QuantumState::unchecked(std::move(m));
}

QuantumState tensor(const QuantumState& a, const QuantumState& b) {
  const int n = a.num_qubits() + b.num_qubits();
  if (n > kMaxQubits) throw CapacityError("tensor product would hold " + std::to_string(n) + " qubits");
  return QuantumState::unchecked(kernels::kron(a.raw(), b.raw()));
}

void validate_qubit(const QuantumState& state, int qubit) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw ValidationError("qubit index " + std::to_string(qubit) + " out of range");
  }
}

void validate_gate(int num_qubits, const GateSpec& gate) {
  if (static_cast<int>(gate.targets.size()) != gate_arity(gate.gate)) {
    throw ValidationError(std::string("wrong number of targets for ") + std::string(gate_name(gate.gate)));
  }
  for (std::size_t i = 0; i < gate.targets.size(); ++i) {
    const int t = gate.targets[i];
    if (t < 0 || t >= num_qubits) throw ValidationError("gate target " + std::to_string(t) + " out of range");
    for (std::size_t j = 0; j < i; ++j)
      if (gate.targets[j] == t) throw ValidationError("gate targets must be distinct");
  }
}

QuantumState apply_unitary(const QuantumState& state, const GateSpec& gate) {
  validate_gate(state.num_qubits(), gate);
  RawMatrix m = state.raw();
  const auto u = gate_matrix(gate.gate);
  if (gate_arity(gate.gate) == 1) {
    Mat2 u2;
    std::copy(u.begin(), u.end(), u2.begin());
    kernels::apply_1q(m, gate.targets[0], u2);
  } else {
    Mat4 u4;
    std::copy(u.begin(), u.end(), u4.begin());
    kernels::apply_2q(m, gate.targets[0], gate.targets[1], u4);
  }
  return QuantumState::unchecked(std::move(m));
}

std::array<MeasurementBranch, 2> measure(const QuantumState& state, int qubit, Basis basis) {
  validate_qubit(state, qubit);
  RawMatrix rotated = state.raw();
  if (basis == Basis::X) kernels::apply_1q(rotated, qubit, kHadamard);

  std::array<MeasurementBranch, 2> branches{};
  for (int bit = 0; bit < 2; ++bit) {
    RawMatrix m = rotated;
    kernels::project(m, qubit, bit);
    const double prob = std::max(0.0, kernels::trace(m).real());
    MeasurementBranch& br = branches[bit];
    br.outcome = bit ? -1 : 1;
    br.probability = prob;
    if (prob > kBranchEpsilon) {
      for (cplx& v : m.data) v /= prob;
      if (basis == Basis::X) kernels::apply_1q(m, qubit, kHadamard);
      br.post_state = QuantumState::unchecked(std::move(m));
    }
  }
  if (branches[0].probability <= kBranchEpsilon && branches[1].probability <= kBranchEpsilon) {
    throw DegenerateStateError("both measurement branches have vanishing probability");
  }
  return branches;
}

MeasurementBranch measure_outcome(const QuantumState& state, int qubit, Basis basis, int outcome) {
  if (outcome != 1 && outcome != -1) throw ValidationError("outcome must be +1 or -1");
  auto branches = measure(state, qubit, basis);
  MeasurementBranch& br = branches[outcome == 1 ? 0 : 1];
  if (!br.post_state) throw DegenerateStateError("requested measurement branch has vanishing probability");
  return std::move(br);
}

MeasurementBranch sample_measure(const QuantumState& state, int qubit, Basis basis, std::mt19937_64& rng) {
  auto branches = measure(state, qubit, basis);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const bool plus = branches[1].probability <= kBranchEpsilon ||
                    (branches[0].probability > kBranchEpsilon && u(rng) < branches[0].probability);
  return std::move(branches[plus ? 0 : 1]);
}

QuantumState partial_trace(const QuantumState& state, std::span<const int> keep) {
  if (keep.empty()) throw ValidationError("partial trace must keep at least one qubit");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    validate_qubit(state, keep[i]);
    if (i > 0 && keep[i] <= keep[i - 1]) throw ValidationError("kept qubits must be sorted and distinct");
  }
  return QuantumState::unchecked(kernels::partial_trace(state.raw(), keep));
}

double fidelity(const QuantumState& state, std::span<const cplx> reference) {
  if (reference.size() != state.dim()) throw ValidationError("reference vector dimension mismatch");
  return kernels::expectation(state.raw(), reference).real();
}

}  // namespace qrep
