#include "qrep/channels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrep {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(std::string(what) + " must lie in [0, 1]");
}

void require_two_qubits(const QuantumState& s) {
  if (s.num_qubits() != 2) throw ValidationError("expected a two-qubit state");
}

template <std::size_t N>
std::array<cplx, N> to_array(const std::vector<cplx>& v) {
  std::array<cplx, N> out{};
  std::copy(v.begin(), v.end(), out.begin());
  return out;
}

}  // namespace

void NoiseModel::validate() const {
  check_probability(p_g1, "p_g1");
  check_probability(p_g2, "p_g2");
  check_probability(p_meas, "p_meas");
  if (!(tau_s > 0.0) || !std::isfinite(tau_s)) throw ValidationError("tau must be positive");
}

void DephasingContext::validate(int num_qubits) const {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be finite and non-negative");
  std::vector<bool> seen(static_cast<std::size_t>(num_qubits), false);
  for (const auto& group : trap_groups) {
    for (int q : group) {
      if (q < 0 || q >= num_qubits) throw ValidationError("trap group qubit out of range");
      if (seen[static_cast<std::size_t>(q)]) throw ValidationError("trap groups overlap");
      seen[static_cast<std::size_t>(q)] = true;
    }
  }
}

std::string_view bell_name(BellState b) {
  switch (b) {
    case BellState::PhiPlus: return "phi+";
    case BellState::PhiMinus: return "phi-";
    case BellState::PsiPlus: return "psi+";
    case BellState::PsiMinus: return "psi-";
  }
  return "?";
}

std::array<cplx, 4> bell_vector(BellState b) {
  const double h = M_SQRT1_2;
  switch (b) {
    case BellState::PhiPlus: return {h, 0, 0, h};
    case BellState::PhiMinus: return {h, 0, 0, -h};
    case BellState::PsiPlus: return {0, h, h, 0};
    case BellState::PsiMinus: return {0, h, -h, 0};
  }
  throw ValidationError("unknown Bell state");
}

std::array<double, 4> bell_populations(const QuantumState& two_qubit) {
  require_two_qubits(two_qubit);
  std::array<double, 4> pops{};
  for (int k = 0; k < 4; ++k) {
    const auto v = bell_vector(static_cast<BellState>(k));
    pops[static_cast<std::size_t>(k)] = kernels::expectation(two_qubit.raw(), v).real();
  }
  return pops;
}

QuantumState bell_diagonal_state(const std::array<double, 4>& populations) {
  RawMatrix m(2);
  double total = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double w = populations[static_cast<std::size_t>(k)];
    if (w < -1e-12) throw ValidationError("Bell populations must be non-negative");
    total += w;
    const auto v = bell_vector(static_cast<BellState>(k));
    for (std::size_t r = 0; r < 4; ++r)
      for (std::size_t c = 0; c < 4; ++c) m(r, c) += w * v[r] * std::conj(v[c]);
  }
  if (std::abs(total - 1.0) > 1e-10) throw ValidationError("Bell populations must sum to 1");
  return QuantumState::unchecked(std::move(m));
}

QuantumState local_depolarizing(const QuantumState& state, int qubit, double p_g) {
  check_probability(p_g, "p_g");
  validate_qubit(state, qubit);
  RawMatrix m = state.raw();
  kernels::depolarize(m, qubit, p_g);
  return QuantumState::unchecked(std::move(m));
}

QuantumState noisy_gate(const QuantumState& state, const GateSpec& gate, const NoiseModel& noise) {
  validate_gate(state.num_qubits(), gate);
  RawMatrix m = state.raw();
  inplace::noisy_gate(m, gate, noise);
  return QuantumState::unchecked(std::move(m));
}

QuantumState collective_dephasing(const QuantumState& state, const DephasingContext& ctx) {
  ctx.validate(state.num_qubits());
  RawMatrix m = state.raw();
  kernels::dephase(m, ctx.trap_groups, ctx.sigma);
  return QuantumState::unchecked(std::move(m));
}

QuantumState bell_twirl(const QuantumState& state) {
  require_two_qubits(state);
  auto pops = bell_populations(state);
  for (double& p : pops) p = std::max(p, 0.0);
  return bell_diagonal_state(pops);
}

QuantumState werner_enforce(const QuantumState& state) {
  require_two_qubits(state);
  const auto pops = bell_populations(state);
  const double rest = (1.0 - pops[0]) / 3.0;
  return bell_diagonal_state({pops[0], rest, rest, rest});
}

namespace inplace {

void noisy_gate(RawMatrix& rho, const GateSpec& gate, const NoiseModel& noise) {
  const double p = noise.level(gate.gate);
  for (int q : gate.targets) kernels::depolarize(rho, q, p);
  const auto u = gate_matrix(gate.gate);
  if (gate.targets.size() == 1) {
    kernels::apply_1q(rho, gate.targets[0], to_array<4>(u));
  } else {
    kernels::apply_2q(rho, gate.targets[0], gate.targets[1], to_array<16>(u));
  }
}

void prepare_x_readout(RawMatrix& rho, int qubit, const NoiseModel& noise) {
  noisy_gate(rho, GateSpec{Gate::H, {qubit}}, noise);
  kernels::depolarize(rho, qubit, noise.meas());
}

void prepare_z_readout(RawMatrix& rho, int qubit, const NoiseModel& noise) {
  kernels::depolarize(rho, qubit, noise.meas());
}

void apply_pauli(RawMatrix& rho, int qubit, Gate pauli) {
  kernels::apply_1q(rho, qubit, to_array<4>(gate_matrix(pauli)));
}

}  // namespace inplace
}  // namespace qrep
