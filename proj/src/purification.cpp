#include "qrep/purification.hpp"

#include <string>

namespace qrep {
namespace {

void run(RawMatrix& rho, std::span<const GateSpec> circuit, const NoiseModel& noise) {
  for (const auto& g : circuit) inplace::noisy_gate(rho, g, noise);
}

void append(std::vector<GateSpec>& out, const std::vector<GateSpec>& more) {
  out.insert(out.end(), more.begin(), more.end());
}

// H S H on one qubit, or H S^3 H when `inverse`.
std::vector<GateSpec> rotation(bool inverse, bool logical, std::array<int, 2> q) {
  std::vector<GateSpec> out;
  const int s_count = inverse ? 3 : 1;
  if (logical) {
    const std::array<int, 2> map{q[0], q[1]};
    append(out, relabel(logical_clifford(LogicalGate::H), map));
    for (int k = 0; k < s_count; ++k) append(out, relabel(logical_clifford(LogicalGate::S), map));
    append(out, relabel(logical_clifford(LogicalGate::H), map));
  } else {
    out.push_back({Gate::H, {q[0]}});
    for (int k = 0; k < s_count; ++k) out.push_back({Gate::S, {q[0]}});
    out.push_back({Gate::H, {q[0]}});
  }
  return out;
}

std::vector<GateSpec> cnot(bool logical, std::array<int, 2> control, std::array<int, 2> target) {
  if (!logical) return {GateSpec{Gate::CNOT, {control[0], target[0]}}};
  std::vector<GateSpec> out;
  const std::array<int, 2> t{target[0], target[1]};
  const std::array<int, 4> ct{control[0], control[1], target[0], target[1]};
  append(out, relabel(logical_clifford(LogicalGate::H), t));
  append(out, relabel(logical_clifford(LogicalGate::CZ), ct));
  append(out, relabel(logical_clifford(LogicalGate::H), t));
  return out;
}

}  // namespace

std::vector<GateSpec> logical_clifford(LogicalGate gate) {
  switch (gate) {
    case LogicalGate::S:
      return {{Gate::S, {0}}};
    case LogicalGate::H:
      // [(H S H Z) x (H S H)] CNOT(0 -> 1) [(H S X) x X]
      return {{Gate::X, {0}}, {Gate::S, {0}}, {Gate::H, {0}}, {Gate::X, {1}},
              {Gate::CNOT, {0, 1}},
              {Gate::Z, {0}}, {Gate::H, {0}}, {Gate::S, {0}}, {Gate::H, {0}},
              {Gate::H, {1}}, {Gate::S, {1}}, {Gate::H, {1}}};
    case LogicalGate::CZ:
      return {{Gate::CZ, {0, 2}}};
  }
  throw ValidationError("unknown logical gate");
}

std::vector<GateSpec> relabel(std::span<const GateSpec> circuit, std::span<const int> map) {
  std::vector<GateSpec> out;
  out.reserve(circuit.size());
  for (const auto& g : circuit) {
    GateSpec r{g.gate, {}};
    for (int q : g.targets) {
      if (q < 0 || static_cast<std::size_t>(q) >= map.size()) throw ValidationError("relabel map too short");
      r.targets.push_back(map[static_cast<std::size_t>(q)]);
    }
    out.push_back(std::move(r));
  }
  return out;
}

QuantumState apply_circuit(const QuantumState& state, std::span<const GateSpec> circuit, const NoiseModel& noise) {
  for (const auto& g : circuit) validate_gate(state.num_qubits(), g);
  RawMatrix m = state.raw();
  run(m, circuit, noise);
  return QuantumState::unchecked(std::move(m));
}

std::array<LogicalMeasurement, 2> logical_measure_z(const QuantumState& state, std::array<int, 2> logical_pair) {
  validate_qubit(state, logical_pair[0]);
  validate_qubit(state, logical_pair[1]);
  if (logical_pair[0] == logical_pair[1]) throw ValidationError("logical pair needs two distinct qubits");
  auto branches = measure(state, logical_pair[0], Basis::Z);
  std::array<LogicalMeasurement, 2> out{
      LogicalMeasurement{0, branches[0].probability, std::move(branches[0].post_state)},
      LogicalMeasurement{1, branches[1].probability, std::move(branches[1].post_state)}};
  return out;
}

PurificationResult purification_round(const QuantumState& pair_a, const QuantumState& pair_b, const NoiseModel& noise,
                                      PurificationLevel level) {
  const bool logical = level == PurificationLevel::Logical;
  const int width = logical ? 4 : 2;
  if (pair_a.num_qubits() != width || pair_b.num_qubits() != width) {
    throw ValidationError(std::string("purification expects ") + (logical ? "4-qubit logical" : "2-qubit") + " pairs");
  }
  // Register: [pair a: Alice, Bob][pair b: Alice, Bob], one slot per (logical) qubit.
  RawMatrix rho = kernels::kron(pair_a.raw(), pair_b.raw());
  const int step = logical ? 2 : 1;
  auto slot = [&](int k) { return std::array<int, 2>{k * step, k * step + 1}; };
  const auto alice_a = slot(0), bob_a = slot(1), alice_b = slot(2), bob_b = slot(3);

  std::vector<GateSpec> circuit;
  append(circuit, rotation(false, logical, alice_a));
  append(circuit, rotation(false, logical, alice_b));
  append(circuit, rotation(true, logical, bob_a));
  append(circuit, rotation(true, logical, bob_b));
  append(circuit, cnot(logical, alice_a, alice_b));
  append(circuit, cnot(logical, bob_a, bob_b));
  run(rho, circuit, noise);

  // Z readout of the second pair (data qubits at the logical level).
  inplace::prepare_z_readout(rho, alice_b[0], noise);
  inplace::prepare_z_readout(rho, bob_b[0], noise);
  const std::array<int, 2> measured{alice_b[0], bob_b[0]};

  RawMatrix kept;
  for (int bit = 0; bit <= 1; ++bit) {
    const std::array<int, 2> bits{bit, bit};
    RawMatrix block = kernels::fixed_block(rho, measured, bits);
    if (logical) {
      // Remaining ancillas of the second pair now sit at the end of the register.
      std::vector<int> keep;
      for (int q = 0; q < block.num_qubits - 2; ++q) keep.push_back(q);
      block = kernels::partial_trace(block, keep);
    }
    if (kept.data.empty()) {
      kept = std::move(block);
    } else {
      for (std::size_t k = 0; k < kept.data.size(); ++k) kept.data[k] += block.data[k];
    }
  }
  const double success = kernels::trace(kept).real();
  if (!(success > kBranchEpsilon)) throw DegenerateStateError("purification never succeeds for these inputs");
  for (cplx& v : kept.data) v /= success;
  return PurificationResult{success, QuantumState::unchecked(std::move(kept))};
}

}  // namespace qrep
