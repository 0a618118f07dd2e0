#include "qrep/oracles.hpp"

#include <algorithm>
#include <cmath>

namespace qrep::oracles {
namespace {

namespace ref = kernels::reference;

RawMatrix pure(int n, const std::vector<cplx>& v) {
  RawMatrix m(n);
  for (std::size_t r = 0; r < v.size(); ++r)
    for (std::size_t c = 0; c < v.size(); ++c) m(r, c) = v[r] * std::conj(v[c]);
  return m;
}

void conjugate(RawMatrix& rho, const RawMatrix& u) { rho = ref::multiply(ref::multiply(u, rho), ref::adjoint(u)); }

RawMatrix gate_on(int n, Gate g, std::vector<int> targets) {
  const auto m = gate_matrix(g);
  return ref::embed(n, targets, m);
}

// |B_L> on [d, a, d, a] from the two-qubit Bell vector via |x> -> |x, 1-x>.
std::vector<cplx> logical_bell(BellState b) {
  const auto v = bell_vector(b);
  std::vector<cplx> out(16, 0.0);
  for (unsigned xy = 0; xy < 4; ++xy) {
    const unsigned x = xy >> 1, y = xy & 1u;
    const unsigned idx = (x << 3) | ((1u - x) << 2) | (y << 1) | (1u - y);
    out[idx] = v[xy];
  }
  return out;
}

std::string pattern_text(unsigned pattern) {
  std::string s = "(";
  for (int i = 0; i < 4; ++i) {
    s += ((pattern >> (3 - i)) & 1u) ? '-' : '+';
    if (i < 3) s += ',';
  }
  return s + ")";
}

unsigned pattern_of(const std::array<int, 4>& outcomes) {
  unsigned p = 0;
  for (int o : outcomes) p = (p << 1) | (o == -1 ? 1u : 0u);
  return p;
}

}  // namespace

RawMatrix random_density(int num_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  RawMatrix g(num_qubits);
  for (cplx& v : g.data) v = {normal(rng), normal(rng)};
  RawMatrix rho = ref::multiply(g, ref::adjoint(g));
  cplx tr = 0.0;
  for (std::size_t k = 0; k < rho.dim(); ++k) tr += rho(k, k);
  for (cplx& v : rho.data) v /= tr.real();
  return rho;
}

RawMatrix dephase_quadrature(const RawMatrix& rho, std::span<const std::vector<int>> groups, double sigma,
                             int nodes) {
  RawMatrix out = rho;
  if (sigma == 0.0) return out;
  const int n = rho.num_qubits;
  const std::size_t d = rho.dim();
  const double half_width = 12.0 * sigma;
  const double h = 2.0 * half_width / (nodes - 1);
  for (const auto& group : groups) {
    // Eigenvalue of sum_j Z_j on each basis string.
    std::vector<double> m(d, 0.0);
    for (std::size_t s = 0; s < d; ++s)
      for (int q : group) m[s] += (s & qubit_mask(n, q)) ? -1.0 : 1.0;
    RawMatrix acc(n);
    for (int k = 0; k < nodes; ++k) {
      const double theta = -half_width + k * h;
      double w = h * std::exp(-theta * theta / (2.0 * sigma * sigma)) / (std::sqrt(2.0 * M_PI) * sigma);
      if (k == 0 || k == nodes - 1) w *= 0.5;
      // U = exp(-i theta sum Z) is diagonal.
      std::vector<cplx> u(d);
      for (std::size_t s = 0; s < d; ++s) u[s] = std::polar(1.0, -theta * m[s]);
      for (std::size_t r = 0; r < d; ++r)
        for (std::size_t c = 0; c < d; ++c) acc(r, c) += w * u[r] * out(r, c) * std::conj(u[c]);
    }
    out = std::move(acc);
  }
  return out;
}

std::array<std::optional<BellState>, 16> generate_table(int version) {
  const auto pair = logical_bell(BellState::PhiPlus);
  std::vector<cplx> both(256, 0.0);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) both[i * 16 + j] = pair[i] * pair[j];
  RawMatrix rho = pure(8, both);

  // Labels: 1 = 2, 2 = 4, 3 = 3, 4 = 5 in the [L_d, L_a, R_d, R_a, M_d, M_a, S_d, S_a] register.
  const std::array<int, 5> label{-1, 2, 4, 3, 5};
  if (version == 1) {
    conjugate(rho, gate_on(8, Gate::CNOT, {label[3], label[2]}));
    conjugate(rho, gate_on(8, Gate::CNOT, {label[1], label[4]}));
    conjugate(rho, gate_on(8, Gate::H, {label[1]}));
    conjugate(rho, gate_on(8, Gate::H, {label[3]}));
  } else {
    conjugate(rho, gate_on(8, Gate::CNOT, {label[3], label[4]}));
    conjugate(rho, gate_on(8, Gate::H, {label[1]}));
    conjugate(rho, gate_on(8, Gate::H, {label[2]}));
    conjugate(rho, gate_on(8, Gate::H, {label[3]}));
  }

  std::array<std::optional<BellState>, 16> out{};
  const std::array<int, 4> measured{label[1], label[2], label[3], label[4]};
  for (unsigned pattern = 0; pattern < 16; ++pattern) {
    std::array<int, 4> bits{};
    for (int i = 0; i < 4; ++i) bits[static_cast<std::size_t>(i)] = static_cast<int>((pattern >> (3 - i)) & 1u);
    const RawMatrix block = ref::fixed_block(rho, measured, bits);
    double prob = 0.0;
    for (std::size_t k = 0; k < block.dim(); ++k) prob += block(k, k).real();
    if (prob < 1e-12) continue;
    for (int b = 0; b < 4; ++b) {
      const auto v = logical_bell(static_cast<BellState>(b));
      cplx f = 0.0;
      for (std::size_t r = 0; r < 16; ++r)
        for (std::size_t c = 0; c < 16; ++c) f += std::conj(v[r]) * block(r, c) * v[c];
      if (std::abs(f.real() / prob - 1.0) < 1e-9) out[pattern] = static_cast<BellState>(b);
    }
  }
  return out;
}

std::string check_table(std::span<const OutcomeRow> table, int version) {
  const auto truth = generate_table(version);
  std::array<bool, 16> listed{};
  for (const auto& row : table) {
    const unsigned p = pattern_of(row.outcomes);
    if (listed[p]) return "pattern " + pattern_text(p) + " listed twice";
    listed[p] = true;
    if (!truth[p]) return "pattern " + pattern_text(p) + " never occurs for codespace inputs";
    if (*truth[p] != row.bell) {
      return "pattern " + pattern_text(p) + " listed as " + std::string(bell_name(row.bell)) + ", enumeration gives " +
             std::string(bell_name(*truth[p]));
    }
  }
  for (unsigned p = 0; p < 16; ++p) {
    if (truth[p] && !listed[p]) return "pattern " + pattern_text(p) + " occurs but is not listed";
  }
  return {};
}

RawMatrix circuit_unitary(int num_qubits, std::span<const GateSpec> circuit) {
  RawMatrix u(num_qubits);
  for (std::size_t k = 0; k < u.dim(); ++k) u(k, k) = 1.0;
  for (const auto& g : circuit) u = ref::multiply(gate_on(num_qubits, g.gate, g.targets), u);
  return u;
}

CodespaceCheck check_logical_gate(LogicalGate gate) {
  const int logical = gate == LogicalGate::CZ ? 2 : 1;
  const int n = 2 * logical;
  const std::size_t ld = std::size_t{1} << logical;
  // Physical index of each logical basis string.
  std::vector<std::size_t> code(ld);
  for (std::size_t x = 0; x < ld; ++x) {
    std::size_t idx = 0;
    for (int k = 0; k < logical; ++k) {
      const std::size_t bit = (x >> (logical - 1 - k)) & 1u;
      idx = (idx << 2) | (bit << 1) | (1u - bit);
    }
    code[x] = idx;
  }
  std::vector<cplx> target(ld * ld, 0.0);
  const double h = M_SQRT1_2;
  switch (gate) {
    case LogicalGate::S: target = {1.0, 0.0, 0.0, cplx(0.0, 1.0)}; break;
    case LogicalGate::H: target = {h, h, h, -h}; break;
    case LogicalGate::CZ:
      for (std::size_t k = 0; k < 4; ++k) target[k * 4 + k] = k == 3 ? -1.0 : 1.0;
      break;
  }

  const RawMatrix u = circuit_unitary(n, logical_clifford(gate));
  CodespaceCheck check;
  double leak2 = 0.0;
  std::vector<cplx> restricted(ld * ld);
  for (std::size_t c = 0; c < ld; ++c) {
    for (std::size_t r = 0; r < u.dim(); ++r) {
      const cplx v = u(r, code[c]);
      const auto it = std::find(code.begin(), code.end(), r);
      if (it == code.end()) {
        leak2 += std::norm(v);
      } else {
        restricted[static_cast<std::size_t>(it - code.begin()) * ld + c] = v;
      }
    }
  }
  check.leakage = std::sqrt(leak2);
  cplx overlap = 0.0;
  for (std::size_t k = 0; k < restricted.size(); ++k) overlap += std::conj(target[k]) * restricted[k];
  const cplx phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : cplx(1.0);
  for (std::size_t k = 0; k < restricted.size(); ++k) {
    check.target_error = std::max(check.target_error, std::abs(restricted[k] - phase * target[k]));
  }
  return check;
}

std::pair<double, std::array<double, 4>> recurrence_map(const std::array<double, 4>& w) {
  const double a = w[0], d = w[1], c = w[2], b = w[3];  // phi+, phi-, psi+, psi-
  const double norm = (a + b) * (a + b) + (c + d) * (c + d);
  return {norm, {(a * a + b * b) / norm, 2.0 * a * b / norm, (c * c + d * d) / norm, 2.0 * c * d / norm}};
}

std::array<double, 4> swap_map(const std::array<double, 4>& a, const std::array<double, 4>& b) {
  // Index bits (x, z): phi+ = 00, phi- = 01, psi+ = 10, psi- = 11; Paulis compose by XOR.
  std::array<double, 4> out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i ^ j] += a[i] * b[j];
  return out;
}

}  // namespace qrep::oracles
