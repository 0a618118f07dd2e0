#include <cmath>

#include "qrep/kernels.hpp"

namespace qrep::kernels::reference {
namespace {

int bit_of(std::size_t idx, int n, int q) { return (idx & qubit_mask(n, q)) ? 1 : 0; }

RawMatrix conjugate(const RawMatrix& rho, const RawMatrix& op) {
  return multiply(multiply(op, rho), adjoint(op));
}

}  // namespace

RawMatrix kron(const RawMatrix& a, const RawMatrix& b) {
  RawMatrix out(a.num_qubits + b.num_qubits);
  for (std::size_t ar = 0; ar < a.dim(); ++ar)
    for (std::size_t ac = 0; ac < a.dim(); ++ac)
      for (std::size_t br = 0; br < b.dim(); ++br)
        for (std::size_t bc = 0; bc < b.dim(); ++bc)
          out(ar * b.dim() + br, ac * b.dim() + bc) = a(ar, ac) * b(br, bc);
  return out;
}

RawMatrix embed(int n, std::span<const int> targets, std::span<const cplx> gate) {
  RawMatrix op(n);
  const std::size_t d = op.dim();
  const int k = static_cast<int>(targets.size());
  const std::size_t gd = std::size_t{1} << k;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      bool spectators_match = true;
      for (int q = 0; q < n && spectators_match; ++q) {
        bool is_target = false;
        for (int t : targets) is_target = is_target || (t == q);
        if (!is_target && bit_of(r, n, q) != bit_of(c, n, q)) spectators_match = false;
      }
      if (!spectators_match) continue;
      std::size_t gr = 0, gc = 0;
      for (int i = 0; i < k; ++i) {
        gr = (gr << 1) | static_cast<std::size_t>(bit_of(r, n, targets[i]));
        gc = (gc << 1) | static_cast<std::size_t>(bit_of(c, n, targets[i]));
      }
      op(r, c) = gate[gr * gd + gc];
    }
  }
  return op;
}

RawMatrix multiply(const RawMatrix& a, const RawMatrix& b) {
  RawMatrix out(a.num_qubits);
  const std::size_t d = a.dim();
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < d; ++k) {
      const cplx aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < d; ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

RawMatrix adjoint(const RawMatrix& a) {
  RawMatrix out(a.num_qubits);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) out(j, i) = std::conj(a(i, j));
  return out;
}

void apply_1q(RawMatrix& rho, int q, const Mat2& u) {
  const int targets[1] = {q};
  rho = conjugate(rho, embed(rho.num_qubits, targets, u));
}

void apply_2q(RawMatrix& rho, int q0, int q1, const Mat4& u) {
  const int targets[2] = {q0, q1};
  rho = conjugate(rho, embed(rho.num_qubits, targets, u));
}

void depolarize(RawMatrix& rho, int q, double p) {
  const cplx i{0.0, 1.0};
  const Mat2 paulis[3] = {Mat2{0, 1, 1, 0}, Mat2{0, -i, i, 0}, Mat2{1, 0, 0, -1}};
  RawMatrix sum = rho;
  for (const auto& pauli : paulis) {
    RawMatrix term = rho;
    apply_1q(term, q, pauli);
    for (std::size_t k = 0; k < sum.data.size(); ++k) sum.data[k] += term.data[k];
  }
  for (std::size_t k = 0; k < rho.data.size(); ++k) {
    rho.data[k] = p * rho.data[k] + (1.0 - p) / 4.0 * sum.data[k];
  }
}

void dephase(RawMatrix& rho, std::span<const std::vector<int>> groups, double sigma) {
  const int n = rho.num_qubits;
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      for (const auto& group : groups) {
        int delta = 0;
        for (int q : group) delta += (1 - 2 * bit_of(r, n, q)) - (1 - 2 * bit_of(c, n, q));
        rho(r, c) *= std::exp(-sigma * sigma * delta * delta / 2.0);
      }
    }
  }
}

RawMatrix fixed_block(const RawMatrix& rho, std::span<const int> qubits, std::span<const int> bits) {
  const int n = rho.num_qubits;
  RawMatrix projected = rho;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const Mat2 proj = bits[i] ? Mat2{0, 0, 0, 1} : Mat2{1, 0, 0, 0};
    const int targets[1] = {qubits[i]};
    projected = conjugate(projected, embed(n, targets, proj));
  }
  std::vector<int> keep;
  for (int q = 0; q < n; ++q) {
    bool measured = false;
    for (int m : qubits) measured = measured || (m == q);
    if (!measured) keep.push_back(q);
  }
  return partial_trace(projected, keep);
}

RawMatrix partial_trace(const RawMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_qubits;
  const int k = static_cast<int>(keep.size());
  RawMatrix out(k);
  for (std::size_t r = 0; r < rho.dim(); ++r) {
    for (std::size_t c = 0; c < rho.dim(); ++c) {
      bool traced_equal = true;
      for (int q = 0; q < n && traced_equal; ++q) {
        bool kept = false;
        for (int kq : keep) kept = kept || (kq == q);
        if (!kept && bit_of(r, n, q) != bit_of(c, n, q)) traced_equal = false;
      }
      if (!traced_equal) continue;
      std::size_t rr = 0, cc = 0;
      for (int i = 0; i < k; ++i) {
        rr = (rr << 1) | static_cast<std::size_t>(bit_of(r, n, keep[i]));
        cc = (cc << 1) | static_cast<std::size_t>(bit_of(c, n, keep[i]));
      }
      out(rr, cc) += rho(r, c);
    }
  }
  return out;
}

}  // namespace qrep::kernels::reference
