#pragma once

// Low-level density-matrix kernels.
//
// Matrices are dense, row-major, dimension 2^n, with qubit 0 mapped to the
// most significant bit of the basis index. Two implementations are kept:
//
//   qrep::kernels            bit-indexed kernels, OpenMP-parallel over rows
//   qrep::kernels::reference straightforward serial versions (full-operator
//                            embedding, dense products) kept for testing and
//                            benchmarking
//
// Kernels do not validate their arguments; QuantumState does that.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qrep {

using cplx = std::complex<double>;
using Mat2 = std::array<cplx, 4>;   // row-major 2x2
using Mat4 = std::array<cplx, 16>;  // row-major 4x4

// Raw square matrix over n qubits. No invariants beyond the size.
struct RawMatrix {
  int num_qubits = 0;
  std::vector<cplx> data;

  RawMatrix() = default;
  explicit RawMatrix(int n) : num_qubits(n), data(std::size_t{1} << (2 * n)) {}

  std::size_t dim() const { return std::size_t{1} << num_qubits; }
  cplx& operator()(std::size_t r, std::size_t c) { return data[r * dim() + c]; }
  const cplx& operator()(std::size_t r, std::size_t c) const { return data[r * dim() + c]; }
};

// Bit of basis index `idx` that encodes qubit `q` of an n-qubit register.
inline std::size_t qubit_mask(int n, int q) { return std::size_t{1} << (n - 1 - q); }

namespace kernels {

// Matrices at or above this dimension use the parallel loop.
inline constexpr std::size_t kParallelMinDim = 64;

RawMatrix kron(const RawMatrix& a, const RawMatrix& b);

// rho <- U rho U^dagger with U acting on qubit q.
void apply_1q(RawMatrix& rho, int q, const Mat2& u);

// rho <- U rho U^dagger with U acting on (q0, q1); q0 is the high bit of U's index.
void apply_2q(RawMatrix& rho, int q0, int q1, const Mat4& u);

// rho <- p rho + (1 - p) Tr_q(rho) (x) I/2, the Pauli-symmetric depolarizing map.
void depolarize(RawMatrix& rho, int q, double p);

// Multiplies rho(a,b) by exp(-sigma^2 (m_a - m_b)^2 / 2) per group, where
// m_s is the sum of Z eigenvalues of the group's qubits in basis string s.
void dephase(RawMatrix& rho, std::span<const std::vector<int>> groups, double sigma);

// Block of rho with the given qubits fixed to the given bit values on both
// sides, over the remaining qubits in their original order. Equivalent to
// projecting the listed qubits and tracing them out, without renormalizing.
RawMatrix fixed_block(const RawMatrix& rho, std::span<const int> qubits, std::span<const int> bits);

// Reduced matrix over `keep` (sorted, distinct).
RawMatrix partial_trace(const RawMatrix& rho, std::span<const int> keep);

// Zeroes rows and columns whose qubit q differs from `bit`.
void project(RawMatrix& rho, int q, int bit);

// New qubit i is old qubit order[i]; `order` is a permutation of 0..n-1.
RawMatrix permute_qubits(const RawMatrix& rho, std::span<const int> order);

cplx trace(const RawMatrix& rho);

// <psi| rho |psi>
cplx expectation(const RawMatrix& rho, std::span<const cplx> psi);

namespace reference {

RawMatrix kron(const RawMatrix& a, const RawMatrix& b);

// Full 2^n x 2^n operator for a gate embedded on `targets`.
RawMatrix embed(int n, std::span<const int> targets, std::span<const cplx> gate);

// Dense product A B.
RawMatrix multiply(const RawMatrix& a, const RawMatrix& b);
RawMatrix adjoint(const RawMatrix& a);

void apply_1q(RawMatrix& rho, int q, const Mat2& u);
void apply_2q(RawMatrix& rho, int q0, int q1, const Mat4& u);
void depolarize(RawMatrix& rho, int q, double p);
void dephase(RawMatrix& rho, std::span<const std::vector<int>> groups, double sigma);
RawMatrix fixed_block(const RawMatrix& rho, std::span<const int> qubits, std::span<const int> bits);
RawMatrix partial_trace(const RawMatrix& rho, std::span<const int> keep);

}  // namespace reference
}  // namespace kernels
}  // namespace qrep
