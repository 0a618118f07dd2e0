#include "qrep/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace qrep::kernels {
namespace {

// Basis indices of the kept qubits, expanded into full-register indices with
// every other qubit fixed to 0.
std::vector<std::size_t> scatter_table(int n, std::span<const int> keep) {
  const std::size_t out_dim = std::size_t{1} << keep.size();
  std::vector<std::size_t> table(out_dim, 0);
  const int k = static_cast<int>(keep.size());
  for (std::size_t r = 0; r < out_dim; ++r) {
    std::size_t full = 0;
    for (int i = 0; i < k; ++i) {
      if (r & (std::size_t{1} << (k - 1 - i))) full |= qubit_mask(n, keep[i]);
    }
    table[r] = full;
  }
  return table;
}

std::vector<int> complement(int n, std::span<const int> qubits) {
  std::vector<int> rest;
  for (int q = 0; q < n; ++q) {
    if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) rest.push_back(q);
  }
  return rest;
}

}  // namespace

RawMatrix kron(const RawMatrix& a, const RawMatrix& b) {
  RawMatrix out(a.num_qubits + b.num_qubits);
  const std::size_t da = a.dim(), db = b.dim(), d = out.dim();
  const auto rows = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for if (d >= kParallelMinDim)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    const std::size_t ar = static_cast<std::size_t>(r) / db, br = static_cast<std::size_t>(r) % db;
    cplx* row = &out.data[static_cast<std::size_t>(r) * d];
    for (std::size_t ac = 0; ac < da; ++ac) {
      const cplx av = a(ar, ac);
      const cplx* brow = &b.data[br * db];
      for (std::size_t bc = 0; bc < db; ++bc) row[ac * db + bc] = av * brow[bc];
    }
  }
  return out;
}

void apply_1q(RawMatrix& rho, int q, const Mat2& u) {
  const std::size_t d = rho.dim(), m = qubit_mask(rho.num_qubits, q);
  const auto half = static_cast<std::ptrdiff_t>(d / 2);
  cplx* p = rho.data.data();
  // U rho: mixes row pairs.
#pragma omp parallel for if (d >= kParallelMinDim)
  for (std::ptrdiff_t k = 0; k < half; ++k) {
    const std::size_t lo = static_cast<std::size_t>(k) & (m - 1);
    const std::size_t i0 = ((static_cast<std::size_t>(k) - lo) << 1) | lo, i1 = i0 | m;
    cplx* r0 = p + i0 * d;
    cplx* r1 = p + i1 * d;
    for (std::size_t c = 0; c < d; ++c) {
      const cplx a = r0[c], b = r1[c];
      r0[c] = u[0] * a + u[1] * b;
      r1[c] = u[2] * a + u[3] * b;
    }
  }
  // (U rho) U^dagger: mixes column pairs.
  const cplx c00 = std::conj(u[0]), c01 = std::conj(u[1]), c10 = std::conj(u[2]), c11 = std::conj(u[3]);
  const auto rows = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for if (d >= kParallelMinDim)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    cplx* row = p + static_cast<std::size_t>(r) * d;
    for (std::size_t k = 0; k < d / 2; ++k) {
      const std::size_t lo = k & (m - 1);
      const std::size_t j0 = ((k - lo) << 1) | lo, j1 = j0 | m;
      const cplx a = row[j0], b = row[j1];
      row[j0] = a * c00 + b * c01;
      row[j1] = a * c10 + b * c11;
    }
  }
}

void apply_2q(RawMatrix& rho, int q0, int q1, const Mat4& u) {
  const int n = rho.num_qubits;
  const std::size_t d = rho.dim(), m0 = qubit_mask(n, q0), m1 = qubit_mask(n, q1);
  const std::size_t lo_m = std::min(m0, m1), hi_m = std::max(m0, m1);
  const auto quarter = static_cast<std::ptrdiff_t>(d / 4);
  auto base_index = [&](std::size_t k) {
    // Insert zero bits at positions lo_m then hi_m.
    std::size_t lo = k & (lo_m - 1);
    std::size_t idx = ((k - lo) << 1) | lo;
    lo = idx & (hi_m - 1);
    return ((idx - lo) << 1) | lo;
  };
  cplx* p = rho.data.data();
#pragma omp parallel for if (d >= kParallelMinDim)
  for (std::ptrdiff_t k = 0; k < quarter; ++k) {
    const std::size_t b = base_index(static_cast<std::size_t>(k));
    const std::size_t idx[4] = {b, b | m1, b | m0, b | m0 | m1};
    cplx* r[4] = {p + idx[0] * d, p + idx[1] * d, p + idx[2] * d, p + idx[3] * d};
    for (std::size_t c = 0; c < d; ++c) {
      const cplx v[4] = {r[0][c], r[1][c], r[2][c], r[3][c]};
      for (int i = 0; i < 4; ++i) {
        r[i][c] = u[4 * i] * v[0] + u[4 * i + 1] * v[1] + u[4 * i + 2] * v[2] + u[4 * i + 3] * v[3];
      }
    }
  }
  Mat4 uc;
  for (int i = 0; i < 16; ++i) uc[i] = std::conj(u[i]);
  const auto rows = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for if (d >= kParallelMinDim)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    cplx* row = p + static_cast<std::size_t>(r) * d;
    for (std::size_t k = 0; k < d / 4; ++k) {
      const std::size_t b = base_index(k);
      const std::size_t idx[4] = {b, b | m1, b | m0, b | m0 | m1};
      const cplx v[4] = {row[idx[0]], row[idx[1]], row[idx[2]], row[idx[3]]};
      for (int j = 0; j < 4; ++j) {
        row[idx[j]] = v[0] * uc[4 * j] + v[1] * uc[4 * j + 1] + v[2] * uc[4 * j + 2] + v[3] * uc[4 * j + 3];
      }
    }
  }
}

void depolarize(RawMatrix& rho, int q, double p) {
  if (p == 1.0) return;
  const std::size_t d = rho.dim(), m = qubit_mask(rho.num_qubits, q);
  const auto half = static_cast<std::ptrdiff_t>(d / 2);
  const double mix = (1.0 - p) / 2.0;
  cplx* ptr = rho.data.data();
#pragma omp parallel for if (d >= kParallelMinDim)
  for (std::ptrdiff_t k = 0; k < half; ++k) {
    const std::size_t lo = static_cast<std::size_t>(k) & (m - 1);
    const std::size_t i0 = ((static_cast<std::size_t>(k) - lo) << 1) | lo, i1 = i0 | m;
    cplx* r0 = ptr + i0 * d;
    cplx* r1 = ptr + i1 * d;
    for (std::size_t kc = 0; kc < d / 2; ++kc) {
      const std::size_t lc = kc & (m - 1);
      const std::size_t j0 = ((kc - lc) << 1) | lc, j1 = j0 | m;
      const cplx avg = mix * (r0[j0] + r1[j1]);
      r0[j0] = p * r0[j0] + avg;
      r1[j1] = p * r1[j1] + avg;
      r0[j1] *= p;
      r1[j0] *= p;
    }
  }
}

void dephase(RawMatrix& rho, std::span<const std::vector<int>> groups, double sigma) {
  if (sigma == 0.0 || groups.empty()) return;
  const int n = rho.num_qubits;
  const std::size_t d = rho.dim();
  // Collective Z eigenvalue per basis index and group.
  std::vector<std::vector<int>> z_sum(groups.size(), std::vector<int>(d, 0));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t s = 0; s < d; ++s) {
      int total = 0;
      for (int q : groups[g]) total += (s & qubit_mask(n, q)) ? -1 : 1;
      z_sum[g][s] = total;
    }
  }
  // Differences range over [-2n, 2n]; tabulate the Gaussian factor.
  const int span = 2 * n;
  std::vector<double> factor(2 * span + 1);
  for (int delta = -span; delta <= span; ++delta) {
    factor[delta + span] = std::exp(-sigma * sigma * delta * delta / 2.0);
  }
  const auto rows = static_cast<std::ptrdiff_t>(d);
#pragma omp parallel for if (d >= kParallelMinDim)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    cplx* row = &rho.data[static_cast<std::size_t>(r) * d];
    for (std::size_t c = 0; c < d; ++c) {
      double f = 1.0;
      for (const auto& zs : z_sum) f *= factor[zs[static_cast<std::size_t>(r)] - zs[c] + span];
      row[c] *= f;
    }
  }
}

RawMatrix fixed_block(const RawMatrix& rho, std::span<const int> qubits, std::span<const int> bits) {
  const int n = rho.num_qubits;
  const std::vector<int> keep = complement(n, qubits);
  std::size_t offset = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (bits[i]) offset |= qubit_mask(n, qubits[i]);
  }
  const auto table = scatter_table(n, keep);
  RawMatrix out(static_cast<int>(keep.size()));
  const std::size_t od = out.dim(), d = rho.dim();
  for (std::size_t r = 0; r < od; ++r) {
    const cplx* src = &rho.data[(table[r] | offset) * d];
    for (std::size_t c = 0; c < od; ++c) out(r, c) = src[table[c] | offset];
  }
  return out;
}

RawMatrix partial_trace(const RawMatrix& rho, std::span<const int> keep) {
  const int n = rho.num_qubits;
  const std::vector<int> traced = complement(n, keep);
  const auto keep_table = scatter_table(n, keep);
  const auto traced_table = scatter_table(n, traced);
  RawMatrix out(static_cast<int>(keep.size()));
  const std::size_t od = out.dim(), d = rho.dim();
  const auto rows = static_cast<std::ptrdiff_t>(od);
#pragma omp parallel for if (d >= kParallelMinDim)
  for (std::ptrdiff_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < od; ++c) {
      cplx acc = 0.0;
      for (std::size_t t : traced_table) {
        acc += rho.data[(keep_table[static_cast<std::size_t>(r)] | t) * d + (keep_table[c] | t)];
      }
      out(static_cast<std::size_t>(r), c) = acc;
    }
  }
  return out;
}

void project(RawMatrix& rho, int q, int bit) {
  const std::size_t d = rho.dim(), m = qubit_mask(rho.num_qubits, q);
  const std::size_t keep = bit ? m : 0;
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) {
      if ((r & m) != keep || (c & m) != keep) rho(r, c) = 0.0;
    }
  }
}

RawMatrix permute_qubits(const RawMatrix& rho, std::span<const int> order) {
  const int n = rho.num_qubits;
  const auto table = scatter_table(n, order);
  RawMatrix out(n);
  const std::size_t d = rho.dim();
  for (std::size_t r = 0; r < d; ++r)
    for (std::size_t c = 0; c < d; ++c) out(r, c) = rho(table[r], table[c]);
  return out;
}

cplx trace(const RawMatrix& rho) {
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rho.dim(); ++i) acc += rho(i, i);
  return acc;
}

cplx expectation(const RawMatrix& rho, std::span<const cplx> psi) {
  cplx acc = 0.0;
  const std::size_t d = rho.dim();
  for (std::size_t r = 0; r < d; ++r) {
    if (psi[r] == 0.0) continue;
    cplx row = 0.0;
    for (std::size_t c = 0; c < d; ++c) row += rho(r, c) * psi[c];
    acc += std::conj(psi[r]) * row;
  }
  return acc;
}

}  // namespace qrep::kernels
