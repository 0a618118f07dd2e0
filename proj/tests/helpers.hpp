#pragma once

#include <Eigen/Dense>
#include <random>

#include "qrep/oracles.hpp"
#include "qrep/state.hpp"

namespace qrep::testing {

inline double max_diff(const RawMatrix& a, const RawMatrix& b) {
  double m = 0.0;
  for (std::size_t k = 0; k < a.data.size(); ++k) m = std::max(m, std::abs(a.data[k] - b.data[k]));
  return m;
}

inline QuantumState random_state(int n, std::mt19937_64& rng) {
  return QuantumState::unchecked(oracles::random_density(n, rng));
}

// Haar-ish random unitary from the QR factor of a complex Gaussian matrix.
template <std::size_t D>
std::array<cplx, D * D> random_unitary(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::MatrixXcd g(static_cast<Eigen::Index>(D), static_cast<Eigen::Index>(D));
  for (Eigen::Index r = 0; r < g.rows(); ++r)
    for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  const Eigen::MatrixXcd q = qr.householderQ();
  std::array<cplx, D * D> out{};
  for (std::size_t r = 0; r < D; ++r)
    for (std::size_t c = 0; c < D; ++c) out[r * D + c] = q(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  return out;
}

inline std::vector<double> eigenvalues(const QuantumState& s) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(s.dim()), static_cast<Eigen::Index>(s.dim()));
  for (std::size_t r = 0; r < s.dim(); ++r)
    for (std::size_t c = 0; c < s.dim(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = s(r, c);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

inline double trace_deviation(const QuantumState& s) {
  cplx t = 0.0;
  for (std::size_t k = 0; k < s.dim(); ++k) t += s(k, k);
  return std::abs(t - 1.0);
}

inline double hermiticity_deviation(const QuantumState& s) {
  double m = 0.0;
  for (std::size_t r = 0; r < s.dim(); ++r)
    for (std::size_t c = 0; c < s.dim(); ++c) m = std::max(m, std::abs(s(r, c) - std::conj(s(c, r))));
  return m;
}

}  // namespace qrep::testing
