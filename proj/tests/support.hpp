#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "varorder/linalg.hpp"
#include "varorder/quantum_state.hpp"

namespace testing {

using varorder::Complex;
using varorder::ComplexMatrix;
using varorder::ComplexVector;
using varorder::HermitianObservable;
using varorder::PureState;

inline const Complex kI{0.0, 1.0};

inline HermitianObservable diag(std::vector<double> d) {
  return HermitianObservable::diagonal(d);
}

inline HermitianObservable pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return HermitianObservable(m);
}

inline HermitianObservable pauli_z() { return diag({1.0, -1.0}); }

inline PureState vec(std::vector<Complex> entries) {
  ComplexVector v(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) v(static_cast<Eigen::Index>(i)) = entries[i];
  return PureState::normalized(v);
}

// Oracles below use only Eigen and textbook formulas.

inline double oracle_variance(const ComplexMatrix& a, const ComplexMatrix& rho) {
  const double e = (rho * a).trace().real();
  return (rho * a * a).trace().real() - e * e;
}

inline double oracle_variance(const ComplexMatrix& a, const ComplexVector& x) {
  return oracle_variance(a, ComplexMatrix(x * x.adjoint()));
}

inline Eigen::VectorXd oracle_eigenvalues(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(a);
  return es.eigenvalues();
}

inline ComplexMatrix diag_matrix(const std::vector<double>& d) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.size()),
                                        static_cast<Eigen::Index>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
  return m;
}

inline ComplexMatrix gaussian(Eigen::Index n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  ComplexMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline ComplexMatrix oracle_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::HouseholderQR<ComplexMatrix> qr(gaussian(n, rng));
  return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

// Largest sampled Delta_x(A) - Delta_x(B) over random unit vectors.
inline double sampled_gap(const ComplexMatrix& a, const ComplexMatrix& b, int samples,
                          std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  double best = -1e300;
  const Eigen::Index n = a.rows();
  for (int s = 0; s < samples; ++s) {
    ComplexVector x(n);
    for (Eigen::Index i = 0; i < n; ++i) x(i) = Complex(g(rng), g(rng));
    x.normalize();
    best = std::max(best, oracle_variance(a, x) - oracle_variance(b, x));
  }
  return best;
}

}  // namespace testing
