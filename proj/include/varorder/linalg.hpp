#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <vector>

#include "varorder/function_table.hpp"

namespace varorder {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

double frobenius_norm(const ComplexMatrix& m);
double max_abs_entry(const ComplexMatrix& m);

/// Self-adjoint n x n matrix. Construction rejects non-square, non-finite or
/// non-Hermitian input (tolerance 1e-10 * max(1, max|m_ij|)); the stored
/// matrix is the exact Hermitian part of the input.
class HermitianObservable {
 public:
  explicit HermitianObservable(const ComplexMatrix& m);

  static HermitianObservable identity(std::size_t n);
  static HermitianObservable diagonal(const std::vector<double>& d);
  static double hermitian_tolerance(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(m_.rows()); }
  double frobenius() const { return frobenius_norm(m_); }

  HermitianObservable operator+(const HermitianObservable& o) const;
  HermitianObservable operator-(const HermitianObservable& o) const;
  HermitianObservable operator-() const;
  HermitianObservable scaled(double a) const;
  HermitianObservable shifted(double c) const;  // A + cI

 private:
  struct Trusted {};
  HermitianObservable(ComplexMatrix m, Trusted) : m_(std::move(m)) {}
  ComplexMatrix m_;
};

/// Raw output of the Jacobi solver: ascending eigenvalues with matching
/// orthonormal eigenvector columns.
struct EigenPairs {
  Eigen::VectorXd values;
  ComplexMatrix vectors;
  int sweeps = 0;
};

inline constexpr int kJacobiMaxSweeps = 100;
inline constexpr double kJacobiRelThreshold = 1e-12;

/// Cyclic complex Jacobi rotations. Throws ConvergenceError with the final
/// off-diagonal Frobenius norm when the sweep cap is exhausted.
EigenPairs jacobi_eigen(const HermitianObservable& a);

struct SpectralGroup {
  double eigenvalue = 0.0;
  ComplexMatrix projector;  // n x n orthogonal projector onto the eigenspace
  ComplexMatrix basis;      // n x rank, orthonormal eigenvector columns
  std::size_t rank() const noexcept { return static_cast<std::size_t>(basis.cols()); }
};

struct SpectralDecomposition {
  std::vector<SpectralGroup> groups;  // strictly ascending eigenvalues
  std::size_t source_dim = 0;
  double group_tol = 0.0;

  std::vector<double> eigenvalues() const;
  double min_eigenvalue() const { return groups.front().eigenvalue; }
  double max_eigenvalue() const { return groups.back().eigenvalue; }
  double diameter() const { return max_eigenvalue() - min_eigenvalue(); }
  /// sum_j lambda_j P_j
  ComplexMatrix reconstruct() const;
};

/// 1e-8 * max(1, ||A||_F)
double default_group_tol(const HermitianObservable& a);

/// Eigenvalues that chain within `group_tol` of their neighbour are merged into one
/// group carrying the mean eigenvalue and the summed projector. Negative tol selects
/// the default.
SpectralDecomposition eigendecompose(const HermitianObservable& a, double group_tol = -1.0);

/// sum_j f(lambda_j) P_j. Throws DomainError naming the first eigenvalue not in f.
HermitianObservable apply_function(const SpectralDecomposition& d, const FunctionTable& f);

/// ||AB - BA||_F
double commutator_norm(const HermitianObservable& a, const HermitianObservable& b);

/// True iff the smallest eigenvalue of B - A is >= -tol.
bool loewner_leq(const HermitianObservable& a, const HermitianObservable& b, double tol);

/// Largest |eigenvalue|, i.e. the operator norm of a Hermitian matrix.
double spectral_norm(const HermitianObservable& a);

/// U^dagger U = I within 1e-10 * n. With `antiunitary` set the induced
/// action on observables is X -> U conj(X) U^dagger.
class UnitaryMap {
 public:
  UnitaryMap(ComplexMatrix u, bool antiunitary);

  static UnitaryMap identity(std::size_t n);

  const ComplexMatrix& matrix() const noexcept { return u_; }
  bool antiunitary() const noexcept { return antiunitary_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(u_.rows()); }

  HermitianObservable conjugate(const HermitianObservable& x) const;

 private:
  ComplexMatrix u_;
  bool antiunitary_;
};

void require_same_dim(const HermitianObservable& a, const HermitianObservable& b);

}  // namespace varorder
