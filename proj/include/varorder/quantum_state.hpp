#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "varorder/function_table.hpp"
#include "varorder/linalg.hpp"

namespace varorder {

/// Unit vector x representing the pure state P_x. ||x|| = 1 within 1e-12.
class PureState {
 public:
  explicit PureState(ComplexVector v);
  /// Rescales any non-zero vector to unit length.
  static PureState normalized(const ComplexVector& v);
  static PureState basis(std::size_t n, std::size_t k);

  const ComplexVector& vector() const noexcept { return v_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
  ComplexMatrix density() const { return v_ * v_.adjoint(); }

 private:
  ComplexVector v_;
};

/// Positive semidefinite, trace-one matrix rho.
class DensityState {
 public:
  explicit DensityState(const ComplexMatrix& rho);
  static DensityState from_pure(const PureState& x);
  static DensityState maximally_mixed(std::size_t n);

  const ComplexMatrix& matrix() const noexcept { return rho_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }

 private:
  ComplexMatrix rho_;
};

struct Atom {
  double location = 0.0;
  double mass = 0.0;
};

/// Finitely supported probability measure on the real line.
class BornMeasure {
 public:
  /// Requires non-negative masses summing to 1 (1e-10) at strictly increasing locations.
  explicit BornMeasure(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  double mean() const;
  double second_moment() const;

 private:
  std::vector<Atom> atoms_;
};

inline constexpr double kAtomDropThreshold = 1e-14;

double expectation(const HermitianObservable& a, const PureState& x);
double expectation(const HermitianObservable& a, const DensityState& rho);

double variance(const HermitianObservable& a, const PureState& x);
double variance(const HermitianObservable& a, const DensityState& rho);

/// Atoms at the spectral groups of D with masses Tr(P_j rho). Atoms lighter than
/// 1e-14 are dropped and the rest renormalised.
BornMeasure born_measure(const SpectralDecomposition& d, const PureState& x);
BornMeasure born_measure(const SpectralDecomposition& d, const DensityState& rho);

/// sum p t^2 - (sum p t)^2
double moment_variance(const BornMeasure& mu);
/// 1/2 sum_{s,t} (t - s)^2 p_t p_s
double pairwise_variance(const BornMeasure& mu);

/// Moment-formula variance, cross-checked against the pairwise formula.
/// Throws InternalConsistencyError if they differ by more than 1e-10 * max(1, E[t^2]).
double measure_variance(const BornMeasure& mu);

/// Image measure f_* mu; atoms landing on the same value are merged.
BornMeasure pushforward(const BornMeasure& mu, const std::function<double(double)>& f);
BornMeasure pushforward(const BornMeasure& mu, const LipschitzExtension& f);

/// ||Ax - E_x(A) x||^2
double variance_defect(const HermitianObservable& a, const PureState& x);

struct Sandwich {
  double defect = 0.0;      // ||Ax - lambda x||^2
  double variance = 0.0;    // Delta_x(A)
  double mean_error = 0.0;  // |E_x(A) - lambda|
};

/// Computes the three quantities and checks
///   defect/2 <= variance + mean_error^2 <= 2 defect
/// to within 1e-10 * max(1, defect); throws InternalConsistencyError otherwise.
Sandwich approx_eigen_sandwich(const HermitianObservable& a, const PureState& x, double lambda);

/// Variance of z = (alpha x + beta y)/||alpha x + beta y|| for orthogonal eigenvectors
/// x, y of A with distinct eigenvalues. Computed from z itself, not the closed form.
double superposition_variance(const HermitianObservable& a, const PureState& x,
                              const PureState& y, double alpha, double beta);

/// sup_x sqrt(Delta_x(A)) = (lambda_max - lambda_min) / 2
double maximal_deviation(const HermitianObservable& a);

}  // namespace varorder
