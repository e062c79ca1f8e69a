#include "varorder/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "varorder/error.hpp"

namespace varorder {

ComplexMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < g.cols(); ++j) {
    for (Eigen::Index i = 0; i < g.rows(); ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  }
  return g;
}

HermitianObservable random_hermitian(std::size_t n, Rng& rng) {
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  return HermitianObservable(ComplexMatrix((g + g.adjoint()) * 0.5));
}

ComplexMatrix random_unitary(std::size_t n, Rng& rng) {
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < q.cols(); ++k) {
    const Complex d = r(k, k);
    const double mag = std::abs(d);
    if (mag > 0.0) q.col(k) *= d / mag;
  }
  return q;
}

ComplexMatrix random_permutation_unitary(std::size_t n, Rng& rng) {
  std::vector<Eigen::Index> perm(n);
  std::iota(perm.begin(), perm.end(), Eigen::Index{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto k = static_cast<Eigen::Index>(n);
  ComplexMatrix p = ComplexMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) p(perm[static_cast<std::size_t>(i)], i) = 1.0;
  return p;
}

PureState random_pure_state(std::size_t n, Rng& rng) {
  return PureState::normalized(random_gaussian_matrix(n, 1, rng).col(0));
}

DensityState random_density(std::size_t n, Rng& rng) {
  const ComplexMatrix g = random_gaussian_matrix(n, n, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityState(rho);
}

std::vector<double> random_spectrum(std::size_t n, double lo, double hi, double min_gap,
                                    Rng& rng) {
  const double slack = (hi - lo) - min_gap * static_cast<double>(n > 0 ? n - 1 : 0);
  if (n == 0 || slack < 0.0) throw InputError("random_spectrum: infeasible gap constraint");
  // Sorted uniform points in [0, slack], then spread out by the mandatory gaps.
  std::uniform_real_distribution<double> unif(0.0, slack);
  std::vector<double> pts(n);
  for (auto& p : pts) p = unif(rng);
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 0; i < n; ++i) pts[i] = lo + pts[i] + min_gap * static_cast<double>(i);
  return pts;
}

FunctionTable random_lipschitz_table(const std::vector<double>& xs, double max_slope, Rng& rng) {
  std::uniform_real_distribution<double> start(-1.0, 1.0);
  std::uniform_real_distribution<double> slope(-max_slope, max_slope);
  std::vector<TablePoint> pts;
  pts.reserve(xs.size());
  double value = start(rng);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i > 0) value += slope(rng) * (xs[i] - xs[i - 1]);
    pts.push_back({xs[i], value});
  }
  return FunctionTable(std::move(pts));
}

HermitianObservable observable_in_basis(const ComplexMatrix& u,
                                        const std::vector<double>& eigenvalues) {
  Eigen::VectorXcd d(static_cast<Eigen::Index>(eigenvalues.size()));
  for (std::size_t i = 0; i < eigenvalues.size(); ++i) d(static_cast<Eigen::Index>(i)) = eigenvalues[i];
  return HermitianObservable(ComplexMatrix(u * d.asDiagonal() * u.adjoint()));
}

}  // namespace varorder
