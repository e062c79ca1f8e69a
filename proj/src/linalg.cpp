#include "varorder/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "varorder/error.hpp"

namespace varorder {

double frobenius_norm(const ComplexMatrix& m) { return m.norm(); }

double max_abs_entry(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double HermitianObservable::hermitian_tolerance(const ComplexMatrix& m) {
  return 1e-10 * std::max(1.0, max_abs_entry(m));
}

HermitianObservable::HermitianObservable(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("observable must be a square matrix");
  if (m.rows() == 0) throw InputError("observable must have positive dimension");
  if (!m.allFinite()) throw InputError("observable has non-finite entries");
  const double asym = max_abs_entry(m - m.adjoint());
  if (asym > hermitian_tolerance(m)) {
    std::ostringstream msg;
    msg << "matrix is not Hermitian: max|M - M^dagger| = " << asym;
    throw InputError(msg.str());
  }
  m_ = (m + m.adjoint()) * 0.5;
}

HermitianObservable HermitianObservable::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return HermitianObservable(ComplexMatrix::Identity(k, k));
}

HermitianObservable HermitianObservable::diagonal(const std::vector<double>& d) {
  const auto k = static_cast<Eigen::Index>(d.size());
  ComplexMatrix m = ComplexMatrix::Zero(k, k);
  for (Eigen::Index i = 0; i < k; ++i) m(i, i) = d[static_cast<std::size_t>(i)];
  return HermitianObservable(m);
}

HermitianObservable HermitianObservable::operator+(const HermitianObservable& o) const {
  require_same_dim(*this, o);
  return HermitianObservable(ComplexMatrix(m_ + o.m_), Trusted{});
}

HermitianObservable HermitianObservable::operator-(const HermitianObservable& o) const {
  require_same_dim(*this, o);
  return HermitianObservable(ComplexMatrix(m_ - o.m_), Trusted{});
}

HermitianObservable HermitianObservable::operator-() const {
  return HermitianObservable(ComplexMatrix(-m_), Trusted{});
}

HermitianObservable HermitianObservable::scaled(double a) const {
  return HermitianObservable(ComplexMatrix(a * m_), Trusted{});
}

HermitianObservable HermitianObservable::shifted(double c) const {
  ComplexMatrix m = m_;
  m.diagonal().array() += c;
  return HermitianObservable(std::move(m), Trusted{});
}

void require_same_dim(const HermitianObservable& a, const HermitianObservable& b) {
  if (a.dim() != b.dim()) {
    std::ostringstream msg;
    msg << "dimension mismatch: " << a.dim() << " vs " << b.dim();
    throw DimensionMismatch(msg.str());
  }
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) s += std::norm(a(i, j));
    }
  }
  return std::sqrt(s);
}

// Annihilates a(p,q) with the unitary V = diag(1, e^{-i phi}) * R(theta) acting on
// columns p and q, where a(p,q) = g e^{i phi}. Updates a <- V^dagger a V, v <- v V.
void rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex z = a(p, q);
  const double g = std::abs(z);
  if (g == 0.0) return;
  const Complex phase_conj = std::conj(z / g);
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double tau = (aqq - app) / (2.0 * g);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::hypot(1.0, tau));
  const double c = 1.0 / std::hypot(1.0, t);
  const double s = t * c;

  const Complex vpp = c;
  const Complex vpq = s;
  const Complex vqp = -s * phase_conj;
  const Complex vqq = c * phase_conj;

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * vpp + akq * vqp;
    a(k, q) = akp * vpq + akq * vqq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(vpp) * apk + std::conj(vqp) * aqk;
    a(q, k) = std::conj(vpq) * apk + std::conj(vqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = app - t * g;
  a(q, q) = aqq + t * g;

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * vpp + vkq * vqp;
    v(k, q) = vkp * vpq + vkq * vqq;
  }
}

}  // namespace

EigenPairs jacobi_eigen(const HermitianObservable& obs) {
  ComplexMatrix a = obs.matrix();
  const Eigen::Index n = a.rows();
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double threshold = kJacobiRelThreshold * frobenius_norm(a);

  int sweeps = 0;
  double off = off_diagonal_norm(a);
  while (off > threshold) {
    if (sweeps == kJacobiMaxSweeps) {
      std::ostringstream msg;
      msg << "Jacobi eigensolver did not converge after " << sweeps
          << " sweeps; off-diagonal norm " << off;
      throw ConvergenceError(msg.str(), off);
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) rotate(a, v, p, q);
    }
    ++sweeps;
    off = off_diagonal_norm(a);
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return a(i, i).real() < a(j, j).real();
  });

  EigenPairs out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweeps;
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

std::vector<double> SpectralDecomposition::eigenvalues() const {
  std::vector<double> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back(g.eigenvalue);
  return out;
}

ComplexMatrix SpectralDecomposition::reconstruct() const {
  const auto n = static_cast<Eigen::Index>(source_dim);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (const auto& g : groups) m += g.eigenvalue * g.projector;
  return m;
}

double default_group_tol(const HermitianObservable& a) {
  return 1e-8 * std::max(1.0, a.frobenius());
}

SpectralDecomposition eigendecompose(const HermitianObservable& a, double group_tol) {
  if (group_tol < 0.0) group_tol = default_group_tol(a);
  const EigenPairs eig = jacobi_eigen(a);
  const Eigen::Index n = eig.values.size();

  SpectralDecomposition d;
  d.source_dim = a.dim();
  d.group_tol = group_tol;

  Eigen::Index start = 0;
  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && eig.values(end) - eig.values(end - 1) <= group_tol) ++end;
    SpectralGroup g;
    g.eigenvalue = eig.values.segment(start, end - start).mean();
    g.basis = eig.vectors.middleCols(start, end - start);
    g.projector = g.basis * g.basis.adjoint();
    d.groups.push_back(std::move(g));
    start = end;
  }
  return d;
}

HermitianObservable apply_function(const SpectralDecomposition& d, const FunctionTable& f) {
  const auto n = static_cast<Eigen::Index>(d.source_dim);
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  for (const auto& g : d.groups) {
    const double match_tol = std::max(d.group_tol, 1e-12 * std::max(1.0, std::abs(g.eigenvalue)));
    const auto value = f.value_at(g.eigenvalue, match_tol);
    if (!value) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "function undefined at eigenvalue " << g.eigenvalue;
      throw DomainError(msg.str());
    }
    m += *value * g.projector;
  }
  return HermitianObservable(m);
}

double commutator_norm(const HermitianObservable& a, const HermitianObservable& b) {
  require_same_dim(a, b);
  return frobenius_norm(a.matrix() * b.matrix() - b.matrix() * a.matrix());
}

bool loewner_leq(const HermitianObservable& a, const HermitianObservable& b, double tol) {
  const EigenPairs eig = jacobi_eigen(b - a);
  return eig.values(0) >= -tol;
}

double spectral_norm(const HermitianObservable& a) {
  const EigenPairs eig = jacobi_eigen(a);
  return std::max(std::abs(eig.values(0)), std::abs(eig.values(eig.values.size() - 1)));
}

UnitaryMap::UnitaryMap(ComplexMatrix u, bool antiunitary)
    : u_(std::move(u)), antiunitary_(antiunitary) {
  if (u_.rows() != u_.cols() || u_.rows() == 0) {
    throw InputError("unitary must be a non-empty square matrix");
  }
  if (!u_.allFinite()) throw InputError("unitary has non-finite entries");
  const auto n = u_.rows();
  const double defect = max_abs_entry(u_.adjoint() * u_ - ComplexMatrix::Identity(n, n));
  if (defect > 1e-10 * static_cast<double>(n)) {
    std::ostringstream msg;
    msg << "matrix is not unitary: max|U^dagger U - I| = " << defect;
    throw InputError(msg.str());
  }
}

UnitaryMap UnitaryMap::identity(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return UnitaryMap(ComplexMatrix::Identity(k, k), false);
}

HermitianObservable UnitaryMap::conjugate(const HermitianObservable& x) const {
  if (x.dim() != dim()) {
    std::ostringstream msg;
    msg << "dimension mismatch: unitary " << dim() << " vs observable " << x.dim();
    throw DimensionMismatch(msg.str());
  }
  const ComplexMatrix src = antiunitary_ ? ComplexMatrix(x.matrix().conjugate()) : x.matrix();
  return HermitianObservable(ComplexMatrix(u_ * src * u_.adjoint()));
}

}  // namespace varorder
