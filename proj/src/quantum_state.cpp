#include "varorder/quantum_state.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "varorder/error.hpp"

namespace varorder {

namespace {

void require_dim(std::size_t observable_dim, std::size_t state_dim) {
  if (observable_dim != state_dim) {
    std::ostringstream msg;
    msg << "dimension mismatch: observable " << observable_dim << " vs state " << state_dim;
    throw DimensionMismatch(msg.str());
  }
}

std::vector<Atom> finalize_atoms(std::vector<Atom> raw) {
  std::vector<Atom> kept;
  double total = 0.0;
  for (const auto& a : raw) {
    if (a.mass >= kAtomDropThreshold) {
      kept.push_back(a);
      total += a.mass;
    }
  }
  if (kept.empty()) throw InternalConsistencyError("Born measure has no mass");
  for (auto& a : kept) a.mass /= total;
  return kept;
}

}  // namespace

PureState::PureState(ComplexVector v) : v_(std::move(v)) {
  if (v_.size() == 0) throw InputError("state vector must be non-empty");
  if (!v_.allFinite()) throw InputError("state vector has non-finite entries");
  const double norm = v_.norm();
  if (std::abs(norm - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "state vector is not normalised: ||x|| = " << norm;
    throw InputError(msg.str());
  }
}

PureState PureState::normalized(const ComplexVector& v) {
  const double norm = v.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InputError("cannot normalise a zero or non-finite vector");
  }
  return PureState(v / norm);
}

PureState PureState::basis(std::size_t n, std::size_t k) {
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(n));
  v(static_cast<Eigen::Index>(k)) = 1.0;
  return PureState(std::move(v));
}

DensityState::DensityState(const ComplexMatrix& rho) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) {
    throw InputError("density matrix must be a non-empty square matrix");
  }
  if (!rho.allFinite()) throw InputError("density matrix has non-finite entries");
  const HermitianObservable h(rho);
  const double trace = h.matrix().trace().real();
  if (std::abs(trace - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "density matrix trace is " << trace << ", expected 1";
    throw InputError(msg.str());
  }
  const EigenPairs eig = jacobi_eigen(h);
  if (eig.values(0) < -1e-10) {
    std::ostringstream msg;
    msg << "density matrix is not positive: smallest eigenvalue " << eig.values(0);
    throw InputError(msg.str());
  }
  rho_ = h.matrix();
}

DensityState DensityState::from_pure(const PureState& x) { return DensityState(x.density()); }

DensityState DensityState::maximally_mixed(std::size_t n) {
  const auto k = static_cast<Eigen::Index>(n);
  return DensityState(ComplexMatrix::Identity(k, k) / static_cast<double>(n));
}

BornMeasure::BornMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  if (atoms_.empty()) throw InputError("measure must have at least one atom");
  double total = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const auto& a = atoms_[i];
    if (!std::isfinite(a.location) || !std::isfinite(a.mass)) {
      throw InputError("measure has non-finite atom");
    }
    if (a.mass < 0.0) throw InputError("measure has negative mass");
    if (i > 0 && !(a.location > atoms_[i - 1].location)) {
      throw InputError("measure atoms must have strictly increasing locations");
    }
    total += a.mass;
  }
  if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream msg;
    msg << "measure total mass is " << total << ", expected 1";
    throw InputError(msg.str());
  }
}

double BornMeasure::mean() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.mass * a.location;
  return m;
}

double BornMeasure::second_moment() const {
  double m = 0.0;
  for (const auto& a : atoms_) m += a.mass * a.location * a.location;
  return m;
}

double expectation(const HermitianObservable& a, const PureState& x) {
  require_dim(a.dim(), x.dim());
  return x.vector().dot(a.matrix() * x.vector()).real();
}

double expectation(const HermitianObservable& a, const DensityState& rho) {
  require_dim(a.dim(), rho.dim());
  return (rho.matrix() * a.matrix()).trace().real();
}

double variance(const HermitianObservable& a, const PureState& x) {
  require_dim(a.dim(), x.dim());
  const ComplexVector ax = a.matrix() * x.vector();
  const double mean = x.vector().dot(ax).real();
  return std::max(0.0, ax.squaredNorm() - mean * mean);
}

double variance(const HermitianObservable& a, const DensityState& rho) {
  require_dim(a.dim(), rho.dim());
  const ComplexMatrix ra = rho.matrix() * a.matrix();
  const double mean = ra.trace().real();
  const double second = (ra * a.matrix()).trace().real();
  return std::max(0.0, second - mean * mean);
}

BornMeasure born_measure(const SpectralDecomposition& d, const PureState& x) {
  require_dim(d.source_dim, x.dim());
  std::vector<Atom> raw;
  raw.reserve(d.groups.size());
  for (const auto& g : d.groups) {
    // <P x, x> = ||V^dagger x||^2 for P = V V^dagger
    raw.push_back({g.eigenvalue, (g.basis.adjoint() * x.vector()).squaredNorm()});
  }
  return BornMeasure(finalize_atoms(std::move(raw)));
}

BornMeasure born_measure(const SpectralDecomposition& d, const DensityState& rho) {
  require_dim(d.source_dim, rho.dim());
  std::vector<Atom> raw;
  raw.reserve(d.groups.size());
  for (const auto& g : d.groups) {
    raw.push_back({g.eigenvalue, (g.projector * rho.matrix()).trace().real()});
  }
  return BornMeasure(finalize_atoms(std::move(raw)));
}

double moment_variance(const BornMeasure& mu) {
  const double m = mu.mean();
  return mu.second_moment() - m * m;
}

double pairwise_variance(const BornMeasure& mu) {
  double s = 0.0;
  const auto& atoms = mu.atoms();
  for (const auto& t : atoms) {
    for (const auto& u : atoms) {
      const double diff = t.location - u.location;
      s += diff * diff * t.mass * u.mass;
    }
  }
  return 0.5 * s;
}

double measure_variance(const BornMeasure& mu) {
  const double moment = moment_variance(mu);
  const double pairwise = pairwise_variance(mu);
  if (std::abs(moment - pairwise) > 1e-10 * std::max(1.0, mu.second_moment())) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "variance formulas disagree: moment " << moment << " vs pairwise " << pairwise;
    throw InternalConsistencyError(msg.str());
  }
  return std::max(0.0, moment);
}

BornMeasure pushforward(const BornMeasure& mu, const std::function<double(double)>& f) {
  std::vector<Atom> image;
  image.reserve(mu.atoms().size());
  for (const auto& a : mu.atoms()) image.push_back({f(a.location), a.mass});
  std::sort(image.begin(), image.end(),
            [](const Atom& x, const Atom& y) { return x.location < y.location; });
  std::vector<Atom> merged;
  for (const auto& a : image) {
    if (!merged.empty() &&
        a.location - merged.back().location <= 1e-12 * std::max(1.0, std::abs(a.location))) {
      merged.back().mass += a.mass;
    } else {
      merged.push_back(a);
    }
  }
  return BornMeasure(std::move(merged));
}

BornMeasure pushforward(const BornMeasure& mu, const LipschitzExtension& f) {
  return pushforward(mu, [&f](double t) { return f(t); });
}

double variance_defect(const HermitianObservable& a, const PureState& x) {
  require_dim(a.dim(), x.dim());
  const double mean = expectation(a, x);
  return (a.matrix() * x.vector() - mean * x.vector()).squaredNorm();
}

Sandwich approx_eigen_sandwich(const HermitianObservable& a, const PureState& x, double lambda) {
  require_dim(a.dim(), x.dim());
  Sandwich s;
  s.defect = (a.matrix() * x.vector() - lambda * x.vector()).squaredNorm();
  s.variance = variance(a, x);
  s.mean_error = std::abs(expectation(a, x) - lambda);
  const double middle = s.variance + s.mean_error * s.mean_error;
  const double slack = 1e-10 * std::max(1.0, s.defect);
  if (0.5 * s.defect > middle + slack || middle > 2.0 * s.defect + slack) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "approximate-eigenvector sandwich violated: D=" << s.defect
        << ", Delta+err^2=" << middle;
    throw InternalConsistencyError(msg.str());
  }
  return s;
}

double superposition_variance(const HermitianObservable& a, const PureState& x,
                              const PureState& y, double alpha, double beta) {
  require_dim(a.dim(), x.dim());
  require_dim(a.dim(), y.dim());
  if (alpha == 0.0 || beta == 0.0 || !std::isfinite(alpha) || !std::isfinite(beta)) {
    throw PreconditionError("superposition coefficients must be finite and non-zero");
  }
  const double scale = std::max(1.0, a.frobenius());
  const double eig_tol = 1e-8 * scale;
  if (std::sqrt(variance_defect(a, x)) > eig_tol) {
    throw PreconditionError("first state is not an eigenvector of the observable");
  }
  if (std::sqrt(variance_defect(a, y)) > eig_tol) {
    throw PreconditionError("second state is not an eigenvector of the observable");
  }
  if (std::abs(expectation(a, x) - expectation(a, y)) <= eig_tol) {
    throw PreconditionError("eigenvectors must belong to distinct eigenvalues");
  }
  if (std::abs(x.vector().dot(y.vector())) > 1e-8) {
    throw PreconditionError("eigenvectors must be orthogonal");
  }
  const PureState z = PureState::normalized(alpha * x.vector() + beta * y.vector());
  return variance(a, z);
}

double maximal_deviation(const HermitianObservable& a) {
  const EigenPairs eig = jacobi_eigen(a);
  return 0.5 * (eig.values(eig.values.size() - 1) - eig.values(0));
}

}  // namespace varorder
