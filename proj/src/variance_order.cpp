#include "varorder/variance_order.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "varorder/sampling.hpp"

namespace varorder {

const char* to_string(Violation v) {
  switch (v) {
    case Violation::kNotReducing:
      return "not-reducing";
    case Violation::kNotScalar:
      return "not-scalar";
    case Violation::kLipschitzGap:
      return "lipschitz-gap";
  }
  return "unknown";
}

double default_order_tol(const HermitianObservable& a, const HermitianObservable& b) {
  return 1e-8 * std::max({1.0, a.frobenius(), b.frobenius()});
}

double order_gap(const HermitianObservable& a, const HermitianObservable& b,
                 const PureState& x) {
  return variance(a, x) - variance(b, x);
}

namespace {

struct Candidate {
  PureState state;
  double margin;
};

// Best witness inside the eigenspace spanned by `basis` (columns, orthonormal).
Candidate eigenspace_witness(const HermitianObservable& a, const HermitianObservable& b,
                             const ComplexMatrix& basis) {
  std::optional<Candidate> best;
  for (Eigen::Index i = 0; i < basis.cols(); ++i) {
    PureState x = PureState::normalized(basis.col(i));
    const double m = order_gap(a, b, x);
    if (!best || m > best->margin) best = Candidate{std::move(x), m};
  }
  if (best->margin > kFailMarginTol || basis.cols() < 2) return *best;

  // Every basis vector is (numerically) an eigenvector of A: mix the extreme
  // eigenvectors of the compression V^dagger A V instead.
  const HermitianObservable compressed(ComplexMatrix(basis.adjoint() * a.matrix() * basis));
  const EigenPairs eig = jacobi_eigen(compressed);
  const Eigen::Index last = eig.vectors.cols() - 1;
  const ComplexVector mix = basis * (eig.vectors.col(0) + eig.vectors.col(last));
  PureState y = PureState::normalized(mix);
  const double m = order_gap(a, b, y);
  if (m > best->margin) best = Candidate{std::move(y), m};
  return *best;
}

OrderVerdict failed(Candidate c, double tol, Violation why, std::vector<double> eigenvalues) {
  if (!(c.margin > kFailMarginTol)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "order check failed (" << to_string(why)
        << ") but the witness margin is only " << c.margin;
    throw InternalConsistencyError(msg.str());
  }
  OrderVerdict v;
  v.holds = false;
  v.witness = std::move(c.state);
  v.margin = c.margin;
  v.tol = tol;
  v.violation = why;
  v.violating_eigenvalues = std::move(eigenvalues);
  return v;
}

}  // namespace

OrderVerdict decide_order(const HermitianObservable& a, const HermitianObservable& b,
                          double tol) {
  require_same_dim(a, b);
  if (tol < 0.0) tol = default_order_tol(a, b);
  const SpectralDecomposition db = eigendecompose(b);
  const ComplexMatrix& am = a.matrix();

  std::vector<double> values;
  values.reserve(db.groups.size());
  for (const auto& g : db.groups) {
    const ComplexMatrix& p = g.projector;
    const double comm = frobenius_norm(p * am - am * p);
    const ComplexMatrix compressed = p * am * p;
    const double value = compressed.trace().real() / static_cast<double>(g.rank());
    const double scalar_defect = frobenius_norm(compressed - value * p);
    if (comm > tol || scalar_defect > tol) {
      return failed(eigenspace_witness(a, b, g.basis), tol,
                    comm > tol ? Violation::kNotReducing : Violation::kNotScalar,
                    {g.eigenvalue});
    }
    values.push_back(value);
  }

  const auto& groups = db.groups;
  std::optional<std::pair<std::size_t, std::size_t>> worst;
  double worst_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < groups.size(); ++j) {
    for (std::size_t k = j + 1; k < groups.size(); ++k) {
      const double df = std::abs(values[j] - values[k]);
      const double dl = groups[k].eigenvalue - groups[j].eigenvalue;
      if (df > dl + tol) {
        const double excess = 0.25 * (df * df - dl * dl);
        if (excess > worst_excess) {
          worst_excess = excess;
          worst = std::make_pair(j, k);
        }
      }
    }
  }
  if (worst) {
    const auto [j, k] = *worst;
    PureState y = PureState::normalized(
        (groups[j].basis.col(0) + groups[k].basis.col(0)) / std::sqrt(2.0));
    const double m = order_gap(a, b, y);
    return failed(Candidate{std::move(y), m}, tol, Violation::kLipschitzGap,
                  {groups[j].eigenvalue, groups[k].eigenvalue});
  }

  std::vector<TablePoint> pts;
  pts.reserve(groups.size());
  for (std::size_t j = 0; j < groups.size(); ++j) pts.push_back({groups[j].eigenvalue, values[j]});
  OrderVerdict v;
  v.holds = true;
  v.certificate = FunctionTable(std::move(pts));
  v.tol = tol;
  return v;
}

namespace {

// Objective and its Euclidean gradient for Delta_x(A) - Delta_x(B).
struct GapObjective {
  const ComplexMatrix& a;
  const ComplexMatrix& b;

  double value(const ComplexVector& x) const {
    const ComplexVector ax = a * x;
    const ComplexVector bx = b * x;
    const double ea = x.dot(ax).real();
    const double eb = x.dot(bx).real();
    return (ax.squaredNorm() - ea * ea) - (bx.squaredNorm() - eb * eb);
  }

  // 2(A^2 - 2E_x(A)A)x - 2(B^2 - 2E_x(B)B)x
  ComplexVector gradient(const ComplexVector& x) const {
    const ComplexVector ax = a * x;
    const ComplexVector bx = b * x;
    const double ea = x.dot(ax).real();
    const double eb = x.dot(bx).real();
    return 2.0 * (a * ax - 2.0 * ea * ax) - 2.0 * (b * bx - 2.0 * eb * bx);
  }
};

}  // namespace

OracleResult witness_search(const HermitianObservable& a, const HermitianObservable& b,
                            const OracleConfig& cfg) {
  require_same_dim(a, b);
  if (cfg.restarts < 1) throw InputError("witness_search needs at least one restart");
  const GapObjective obj{a.matrix(), b.matrix()};
  const std::size_t n = a.dim();

  std::optional<OracleResult> best;
  for (int r = 0; r < cfg.restarts; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    Rng rng(seq);
    ComplexVector x = random_pure_state(n, rng).vector();
    double fx = obj.value(x);

    for (int step = 0; step < cfg.steps; ++step) {
      ComplexVector g = obj.gradient(x);
      g -= x.dot(g).real() * x;  // tangent space of the sphere
      if (g.norm() < cfg.grad_tol) break;
      double s = cfg.initial_step;
      bool improved = false;
      for (int h = 0; h < cfg.max_halvings; ++h, s *= 0.5) {
        ComplexVector trial = x + s * g;
        trial.normalize();
        const double ft = obj.value(trial);
        if (ft > fx) {
          x = std::move(trial);
          fx = ft;
          improved = true;
          break;
        }
      }
      if (!improved) break;
    }

    if (!best || fx > best->best_value) {
      best = OracleResult{PureState::normalized(x), fx, r};
    }
  }
  return *best;
}

FunctionTable extract_function(const HermitianObservable& a, const HermitianObservable& b,
                               double tol) {
  OrderVerdict v = decide_order(a, b, tol);
  if (!v.holds) {
    std::ostringstream msg;
    msg << "observable is not a 1-Lipschitz function of the reference ("
        << to_string(*v.violation) << ", margin " << v.margin << ")";
    throw OrderDoesNotHold(msg.str(), std::move(*v.witness), v.margin);
  }
  return std::move(*v.certificate);
}

namespace {

bool scalar_within(const ComplexMatrix& m, double tol) {
  const auto n = m.rows();
  const double c = m.trace().real() / static_cast<double>(n);
  return frobenius_norm(m - c * ComplexMatrix::Identity(n, n)) <= tol;
}

}  // namespace

bool class_equal(const HermitianObservable& a, const HermitianObservable& b, double tol) {
  require_same_dim(a, b);
  if (tol < 0.0) tol = default_order_tol(a, b);
  return scalar_within(b.matrix() - a.matrix(), tol) ||
         scalar_within(b.matrix() + a.matrix(), tol);
}

HermitianObservable canonical_representative(const HermitianObservable& a) {
  const SpectralDecomposition d = eigendecompose(a);
  const double lo = d.min_eigenvalue();
  const double hi = d.max_eigenvalue();
  const std::size_t m = d.groups.size();

  // Compare (l_j - lo, r_j) ascending against (hi - l_{m-1-j}, r_{m-1-j}).
  bool reflected_smaller = false;
  bool decided = false;
  for (std::size_t j = 0; j < m && !decided; ++j) {
    const auto& up = d.groups[j];
    const auto& down = d.groups[m - 1 - j];
    const double ev_up = up.eigenvalue - lo;
    const double ev_down = hi - down.eigenvalue;
    if (std::abs(ev_up - ev_down) > d.group_tol) {
      reflected_smaller = ev_down < ev_up;
      decided = true;
    } else if (up.rank() != down.rank()) {
      reflected_smaller = down.rank() < up.rank();
      decided = true;
    }
  }
  const HermitianObservable lifted = a.shifted(-lo);
  const HermitianObservable reflected = (-a).shifted(hi);
  if (decided) return reflected_smaller ? reflected : lifted;

  // Symmetric spectrum: order the two matrices entrywise, row-major, real part first.
  const ComplexMatrix& x = lifted.matrix();
  const ComplexMatrix& y = reflected.matrix();
  const double tol = 1e-9 * std::max(1.0, a.frobenius());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      for (const auto& [u, v] : {std::pair{x(r, c).real(), y(r, c).real()},
                                std::pair{x(r, c).imag(), y(r, c).imag()}}) {
        if (std::abs(u - v) > tol) return v < u ? reflected : lifted;
      }
    }
  }
  return lifted;
}

StateOrderCheck check_state_order(const HermitianObservable& a, const HermitianObservable& b,
                                  std::size_t trials, std::uint64_t seed, double tol) {
  require_same_dim(a, b);
  Rng rng(seed);
  StateOrderCheck out;
  out.trials = trials;
  out.worst_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < trials; ++t) {
    DensityState rho = random_density(a.dim(), rng);
    const double gap = variance(a, rho) - variance(b, rho);
    if (gap > out.worst_gap) {
      out.worst_gap = gap;
      if (gap > tol) out.worst_state = rho;
    }
  }
  out.holds = !(out.worst_gap > tol);
  return out;
}

}  // namespace varorder
