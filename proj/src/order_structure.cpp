#include "varorder/order_structure.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "varorder/error.hpp"
#include "varorder/sampling.hpp"
#include "varorder/variance_order.hpp"

namespace varorder {

namespace {

double block_norm(const SpectralGroup& g, const HermitianObservable& b) {
  const HermitianObservable block(ComplexMatrix(g.basis.adjoint() * b.matrix() * g.basis));
  return spectral_norm(block);
}

// sum_j (P_j X P_j + j beta P_j) over the eigenprojectors of `d`.
JointUpperBound block_construction(const SpectralDecomposition& d, const HermitianObservable& x) {
  double tau = 0.0;
  for (const auto& g : d.groups) tau = std::max(tau, block_norm(g, x));
  const double beta = 4.0 * tau + d.diameter() + 1.0;
  const auto n = static_cast<Eigen::Index>(d.source_dim);
  ComplexMatrix c = ComplexMatrix::Zero(n, n);
  for (std::size_t j = 0; j < d.groups.size(); ++j) {
    const ComplexMatrix& p = d.groups[j].projector;
    c += p * x.matrix() * p + static_cast<double>(j + 1) * beta * p;
  }
  return JointUpperBound{HermitianObservable(c), tau, beta};
}

}  // namespace

JointUpperBound joint_upper_bound(const HermitianObservable& a, const HermitianObservable& b,
                                  double tol) {
  require_same_dim(a, b);
  if (tol < 0.0) tol = default_order_tol(a, b);
  const double comm = commutator_norm(a, b);
  if (comm > tol) {
    std::ostringstream msg;
    msg << "observables do not commute: ||AB - BA||_F = " << comm;
    throw PreconditionError(msg.str());
  }
  return block_construction(eigendecompose(a), b);
}

std::vector<HermitianObservable> upper_bound_candidates(const HermitianObservable& a,
                                                        const HermitianObservable& b) {
  require_same_dim(a, b);
  std::vector<HermitianObservable> out{a,
                                       b,
                                       a + b,
                                       a - b,
                                       a.scaled(2.0) + b,
                                       a + b.scaled(2.0)};
  out.push_back(block_construction(eigendecompose(a), b).bound);
  out.push_back(block_construction(eigendecompose(b), a).bound);
  return out;
}

// ---------------------------------------------------------------------------

std::vector<TwoPointFamily> two_point_lower_set(const HermitianObservable& a) {
  const SpectralDecomposition d = eigendecompose(a);
  const std::size_t m = d.groups.size();
  if (m < 2) throw PreconditionError("two-point lower set needs at least two eigenvalues");
  if (m > 24) throw PreconditionError("two-point lower set: too many distinct eigenvalues");

  std::vector<TwoPointFamily> out;
  const std::uint64_t full = (std::uint64_t{1} << m) - 1;
  for (std::uint64_t mask = 1; mask < full; ++mask) {
    const std::uint64_t complement = full & ~mask;
    const int size = std::popcount(mask);
    const int csize = std::popcount(complement);
    // Keep the smaller side; on equal size keep the side containing group 0.
    if (size > csize || (size == csize && (mask & 1u) == 0)) continue;

    TwoPointFamily fam;
    fam.projector = ComplexMatrix::Zero(static_cast<Eigen::Index>(d.source_dim),
                                        static_cast<Eigen::Index>(d.source_dim));
    fam.threshold = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < m; ++j) {
      if ((mask >> j) & 1u) {
        fam.groups.push_back(j);
        fam.subset.push_back(d.groups[j].eigenvalue);
        fam.projector += d.groups[j].projector;
        for (std::size_t k = 0; k < m; ++k) {
          if (((mask >> k) & 1u) == 0) {
            fam.threshold = std::min(fam.threshold,
                                     std::abs(d.groups[j].eigenvalue - d.groups[k].eigenvalue));
          }
        }
      }
    }
    out.push_back(std::move(fam));
  }
  // Deterministic order: by size, then lexicographically by group indices.
  std::sort(out.begin(), out.end(), [](const TwoPointFamily& x, const TwoPointFamily& y) {
    if (x.groups.size() != y.groups.size()) return x.groups.size() < y.groups.size();
    return x.groups < y.groups;
  });
  return out;
}

std::optional<TwoPointMatch> match_two_point(const std::vector<TwoPointFamily>& families,
                                             const HermitianObservable& b, double tol) {
  if (families.empty()) return std::nullopt;
  if (tol < 0.0) tol = 1e-8 * std::max(1.0, b.frobenius());
  const SpectralDecomposition d = eigendecompose(b);
  if (d.groups.size() == 1) return TwoPointMatch{0, 0.0};
  if (d.groups.size() > 2) return std::nullopt;

  const ComplexMatrix& top = d.groups[1].projector;
  const double t = d.diameter();
  const auto n = top.rows();
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (std::size_t i = 0; i < families.size(); ++i) {
    const auto& fam = families[i];
    if (fam.projector.rows() != n) throw DimensionMismatch("two-point family dimension mismatch");
    const bool same = frobenius_norm(fam.projector - top) <= tol ||
                      frobenius_norm(id - fam.projector - top) <= tol;
    if (same && t <= fam.threshold + tol) return TwoPointMatch{i, t};
  }
  return std::nullopt;
}

std::vector<HermitianObservable> three_point_correspondents(const HermitianObservable& a,
                                                            double tol) {
  const SpectralDecomposition d = eigendecompose(a);
  if (d.groups.size() != 3) {
    throw PreconditionError("three-point correspondence needs exactly three eigenvalues");
  }
  if (tol < 0.0) tol = 1e-8 * std::max(1.0, a.frobenius());
  const auto ev = d.eigenvalues();
  // Threshold of the singleton {j}: distance to the nearest other eigenvalue.
  std::array<double, 3> thr{};
  for (std::size_t j = 0; j < 3; ++j) {
    thr[j] = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < 3; ++k) {
      if (k != j) thr[j] = std::min(thr[j], std::abs(ev[j] - ev[k]));
    }
  }

  std::vector<HermitianObservable> out;
  for (std::size_t mid : {std::size_t{1}, std::size_t{0}, std::size_t{2}}) {
    std::size_t e1 = mid == 0 ? 1 : 0;
    std::size_t e2 = mid == 2 ? 1 : 2;
    const double s1 = thr[e1];
    const double s2 = thr[e2];
    if (std::abs(thr[mid] - std::min(s1, s2)) > tol) continue;
    const ComplexMatrix m = s1 * d.groups[mid].projector + (s1 + s2) * d.groups[e2].projector;
    out.push_back(canonical_representative(HermitianObservable(m)));
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

void validate_spectrum(const std::vector<double>& spectrum) {
  if (spectrum.size() < 4) throw InputError("q-matrix needs at least four spectrum points");
  for (double v : spectrum) {
    if (!std::isfinite(v)) throw InputError("spectrum contains a non-finite value");
  }
  std::vector<double> sorted = spectrum;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) {
      std::ostringstream msg;
      msg << "spectrum contains duplicate point " << sorted[i];
      throw InputError(msg.str());
    }
  }
}

double min_gap(const std::vector<double>& spectrum) {
  std::vector<double> sorted = spectrum;
  std::sort(sorted.begin(), sorted.end());
  double g = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) g = std::min(g, sorted[i] - sorted[i - 1]);
  return g;
}

}  // namespace

QMatrix q_matrix(const std::vector<double>& spectrum) {
  validate_spectrum(spectrum);
  const auto n = static_cast<Eigen::Index>(spectrum.size());
  const auto lo = static_cast<Eigen::Index>(
      std::min_element(spectrum.begin(), spectrum.end()) - spectrum.begin());
  const auto hi = static_cast<Eigen::Index>(
      std::max_element(spectrum.begin(), spectrum.end()) - spectrum.begin());
  const double diam = spectrum[static_cast<std::size_t>(hi)] - spectrum[static_cast<std::size_t>(lo)];

  QMatrix out{Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const bool diameter_pair = (j == lo && k == hi) || (j == hi && k == lo);
      const double v = diameter_pair
                           ? diam - min_gap(spectrum)
                           : std::abs(spectrum[static_cast<std::size_t>(j)] -
                                      spectrum[static_cast<std::size_t>(k)]);
      out.q(j, k) = out.q(k, j) = v;
    }
  }
  return out;
}

QMatrix q_matrix_brute_force(const std::vector<double>& spectrum) {
  validate_spectrum(spectrum);
  const std::size_t n = spectrum.size();
  auto dist = [&](std::size_t i, std::size_t j) { return std::abs(spectrum[i] - spectrum[j]); };
  QMatrix out{Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))};
  for (std::size_t l = 0; l < n; ++l) {
    for (std::size_t m = l + 1; m < n; ++m) {
      // Largest f(k) - f(j) subject to f(u) - f(v) <= |l_u - l_v| and f(l) = f(m):
      // the shortest j -> k path when the edge l -- m has length zero.
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
          const double path = std::min({dist(j, k), dist(j, l) + dist(m, k), dist(j, m) + dist(l, k)});
          auto& cell = out.q(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
          cell = std::max(cell, path);
          out.q(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = cell;
        }
      }
    }
  }
  return out;
}

namespace {

using Pair = std::pair<Eigen::Index, Eigen::Index>;

std::vector<Pair> argmax_pairs(const Eigen::MatrixXd& q, double rel_tol) {
  const Eigen::Index n = q.rows();
  double qmax = -std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) qmax = std::max(qmax, q(j, k));
  }
  const double band = rel_tol * std::max(1.0, std::abs(qmax));
  std::vector<Pair> out;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      if (q(j, k) >= qmax - band) out.emplace_back(j, k);
    }
  }
  return out;
}

[[noreturn]] void reconstruction_failure(const std::string& why) {
  throw ReconstructionError("q-matrix is not generated by any spectrum: " + why);
}

}  // namespace

std::size_t max_attainment_count(const QMatrix& q, double rel_tol) {
  return argmax_pairs(q.q, rel_tol).size();
}

MetricReconstruction reconstruct_metric(const QMatrix& qm, double rel_tol) {
  const Eigen::MatrixXd& q = qm.q;
  const Eigen::Index n = q.rows();
  if (q.cols() != n) throw InputError("q-matrix must be square");
  if (n < 4) throw InputError("q-matrix must be at least 4 x 4");
  if (!q.allFinite()) throw InputError("q-matrix has non-finite entries");
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  const double tol = rel_tol * scale;
  for (Eigen::Index j = 0; j < n; ++j) {
    if (std::abs(q(j, j)) > tol) reconstruction_failure("non-zero diagonal");
    for (Eigen::Index k = j + 1; k < n; ++k) {
      if (std::abs(q(j, k) - q(k, j)) > tol) reconstruction_failure("not symmetric");
      if (!(q(j, k) > 0.0)) reconstruction_failure("non-positive off-diagonal entry");
    }
  }

  const std::vector<Pair> top = argmax_pairs(q, rel_tol);
  std::map<Eigen::Index, int> occurrences;
  for (const auto& [j, k] : top) {
    ++occurrences[j];
    ++occurrences[k];
  }
  std::vector<Eigen::Index> repeated;
  for (const auto& [idx, count] : occurrences) {
    if (count >= 2) repeated.push_back(idx);
  }

  Eigen::MatrixXd d = q;
  for (const auto& [a, b] : top) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < n; ++j) {
      if (j != a && j != b) best = std::min(best, q(a, j) + q(j, b));
    }
    d(a, b) = d(b, a) = best;
  }

  std::vector<Eigen::Index> endpoints;
  switch (top.size()) {
    case 1:
      endpoints = {top[0].first, top[0].second};
      break;
    case 2: {
      if (repeated.size() != 1) reconstruction_failure("two maximal pairs without a shared index");
      const Pair& p = d(top[0].first, top[0].second) >= d(top[1].first, top[1].second) ? top[0] : top[1];
      endpoints = {p.first, p.second};
      if (std::find(endpoints.begin(), endpoints.end(), repeated[0]) == endpoints.end()) {
        reconstruction_failure("shared index is not a diameter endpoint");
      }
      break;
    }
    case 3: {
      if (repeated.size() != 2) reconstruction_failure("three maximal pairs of the wrong shape");
      const bool joined = std::any_of(top.begin(), top.end(), [&](const Pair& p) {
        return (p.first == repeated[0] && p.second == repeated[1]) ||
               (p.first == repeated[1] && p.second == repeated[0]);
      });
      if (!joined) reconstruction_failure("three maximal pairs of the wrong shape");
      endpoints = repeated;
      break;
    }
    default: {
      std::ostringstream msg;
      msg << "maximum attained by " << top.size() << " pairs";
      reconstruction_failure(msg.str());
    }
  }

  // Candidate embeddings anchored at either diameter endpoint; keep the
  // lexicographically smaller sorted spectrum (ties: the lower anchor index).
  std::sort(endpoints.begin(), endpoints.end());
  std::optional<std::pair<std::vector<double>, std::vector<double>>> chosen;
  for (Eigen::Index anchor : endpoints) {
    std::vector<double> pos(static_cast<std::size_t>(n));
    for (Eigen::Index a = 0; a < n; ++a) pos[static_cast<std::size_t>(a)] = a == anchor ? 0.0 : d(anchor, a);
    std::vector<double> sorted = pos;
    std::sort(sorted.begin(), sorted.end());
    if (!chosen) {
      chosen = std::make_pair(pos, sorted);
      continue;
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double diff = sorted[i] - chosen->second[i];
      if (std::abs(diff) > tol) {
        if (diff < 0.0) chosen = std::make_pair(pos, sorted);
        break;
      }
    }
  }

  MetricReconstruction out;
  out.distances = d;
  out.positions = chosen->first;
  out.spectrum = chosen->second;
  out.max_pairs = top.size();

  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index k = j + 1; k < n; ++k) {
      const double embedded = std::abs(out.positions[static_cast<std::size_t>(j)] -
                                       out.positions[static_cast<std::size_t>(k)]);
      if (std::abs(embedded - d(j, k)) > tol) reconstruction_failure("distances are not collinear");
    }
  }
  for (std::size_t i = 1; i < out.spectrum.size(); ++i) {
    if (!(out.spectrum[i] - out.spectrum[i - 1] > tol)) {
      reconstruction_failure("reconstructed spectrum has coincident points");
    }
  }
  const QMatrix round_trip = q_matrix(out.positions);
  if ((round_trip.q - q).cwiseAbs().maxCoeff() > tol) {
    reconstruction_failure("round trip does not reproduce the input");
  }
  return out;
}

// ---------------------------------------------------------------------------

AutomorphismSpec::AutomorphismSpec(double alpha, UnitaryMap unitary)
    : alpha_(alpha), unitary_(std::move(unitary)) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) {
    throw InputError("automorphism scale must be finite and positive");
  }
}

HermitianObservable AutomorphismSpec::apply(const HermitianObservable& x) const {
  return unitary_.conjugate(x).scaled(alpha_);
}

AutomorphismReport verify_order_preserving(const ObservableMap& phi, std::size_t trials,
                                           std::size_t dim, std::uint64_t seed) {
  if (dim < 2) throw InputError("automorphism check needs dimension >= 2");
  Rng rng(seed);
  AutomorphismReport report;
  report.trials = trials;
  for (std::size_t t = 0; t < trials; ++t) {
    const ComplexMatrix u = random_unitary(dim, rng);
    const std::vector<double> spectrum = random_spectrum(dim, -2.0, 2.0, 0.05, rng);
    const HermitianObservable b = observable_in_basis(u, spectrum);
    HermitianObservable a = b;
    if (t % 2 == 0) {
      const FunctionTable f = random_lipschitz_table(spectrum, 1.0, rng);
      std::vector<double> values;
      for (const auto& p : f.points()) values.push_back(p.value);
      a = observable_in_basis(u, values);
    } else {
      a = random_hermitian(dim, rng);
    }

    const HermitianObservable pa = phi(a);
    const HermitianObservable pb = phi(b);
    const bool ab = decide_order(a, b).holds;
    const bool pab = decide_order(pa, pb).holds;
    const bool ba = decide_order(b, a).holds;
    const bool pba = decide_order(pb, pa).holds;
    if (ab != pab || ba != pba) {
      report.passed = false;
      const bool rev = ab == pab;
      report.counterexample = Counterexample{t, a, b, rev ? ba : ab, rev ? pba : pab, rev};
      break;
    }
  }
  return report;
}

AutomorphismReport verify_automorphism(const AutomorphismSpec& spec, std::size_t trials,
                                       std::uint64_t seed) {
  return verify_order_preserving([&spec](const HermitianObservable& x) { return spec.apply(x); },
                                 trials, spec.unitary().dim(), seed);
}

// ---------------------------------------------------------------------------

bool two_spectrum_detector(const HermitianObservable& a) {
  return eigendecompose(a).groups.size() == 2;
}

std::pair<FunctionTable, FunctionTable> hinge_pair(const std::vector<double>& xs, double pivot) {
  std::vector<TablePoint> up, down;
  for (double x : xs) {
    up.push_back({x, std::max(0.0, x - pivot)});
    down.push_back({x, std::min(0.0, x - pivot)});
  }
  return {FunctionTable(std::move(up)), FunctionTable(std::move(down))};
}

ChainTest two_spectrum_by_order(const HermitianObservable& a, std::uint64_t seed,
                                std::size_t random_members) {
  const SpectralDecomposition d = eigendecompose(a);
  const std::vector<double> ev = d.eigenvalues();
  Rng rng(seed);

  std::vector<HermitianObservable> members{a, apply_function(d, FunctionTable::constant(ev, 0.0))};
  for (std::size_t i = 0; i < random_members; ++i) {
    members.push_back(apply_function(d, random_lipschitz_table(ev, 1.0, rng)));
  }
  for (std::size_t k = 1; k + 1 < ev.size(); ++k) {
    auto [f, g] = hinge_pair(ev, ev[k]);
    members.push_back(apply_function(d, f));
    members.push_back(apply_function(d, g));
  }

  ChainTest out;
  out.members = members.size();
  out.strictly_above_class = std::any_of(members.begin(), members.end(), [&](const auto& m) {
    return !class_equal(a, m);
  });
  bool chain = true;
  for (std::size_t i = 0; i < members.size() && chain; ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      if (!decide_order(members[i], members[j]).holds &&
          !decide_order(members[j], members[i]).holds) {
        chain = false;
        out.incomparable = std::make_pair(members[i], members[j]);
        break;
      }
    }
  }
  out.two_spectrum = out.strictly_above_class && chain;
  return out;
}

}  // namespace varorder
