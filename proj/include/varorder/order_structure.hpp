#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "varorder/function_table.hpp"
#include "varorder/linalg.hpp"

namespace varorder {

// ---------------------------------------------------------------------------
// Joint upper bounds

struct JointUpperBound {
  HermitianObservable bound;
  double tau = 0.0;   // max spectral norm of the blocks P_j B P_j
  double beta = 0.0;  // 4 tau + diam(sigma(A)) + 1
};

/// For commuting A, B: C = sum_j (P_j B P_j + j beta P_j) over the eigenprojectors
/// P_1..P_m of A in ascending eigenvalue order. Both A <= C and B <= C hold.
/// Throws PreconditionError (with the commutator norm) if ||AB - BA||_F > tol.
JointUpperBound joint_upper_bound(const HermitianObservable& a, const HermitianObservable& b,
                                  double tol = -1.0);

/// Natural candidates for a common upper bound of a possibly non-commuting pair:
/// A, B, a few linear combinations, and the block construction above applied to the
/// pinchings of B onto the eigenspaces of A and vice versa.
std::vector<HermitianObservable> upper_bound_candidates(const HermitianObservable& a,
                                                        const HermitianObservable& b);

// ---------------------------------------------------------------------------
// Lower sets of two-point observables

/// The observables t E_A(omega), 0 <= t <= threshold, up to variance equivalence.
struct TwoPointFamily {
  std::vector<std::size_t> groups;  // indices into the spectral groups of A
  std::vector<double> subset;       // the eigenvalues in omega
  ComplexMatrix projector;          // E_A(omega)
  double threshold = 0.0;           // min |l - m|, l in omega, m not in omega
};

/// One family per complementary pair {omega, sigma(A) \ omega}; the representative is
/// the smaller set, or the one containing min sigma(A) when both have equal size.
/// Throws PreconditionError when A is scalar.
std::vector<TwoPointFamily> two_point_lower_set(const HermitianObservable& a);

struct TwoPointMatch {
  std::size_t family = 0;
  double t = 0.0;
};

/// Locates a two-point observable B among the families: B is class-equal to t E_omega
/// with E_omega or I - E_omega equal to the top eigenprojector of B and t <= t_omega.
/// Scalar B matches family 0 with t = 0. Returns nullopt otherwise.
std::optional<TwoPointMatch> match_two_point(const std::vector<TwoPointFamily>& families,
                                             const HermitianObservable& b, double tol = -1.0);

/// For A with exactly three eigenvalues: canonical members of every variance class
/// whose two-point lower set coincides with that of A. Always contains A's own class;
/// one more when the two gaps differ, two more when they are equal.
std::vector<HermitianObservable> three_point_correspondents(const HermitianObservable& a,
                                                            double tol = -1.0);

// ---------------------------------------------------------------------------
// q-matrices and reconstruction of the spectral metric

struct QMatrix {
  Eigen::MatrixXd q;  // symmetric, zero diagonal
  std::size_t n() const noexcept { return static_cast<std::size_t>(q.rows()); }
};

/// q_jk = |l_j - l_k| unless {j, k} is the diameter pair, where it is
/// diam - min gap. Requires n >= 4 distinct finite points.
QMatrix q_matrix(const std::vector<double>& spectrum);

/// Same quantity as the largest |f(l_j) - f(l_k)| over 1-Lipschitz f that merge at
/// least one pair of points, evaluated as a shortest path with one zero-length edge.
QMatrix q_matrix_brute_force(const std::vector<double>& spectrum);

/// Number of pairs j < k attaining max q within relative tolerance.
std::size_t max_attainment_count(const QMatrix& q, double rel_tol = 1e-9);

struct MetricReconstruction {
  Eigen::MatrixXd distances;
  std::vector<double> positions;  // per index, anchored at a diameter endpoint
  std::vector<double> spectrum;   // sorted positions
  std::size_t max_pairs = 0;      // 1, 2 or 3
};

/// Recovers all pairwise distances (and a spectrum up to reflection and translation)
/// from a q-matrix. Of the two reflections the lexicographically smaller spectrum is
/// returned. Throws ReconstructionError if no spectrum produces q.
MetricReconstruction reconstruct_metric(const QMatrix& q, double rel_tol = 1e-9);

// ---------------------------------------------------------------------------
// Automorphisms

/// X -> alpha U X U^dagger (or alpha U conj(X) U^dagger for antiunitary U).
class AutomorphismSpec {
 public:
  AutomorphismSpec(double alpha, UnitaryMap unitary);

  double alpha() const noexcept { return alpha_; }
  const UnitaryMap& unitary() const noexcept { return unitary_; }
  HermitianObservable apply(const HermitianObservable& x) const;

 private:
  double alpha_;
  UnitaryMap unitary_;
};

using ObservableMap = std::function<HermitianObservable(const HermitianObservable&)>;

struct Counterexample {
  std::size_t trial = 0;
  HermitianObservable first;   // A
  HermitianObservable second;  // B
  bool before = false;         // A <= B (or B <= A, see `reversed`)
  bool after = false;          // Phi(A) <= Phi(B)
  bool reversed = false;       // true when the failing direction was B <= A
};

struct AutomorphismReport {
  bool passed = true;
  std::size_t trials = 0;
  std::optional<Counterexample> counterexample;  // lowest failing trial
};

/// Samples `trials` pairs (even trials: A = f(B) for random 1-Lipschitz f, odd: A
/// independent of B) and checks B <= A <=> Phi(B) <= Phi(A) in both directions.
AutomorphismReport verify_order_preserving(const ObservableMap& phi, std::size_t trials,
                                           std::size_t dim, std::uint64_t seed);

AutomorphismReport verify_automorphism(const AutomorphismSpec& spec, std::size_t trials,
                                       std::uint64_t seed);

// ---------------------------------------------------------------------------
// Two-point spectra

/// #sigma(A) == 2
bool two_spectrum_detector(const HermitianObservable& a);

/// Hinge functions at `pivot`: f(x) = max(0, x - pivot), g(x) = min(0, x - pivot),
/// tabulated on `xs`.
std::pair<FunctionTable, FunctionTable> hinge_pair(const std::vector<double>& xs, double pivot);

struct ChainTest {
  bool two_spectrum = false;
  bool strictly_above_class = false;  // some sampled member lies outside [[A]]
  std::size_t members = 0;
  std::optional<std::pair<HermitianObservable, HermitianObservable>> incomparable;
};

/// Order-theoretic characterisation of #sigma(A) == 2: the set of observables below A
/// differs from [[A]] and is a chain. Tested on f(A) for 20 random 1-Lipschitz f, the
/// zero function, A itself, and the hinge pair at every interior eigenvalue.
ChainTest two_spectrum_by_order(const HermitianObservable& a, std::uint64_t seed,
                                std::size_t random_members = 20);

}  // namespace varorder
