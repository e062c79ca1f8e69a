#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "varorder/error.hpp"
#include "varorder/function_table.hpp"
#include "varorder/linalg.hpp"
#include "varorder/quantum_state.hpp"

namespace varorder {

/// Why a candidate pair A, B failed A <= B (variance order).
enum class Violation {
  kNotReducing,   // an eigenspace of B is not invariant under A
  kNotScalar,     // A restricted to an eigenspace of B is not a multiple of the identity
  kLipschitzGap,  // |f(l_j) - f(l_k)| > |l_j - l_k|
};

const char* to_string(Violation v);

struct OrderVerdict {
  bool holds = false;
  std::optional<FunctionTable> certificate;  // present iff holds; f with A = f(B)
  std::optional<PureState> witness;          // present iff !holds
  double margin = 0.0;  // Delta_w(A) - Delta_w(B) at the witness, recomputed
  double tol = 0.0;
  std::optional<Violation> violation;
  std::vector<double> violating_eigenvalues;  // eigenvalue(s) of B involved
};

inline constexpr double kFailMarginTol = 1e-9;

/// 1e-8 * max(1, ||A||_F, ||B||_F)
double default_order_tol(const HermitianObservable& a, const HermitianObservable& b);

/// Decides A <= B in the variance order by testing whether A is a 1-Lipschitz
/// function of B on sigma(B).
///
/// For every eigenspace P_j of B the compression P_j A P_j must commute with P_j and
/// be scalar, f(l_j) = Tr(P_j A P_j)/rank; then |f(l_j) - f(l_k)| <= |l_j - l_k| + tol
/// for all pairs. A failing eigenspace yields a basis eigenvector of B with the
/// largest Delta_x(A) (lowest index on ties), or, if every basis vector is an
/// eigenvector of A, the balanced superposition of the extreme eigenvectors of the
/// compression. A failing gap yields (x_j + x_k)/sqrt(2) for the pair with the
/// largest violation. Negative tol selects default_order_tol.
///
/// Throws InternalConsistencyError if a failure witness has recomputed margin
/// at most kFailMarginTol.
OrderVerdict decide_order(const HermitianObservable& a, const HermitianObservable& b,
                          double tol = -1.0);

/// Delta_x(A) - Delta_x(B)
double order_gap(const HermitianObservable& a, const HermitianObservable& b,
                 const PureState& x);

struct OracleConfig {
  int restarts = 32;
  int steps = 500;
  double initial_step = 1.0;
  int max_halvings = 60;
  double grad_tol = 1e-10;
  std::uint64_t seed = 0;
};

struct OracleResult {
  PureState best_state;
  double best_value = 0.0;
  int best_restart = 0;
};

/// Multi-restart projected gradient ascent of Delta_x(A) - Delta_x(B) over the unit
/// sphere. Each restart draws its start from its own generator seeded by
/// (cfg.seed, restart index); the best value wins with ties going to the lower
/// restart, so the result does not depend on evaluation order.
OracleResult witness_search(const HermitianObservable& a, const HermitianObservable& b,
                            const OracleConfig& cfg = {});

/// Thrown by extract_function when A is not below B; carries the witness.
class OrderDoesNotHold : public PreconditionError {
 public:
  OrderDoesNotHold(const std::string& what, PureState witness, double margin)
      : PreconditionError(what), witness_(std::move(witness)), margin_(margin) {}
  const PureState& witness() const noexcept { return witness_; }
  double margin() const noexcept { return margin_; }

 private:
  PureState witness_;
  double margin_;
};

FunctionTable extract_function(const HermitianObservable& a, const HermitianObservable& b,
                               double tol = -1.0);

/// True iff B - A or B + A is within tol (Frobenius) of a real multiple of I.
bool class_equal(const HermitianObservable& a, const HermitianObservable& b,
                 double tol = -1.0);

/// Picks A - l_min I or -A + l_max I, whichever has the lexicographically smaller
/// sorted (eigenvalue, multiplicity) sequence. When the spectrum is symmetric the
/// two matrices are compared entrywise instead, so every member of the class maps to
/// the same matrix; if they coincide the former is returned.
HermitianObservable canonical_representative(const HermitianObservable& a);

struct StateOrderCheck {
  bool holds = true;
  std::size_t trials = 0;
  double worst_gap = 0.0;  // max over trials of Delta_rho(A) - Delta_rho(B)
  std::optional<DensityState> worst_state;

  explicit operator bool() const noexcept { return holds; }
};

/// Falsifier over random density matrices (normalised Wishart). Not a decision
/// procedure: `holds` only says no sampled state violated Delta(A) <= Delta(B) + tol.
StateOrderCheck check_state_order(const HermitianObservable& a, const HermitianObservable& b,
                                  std::size_t trials, std::uint64_t seed, double tol = 1e-9);

}  // namespace varorder
