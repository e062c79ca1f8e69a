#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "varorder/function_table.hpp"
#include "varorder/linalg.hpp"
#include "varorder/quantum_state.hpp"

namespace varorder {

using Rng = std::mt19937_64;

/// Entries with independent standard normal real and imaginary parts.
ComplexMatrix random_gaussian_matrix(std::size_t rows, std::size_t cols, Rng& rng);

/// (G + G^dagger) / 2 for Gaussian G.
HermitianObservable random_hermitian(std::size_t n, Rng& rng);

/// Haar-distributed unitary (QR of a Gaussian matrix with phase-fixed R).
ComplexMatrix random_unitary(std::size_t n, Rng& rng);
ComplexMatrix random_permutation_unitary(std::size_t n, Rng& rng);

PureState random_pure_state(std::size_t n, Rng& rng);

/// G G^dagger / Tr(G G^dagger) with square Gaussian G.
DensityState random_density(std::size_t n, Rng& rng);

/// `n` distinct sorted reals in [lo, hi] with consecutive gaps >= min_gap.
std::vector<double> random_spectrum(std::size_t n, double lo, double hi, double min_gap,
                                    Rng& rng);

/// Piecewise-linear interpolation data on sorted `xs`: starts at a value in
/// [-1, 1] and moves with slopes drawn uniformly from [-max_slope, max_slope].
FunctionTable random_lipschitz_table(const std::vector<double>& xs, double max_slope, Rng& rng);

/// U diag(eigenvalues) U^dagger
HermitianObservable observable_in_basis(const ComplexMatrix& u,
                                        const std::vector<double>& eigenvalues);

}  // namespace varorder
