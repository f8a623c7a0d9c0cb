#pragma once

// Direct minimization of the average pure-state entanglement over all
// decompositions of a mixed state. With rho = sum_j mu_j |w_j><w_j|, every
// m-member decomposition is
//   |psi~_i> = sum_j u_ij sqrt(mu_j) |w_j>,   p_i = <psi~_i|psi~_i>,
// for an m x r matrix u with orthonormal columns, so the search runs over
// that (Stiefel) manifold with the mixture constraint exact by construction.

#include <cstdint>
#include <utility>
#include <vector>

#include "twoqubit/ensemble.hpp"
#include "twoqubit/rng.hpp"
#include "twoqubit/states.hpp"

namespace twoqubit {

inline constexpr int max_ensemble_size = 8;

/// m x r complex matrix with orthonormal columns, row-major.
class DecompositionParameters {
public:
    /// Throws Error when the column Gram matrix deviates from I by > 1e-10.
    DecompositionParameters(int rows, int cols, std::vector<Complex> entries);

    static DecompositionParameters identity(int rows, int cols);
    static DecompositionParameters random(int rows, int cols, Rng& rng);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Complex operator()(int i, int j) const { return data_[static_cast<std::size_t>(i * cols_ + j)]; }
    const std::vector<Complex>& entries() const { return data_; }

    /// max |u^dagger u - I|
    static double gram_defect(int rows, int cols, const std::vector<Complex>& entries);

private:
    int rows_, cols_;
    std::vector<Complex> data_;
};

/// Builds the ensemble for parameters u; members with zero weight are dropped.
/// Throws Error when u's column count differs from rank(rho).
Ensemble ensemble_from_parameters(const DensityMatrix& rho, const DecompositionParameters& u);

struct MinimizeOptions {
    int ensemble_size = 4;
    int restarts = 32;
    int max_iters = 2000;
    double ftol = 1e-10;
    std::uint64_t seed = 0;
    int jobs = 1;
};

struct MinimizeResult {
    double min_average = 0.0;
    double lowest_evaluated = 0.0;  // over every ensemble evaluated in every restart
    Ensemble best;
    std::vector<Complex> best_parameters;  // row-major ensemble_size x rank
    int best_restart = 0;
    long iters_used = 0;  // summed over restarts
    std::vector<std::pair<int, double>> trace;  // (iteration, best value) of the winning restart
};

/// Gradient-free descent from `restarts` random starting points (restart k
/// seeded by derive_seed(seed, k)). Throws Error when ensemble_size is below
/// rank(rho) or above max_ensemble_size.
MinimizeResult minimize(const DensityMatrix& rho, const MinimizeOptions& options = {});

}  // namespace twoqubit
