#include "twoqubit/convex_roof.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "twoqubit/entanglement.hpp"
#include "twoqubit/parallel.hpp"

namespace twoqubit {

namespace {

using Entries = std::vector<Complex>;

// Columns sqrt(mu_j) w_j of rho's leading eigenpairs, standard basis.
std::vector<CVector<4>> weighted_eigenvectors(const DensityMatrix& rho) {
    const auto es = herm_eig(in_basis(rho, Basis::standard).matrix(), tolerance::density);
    const int r = rho.rank();
    std::vector<CVector<4>> cols;
    for (int k = 0; k < r; ++k) {
        const std::size_t idx = 3 - static_cast<std::size_t>(k);
        auto w = es.vectors.column(idx);
        const double s = std::sqrt(std::max(0.0, es.values[idx]));
        for (auto& x : w) x *= s;
        cols.push_back(w);
    }
    return cols;
}

// Modified Gram-Schmidt on the columns (two passes).
void orthonormalize(Entries& u, int rows, int cols) {
    auto at = [&](int i, int j) -> Complex& { return u[static_cast<std::size_t>(i * cols + j)]; };
    for (int j = 0; j < cols; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (int k = 0; k < j; ++k) {
                Complex proj = 0.0;
                for (int i = 0; i < rows; ++i) proj += std::conj(at(i, k)) * at(i, j);
                for (int i = 0; i < rows; ++i) at(i, j) -= proj * at(i, k);
            }
        double n = 0.0;
        for (int i = 0; i < rows; ++i) n += std::norm(at(i, j));
        n = std::sqrt(n);
        for (int i = 0; i < rows; ++i) at(i, j) /= n;
    }
}

Entries random_stiefel(int rows, int cols, Rng& rng) {
    Entries u(static_cast<std::size_t>(rows * cols));
    for (auto& x : u) x = rng.complex_gaussian();
    orthonormalize(u, rows, cols);
    return u;
}

Ensemble build_ensemble(const std::vector<CVector<4>>& frame, const Entries& u, int rows) {
    const int cols = static_cast<int>(frame.size());
    Ensemble e;
    for (int i = 0; i < rows; ++i) {
        CVector<4> v{};
        for (int j = 0; j < cols; ++j) {
            const Complex c = u[static_cast<std::size_t>(i * cols + j)];
            for (std::size_t k = 0; k < 4; ++k) v[k] += c * frame[static_cast<std::size_t>(j)][k];
        }
        const double p = std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]) + std::norm(v[3]);
        if (p <= 1e-300) continue;
        const double s = 1.0 / std::sqrt(p);
        for (auto& x : v) x *= s;
        e.probabilities.push_back(p);
        e.states.emplace_back(v, Basis::standard);
    }
    return e;
}

double objective(const std::vector<CVector<4>>& frame, const Entries& u, int rows) {
    return average_entanglement(build_ensemble(frame, u, rows));
}

struct RestartOutcome {
    double best = std::numeric_limits<double>::infinity();
    double lowest_evaluated = std::numeric_limits<double>::infinity();
    Entries u;
    long iters = 0;
    std::vector<std::pair<int, double>> trace;
};

constexpr int stall_window = 50;    // accepted steps per relative-improvement test
constexpr int failure_patience = 8; // consecutive rejections before halving the step
constexpr double min_step = 1e-9;

RestartOutcome run_restart(const std::vector<CVector<4>>& frame, int rows, const MinimizeOptions& opt,
                           std::uint64_t seed) {
    const int cols = static_cast<int>(frame.size());
    Rng rng(seed);
    RestartOutcome out;
    out.u = random_stiefel(rows, cols, rng);
    out.best = objective(frame, out.u, rows);
    out.lowest_evaluated = out.best;
    out.trace.emplace_back(0, out.best);

    double step = 0.5;
    int failures = 0;
    int accepted = 0;
    double window_start = out.best;
    Entries trial(out.u.size()), delta(out.u.size());

    for (int iter = 1; iter <= opt.max_iters; ++iter) {
        out.iters = iter;
        // Random direction projected on the tangent space: D = G - u (u^dagger G + G^dagger u)/2.
        for (auto& x : delta) x = rng.complex_gaussian();
        std::vector<Complex> ug(static_cast<std::size_t>(cols * cols));
        for (int a = 0; a < cols; ++a)
            for (int b = 0; b < cols; ++b) {
                Complex s = 0.0;
                for (int i = 0; i < rows; ++i)
                    s += std::conj(out.u[static_cast<std::size_t>(i * cols + a)]) *
                         delta[static_cast<std::size_t>(i * cols + b)];
                ug[static_cast<std::size_t>(a * cols + b)] = s;
            }
        double dnorm = 0.0;
        for (int i = 0; i < rows; ++i)
            for (int b = 0; b < cols; ++b) {
                Complex corr = 0.0;
                for (int a = 0; a < cols; ++a) {
                    const Complex sym = 0.5 * (ug[static_cast<std::size_t>(a * cols + b)] +
                                               std::conj(ug[static_cast<std::size_t>(b * cols + a)]));
                    corr += out.u[static_cast<std::size_t>(i * cols + a)] * sym;
                }
                auto& d = delta[static_cast<std::size_t>(i * cols + b)];
                d -= corr;
                dnorm += std::norm(d);
            }
        dnorm = std::sqrt(dnorm);
        for (std::size_t k = 0; k < trial.size(); ++k) trial[k] = out.u[k] + (step / dnorm) * delta[k];
        orthonormalize(trial, rows, cols);

        const double value = objective(frame, trial, rows);
        out.lowest_evaluated = std::min(out.lowest_evaluated, value);
        if (value < out.best) {
            out.best = value;
            out.u = trial;
            out.trace.emplace_back(iter, value);
            failures = 0;
            step = std::min(1.0, step * 1.2);
            if (++accepted % stall_window == 0) {
                if (window_start - out.best < opt.ftol * std::max(std::abs(window_start), 1e-300)) break;
                window_start = out.best;
            }
        } else if (++failures >= failure_patience) {
            failures = 0;
            step *= 0.5;
            if (step < min_step) break;
        }
    }
    return out;
}

}  // namespace

DecompositionParameters::DecompositionParameters(int rows, int cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows < 1 || cols < 1 || data_.size() != static_cast<std::size_t>(rows * cols))
        throw Error("DecompositionParameters: entry count does not match the shape");
    const double defect = gram_defect(rows, cols, data_);
    if (!(defect <= 1e-10)) {
        std::ostringstream os;
        os << "DecompositionParameters: columns are not orthonormal (Gram defect " << defect << ")";
        throw Error(os.str());
    }
}

DecompositionParameters DecompositionParameters::identity(int rows, int cols) {
    std::vector<Complex> e(static_cast<std::size_t>(rows * cols));
    for (int j = 0; j < std::min(rows, cols); ++j) e[static_cast<std::size_t>(j * cols + j)] = 1.0;
    return {rows, cols, std::move(e)};
}

DecompositionParameters DecompositionParameters::random(int rows, int cols, Rng& rng) {
    return {rows, cols, random_stiefel(rows, cols, rng)};
}

double DecompositionParameters::gram_defect(int rows, int cols, const std::vector<Complex>& u) {
    double worst = 0.0;
    for (int a = 0; a < cols; ++a)
        for (int b = 0; b < cols; ++b) {
            Complex s = 0.0;
            for (int i = 0; i < rows; ++i)
                s += std::conj(u[static_cast<std::size_t>(i * cols + a)]) * u[static_cast<std::size_t>(i * cols + b)];
            worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
        }
    return worst;
}

Ensemble ensemble_from_parameters(const DensityMatrix& rho, const DecompositionParameters& u) {
    const auto frame = weighted_eigenvectors(rho);
    if (u.cols() != static_cast<int>(frame.size())) {
        std::ostringstream os;
        os << "ensemble_from_parameters: parameters have " << u.cols() << " columns but rank(rho) = " << frame.size();
        throw Error(os.str());
    }
    return build_ensemble(frame, u.entries(), u.rows());
}

MinimizeResult minimize(const DensityMatrix& rho, const MinimizeOptions& opt) {
    const auto frame = weighted_eigenvectors(rho);
    const int rank = static_cast<int>(frame.size());
    if (opt.ensemble_size < rank || opt.ensemble_size > max_ensemble_size) {
        std::ostringstream os;
        os << "minimize: ensemble size " << opt.ensemble_size << " must lie in [rank(rho) = " << rank << ", "
           << max_ensemble_size << "]";
        throw Error(os.str());
    }
    if (opt.restarts < 1) throw Error("minimize: restarts must be >= 1");

    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(opt.restarts));
    parallel_for(outcomes.size(), opt.jobs, [&](std::size_t k) {
        outcomes[k] = run_restart(frame, opt.ensemble_size, opt, derive_seed(opt.seed, k));
    });

    MinimizeResult result;
    std::size_t winner = 0;
    result.lowest_evaluated = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        if (outcomes[k].best < outcomes[winner].best) winner = k;
        result.iters_used += outcomes[k].iters;
        result.lowest_evaluated = std::min(result.lowest_evaluated, outcomes[k].lowest_evaluated);
    }
    const auto& w = outcomes[winner];
    result.min_average = w.best;
    result.best_restart = static_cast<int>(winner);
    result.best_parameters = w.u;
    result.best = build_ensemble(frame, w.u, opt.ensemble_size);
    result.trace = w.trace;
    return result;
}

}  // namespace twoqubit
