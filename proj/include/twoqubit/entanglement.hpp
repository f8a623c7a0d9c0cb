#pragma once

#include <array>
#include <optional>

#include "twoqubit/matrix.hpp"
#include "twoqubit/states.hpp"

namespace twoqubit {

/// H(x) = -x log2 x - (1-x) log2(1-x), with 0 log 0 = 0.
double binary_entropy(double x);

/// E(x) = H(1/2 + sqrt(1 - x^2)/2) for x in [0, 1]: entanglement of a pure
/// state with concurrence x.
double cal_e(double x);

/// Von Neumann entropy in bits of a 2x2 density matrix.
double von_neumann_entropy(const ComplexMatrix2& rho);

/// |sum_i alpha_i^2| over the magic-basis amplitudes.
double pure_concurrence(const PureState& psi);

/// Entropy of the reduced state after tracing out `traced`.
double pure_entanglement_entropy(const PureState& psi, Subsystem traced = Subsystem::B);

/// R = sqrt(sqrt(rho) rho* sqrt(rho)), returned in the magic basis.
ComplexMatrix4 r_matrix(const DensityMatrix& rho);

struct RSpectrum {
    std::array<double, 4> lambdas{};  // descending, clamped at 0
    double trace_r = 0.0;
};

/// Eigenvalues of R via square roots of the spectrum of the Hermitian
/// matrix sqrt(rho) rho* sqrt(rho).
RSpectrum r_spectrum(const DensityMatrix& rho);

/// Same spectrum read off r_matrix (two matrix square roots). Cross-check path.
RSpectrum r_spectrum_from_r_matrix(const DensityMatrix& rho);

struct ConcurrenceResult {
    double c = 0.0;             // max(0, 2 lambda_max - Tr R), clamped to [0, 1]
    double c_signed = 0.0;      // 2 lambda_max - Tr R before clamping
    double entanglement = 0.0;  // E(c), ebits
    RSpectrum spectrum;
    int rank = 0;
    std::optional<double> rank2_c;  // |lambda_1 - lambda_2|, only when rank <= 2
    bool conjectured = false;       // rank > 2: formula outside the proven regime
};

ConcurrenceResult concurrence(const DensityMatrix& rho);

/// Entanglement of formation E(c) in ebits.
double entanglement_of_formation(const DensityMatrix& rho);

}  // namespace twoqubit
