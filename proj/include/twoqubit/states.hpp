#pragma once

// Two-qubit state types, the magic basis, and seeded random sampling.
//
// Standard product basis ordering is |uu>, |ud>, |du>, |dd> (index 2a + b,
// "up" = 0, qubit A on the left). The magic basis is
//   e1 = (|uu> + |dd>)/sqrt2        e2 = i(|uu> - |dd>)/sqrt2
//   e3 = i(|ud> + |du>)/sqrt2       e4 = (|ud> - |du>)/sqrt2

#include <array>
#include <cstdint>
#include <string_view>

#include "twoqubit/matrix.hpp"
#include "twoqubit/rng.hpp"

namespace twoqubit {

enum class Basis { standard, magic };

std::string_view to_string(Basis b);
Basis basis_from_string(std::string_view s);  // throws ParseError

namespace tolerance {
inline constexpr double pure_norm = 1e-10;
inline constexpr double density = 1e-9;  // Hermiticity, trace, positivity
inline constexpr double rank = 1e-9;     // eigenvalues above this count toward rank
}  // namespace tolerance

/// Change-of-basis matrix whose k-th column is e_{k+1} in the standard basis.
const ComplexMatrix4& magic_basis();

class PureState {
public:
    /// Validates the norm; throws InvalidStateError.
    PureState(const CVector<4>& amplitudes, Basis basis);

    const CVector<4>& amplitudes() const { return amps_; }
    Basis basis() const { return basis_; }

private:
    CVector<4> amps_;
    Basis basis_;
};

class DensityMatrix {
public:
    /// Validates Hermiticity, unit trace and positivity; throws InvalidStateError.
    DensityMatrix(const ComplexMatrix4& matrix, Basis basis);

    static DensityMatrix from_pure(const PureState& psi);

    const ComplexMatrix4& matrix() const { return m_; }
    Basis basis() const { return basis_; }

    /// Ascending spectrum (basis independent).
    const std::array<double, 4>& eigenvalues() const { return eigenvalues_; }
    int rank() const;

private:
    struct Trusted {};
    DensityMatrix(const ComplexMatrix4& matrix, Basis basis, const std::array<double, 4>& eigenvalues, Trusted);

    ComplexMatrix4 m_;
    Basis basis_;
    std::array<double, 4> eigenvalues_{};

    friend DensityMatrix to_magic(const DensityMatrix&);
    friend DensityMatrix from_magic(const DensityMatrix&);
    friend DensityMatrix magic_conjugate(const DensityMatrix&);
};

PureState to_magic(const PureState& psi);
PureState from_magic(const PureState& psi);
DensityMatrix to_magic(const DensityMatrix& rho);
DensityMatrix from_magic(const DensityMatrix& rho);

/// Either conversion direction, or a copy when already in `target`.
PureState in_basis(const PureState& psi, Basis target);
DensityMatrix in_basis(const DensityMatrix& rho, Basis target);

/// Entrywise conjugate in the magic basis; result keeps the input's basis tag.
DensityMatrix magic_conjugate(const DensityMatrix& rho);

/// Sum_k p_k |e_k><e_k| in the standard basis.
DensityMatrix bell_mixture(const std::array<double, 4>& probabilities);

// ---- sampling ----

/// Name of the density-matrix measure, embedded in every campaign report.
inline constexpr std::string_view sampling_measure_name = "induced-ginibre: G G^dagger / Tr, G 4 x rank complex Gaussian";

PureState random_pure(Rng& rng);
PureState random_pure(std::uint64_t seed);

DensityMatrix random_density(int rank, Rng& rng);
DensityMatrix random_density(int rank, std::uint64_t seed);

/// Haar 2x2 unitary.
ComplexMatrix2 random_unitary2(Rng& rng);
/// Haar 4x4 unitary.
ComplexMatrix4 random_unitary4(Rng& rng);

/// U_A (x) U_B with independent Haar factors.
ComplexMatrix4 random_local_unitary(Rng& rng);
ComplexMatrix4 random_local_unitary(std::uint64_t seed);

/// Random probability vector, uniform on the simplex.
std::array<double, 4> random_simplex(Rng& rng);

/// U rho U^dagger in the state's own basis.
DensityMatrix conjugate_by(const DensityMatrix& rho, const ComplexMatrix4& u);

struct MagicRealness {
    bool real = false;
    double phase = 0.0;  // phi with e^{-i phi} U_magic real
};

/// Whether U is real in the magic basis up to a global phase. The phase is
/// fixed by making the largest-modulus magic-basis entry real positive.
/// Throws Error when U is not unitary within tol.
MagicRealness is_real_in_magic(const ComplexMatrix4& u, double tol);

}  // namespace twoqubit
