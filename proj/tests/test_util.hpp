#pragma once

#include "twoqubit/matrix.hpp"
#include "twoqubit/rng.hpp"
#include "twoqubit/states.hpp"

namespace twoqubit::testing {

template <std::size_t N>
CMatrix<N> random_hermitian(Rng& rng) {
    CMatrix<N> m;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m(i, j) = rng.complex_gaussian() * 0.5;
    return (m + m.adjoint()) * 0.5;
}

/// Random single-qubit density matrix from a 2x2 Ginibre matrix.
inline ComplexMatrix2 random_qubit_density(Rng& rng) {
    ComplexMatrix2 g;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) g(i, j) = rng.complex_gaussian();
    ComplexMatrix2 m = g * g.adjoint();
    return m * (1.0 / m.trace().real());
}

inline CVector<4> singlet_standard() {
    const double h = 1.0 / std::sqrt(2.0);
    return {0.0, h, -h, 0.0};
}

inline ComplexMatrix4 projector(const CVector<4>& v) { return outer(v, v); }

}  // namespace twoqubit::testing
