#pragma once

// Fixed-size dense complex matrices for two-qubit work (2x2, 4x4 and the
// occasional 3x3 real-symmetric block), with a cyclic Jacobi eigensolver.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

#include "twoqubit/error.hpp"

namespace twoqubit {

using Complex = std::complex<double>;

template <std::size_t N>
using CVector = std::array<Complex, N>;

/// Row-major N x N complex matrix with value semantics.
template <std::size_t N>
class CMatrix {
public:
    static constexpr std::size_t dim = N;

    constexpr CMatrix() = default;

    CMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
        std::size_t i = 0;
        for (const auto& row : rows) {
            std::size_t j = 0;
            for (const auto& v : row) {
                if (i < N && j < N) (*this)(i, j) = v;
                ++j;
            }
            ++i;
        }
    }

    static CMatrix identity() {
        CMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static CMatrix diagonal(const std::array<double, N>& d) {
        CMatrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    /// Matrix whose k-th column is cols[k].
    static CMatrix from_columns(const std::array<CVector<N>, N>& cols) {
        CMatrix m;
        for (std::size_t j = 0; j < N; ++j)
            for (std::size_t i = 0; i < N; ++i) m(i, j) = cols[j][i];
        return m;
    }

    Complex& operator()(std::size_t i, std::size_t j) { return data_[i * N + j]; }
    const Complex& operator()(std::size_t i, std::size_t j) const { return data_[i * N + j]; }

    const std::array<Complex, N * N>& entries() const { return data_; }

    CVector<N> column(std::size_t j) const {
        CVector<N> v;
        for (std::size_t i = 0; i < N; ++i) v[i] = (*this)(i, j);
        return v;
    }

    CMatrix adjoint() const {
        CMatrix r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
        return r;
    }

    CMatrix transpose() const {
        CMatrix r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r(i, j) = (*this)(j, i);
        return r;
    }

    /// Entrywise complex conjugate (basis dependent).
    CMatrix conj() const {
        CMatrix r;
        for (std::size_t k = 0; k < N * N; ++k) r.data_[k] = std::conj(data_[k]);
        return r;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : data_) s += std::norm(v);
        return std::sqrt(s);
    }

    /// Largest entry modulus.
    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    CMatrix& operator+=(const CMatrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] += o.data_[k];
        return *this;
    }
    CMatrix& operator-=(const CMatrix& o) {
        for (std::size_t k = 0; k < N * N; ++k) data_[k] -= o.data_[k];
        return *this;
    }
    CMatrix& operator*=(Complex s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(CMatrix a, Complex s) { return a *= s; }
    friend CMatrix operator*(Complex s, CMatrix a) { return a *= s; }
    friend CMatrix operator*(CMatrix a, double s) { return a *= Complex(s); }
    friend CMatrix operator*(double s, CMatrix a) { return a *= Complex(s); }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        CMatrix r;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const Complex aik = a(i, k);
                for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * b(k, j);
            }
        return r;
    }

    friend CVector<N> operator*(const CMatrix& a, const CVector<N>& v) {
        CVector<N> r{};
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) r[i] += a(i, j) * v[j];
        return r;
    }

    friend bool operator==(const CMatrix&, const CMatrix&) = default;

private:
    std::array<Complex, N * N> data_{};
};

using ComplexMatrix2 = CMatrix<2>;
using ComplexMatrix4 = CMatrix<4>;

// ---- vector helpers ----

/// Sesquilinear inner product <a|b>.
template <std::size_t N>
Complex inner(const CVector<N>& a, const CVector<N>& b) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::conj(a[i]) * b[i];
    return s;
}

/// Bilinear product a.b with no conjugation.
template <std::size_t N>
Complex bilinear(const CVector<N>& a, const CVector<N>& b) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += a[i] * b[i];
    return s;
}

template <std::size_t N>
double norm(const CVector<N>& v) {
    double s = 0.0;
    for (const auto& x : v) s += std::norm(x);
    return std::sqrt(s);
}

/// |a><b|
template <std::size_t N>
CMatrix<N> outer(const CVector<N>& a, const CVector<N>& b) {
    CMatrix<N> r;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) r(i, j) = a[i] * std::conj(b[j]);
    return r;
}

template <std::size_t N>
double max_abs_diff(const CMatrix<N>& a, const CMatrix<N>& b) {
    return (a - b).max_abs();
}

template <std::size_t N>
double max_abs_diff(const CVector<N>& a, const CVector<N>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

// ---- predicates ----

template <std::size_t N>
double hermiticity_defect(const CMatrix<N>& m) {
    return max_abs_diff(m, m.adjoint());
}

template <std::size_t N>
bool is_hermitian(const CMatrix<N>& m, double tol) {
    return hermiticity_defect(m) <= tol;
}

template <std::size_t N>
bool is_unitary(const CMatrix<N>& m, double tol) {
    return max_abs_diff(m.adjoint() * m, CMatrix<N>::identity()) <= tol;
}

// ---- Hermitian eigensolver ----

template <std::size_t N>
struct EigenSystem {
    std::array<double, N> values{};  // ascending
    CMatrix<N> vectors;              // column k pairs with values[k]
};

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Throws NonHermitianError when ||m - m^dagger||_inf > tol.
template <std::size_t N>
EigenSystem<N> herm_eig(const CMatrix<N>& m, double tol = 1e-9) {
    double worst = 0.0;
    std::size_t wi = 0, wj = 0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = i; j < N; ++j) {
            const double d = std::abs(m(i, j) - std::conj(m(j, i)));
            if (d > worst) {
                worst = d;
                wi = i;
                wj = j;
            }
        }
    if (worst > tol) {
        std::ostringstream os;
        os << "matrix is not Hermitian: |m(" << wi << "," << wj << ") - conj(m(" << wj << "," << wi
           << "))| = " << worst << " exceeds tolerance " << tol;
        throw NonHermitianError(os.str());
    }

    CMatrix<N> a = (m + m.adjoint()) * 0.5;
    CMatrix<N> v = CMatrix<N>::identity();
    const double scale = a.frobenius_norm();

    constexpr int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < N; ++p)
            for (std::size_t q = p + 1; q < N; ++q) off += std::norm(a(p, q));
        if (off == 0.0 || std::sqrt(off) <= 1e-18 * scale) break;

        for (std::size_t p = 0; p < N; ++p) {
            for (std::size_t q = p + 1; q < N; ++q) {
                const double b = std::abs(a(p, q));
                if (b <= std::numeric_limits<double>::min()) continue;
                const Complex phase = a(p, q) / b;  // e^{i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double theta = (aqq - app) / (2.0 * b);
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // G = diag(1, e^{-i phi}) * [[c, s], [-s, c]]
                const Complex g00 = c;
                const Complex g01 = s;
                const Complex g10 = -s * std::conj(phase);
                const Complex g11 = c * std::conj(phase);

                for (std::size_t k = 0; k < N; ++k) {  // a <- a G
                    const Complex akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * g00 + akq * g10;
                    a(k, q) = akp * g01 + akq * g11;
                }
                for (std::size_t k = 0; k < N; ++k) {  // a <- G^dagger a
                    const Complex apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
                    a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
                }
                for (std::size_t k = 0; k < N; ++k) {  // v <- v G
                    const Complex vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * g00 + vkq * g10;
                    v(k, q) = vkp * g01 + vkq * g11;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
            }
        }
    }

    std::array<std::size_t, N> order;
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    EigenSystem<N> out;
    for (std::size_t k = 0; k < N; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < N; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

/// Eigenvalues below this are indistinguishable from zero for herm_eig.
template <std::size_t N>
double eigen_noise_floor(const CMatrix<N>& m) {
    return 4.0 * static_cast<double>(N) * std::numeric_limits<double>::epsilon() * m.frobenius_norm();
}

/// V diag(f(lambda)) V^dagger
template <std::size_t N>
CMatrix<N> spectral_compose(const EigenSystem<N>& es, const std::array<double, N>& values) {
    CMatrix<N> r;
    for (std::size_t k = 0; k < N; ++k) {
        if (values[k] == 0.0) continue;
        const CVector<N> col = es.vectors.column(k);
        r += outer(col, col) * values[k];
    }
    return (r + r.adjoint()) * 0.5;
}

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// [-tol, 0) and below the eigensolver noise floor are treated as zero.
template <std::size_t N>
CMatrix<N> psd_sqrt(const CMatrix<N>& m, double tol = 1e-9) {
    const auto es = herm_eig(m, tol);
    if (es.values[0] < -tol) {
        std::ostringstream os;
        os << "matrix is not positive semidefinite: most negative eigenvalue " << es.values[0]
           << " is below -" << tol;
        throw NotPsdError(os.str());
    }
    const double floor = eigen_noise_floor(m);
    std::array<double, N> roots{};
    for (std::size_t k = 0; k < N; ++k) roots[k] = es.values[k] <= floor ? 0.0 : std::sqrt(es.values[k]);
    return spectral_compose(es, roots);
}

template <std::size_t N>
bool is_psd(const CMatrix<N>& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    return herm_eig(m, tol).values[0] >= -tol;
}

// ---- two-qubit tensor structure ----
// Index of |a b> is 2a + b, qubit A is the left factor.

enum class Subsystem { A, B };

ComplexMatrix4 kron(const ComplexMatrix2& a, const ComplexMatrix2& b);
CVector<4> kron(const CVector<2>& a, const CVector<2>& b);

/// Traces out `traced`, returning the reduced matrix of the other qubit.
ComplexMatrix2 partial_trace(const ComplexMatrix4& rho, Subsystem traced);

ComplexMatrix4 partial_transpose(const ComplexMatrix4& rho, Subsystem transposed);

// Pauli matrices in (x, y, z) order; sigma_y is purely imaginary.
const std::array<ComplexMatrix2, 3>& pauli();

}  // namespace twoqubit
