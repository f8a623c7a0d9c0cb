#include "twoqubit/states.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

namespace twoqubit {

std::string_view to_string(Basis b) { return b == Basis::standard ? "standard" : "magic"; }

Basis basis_from_string(std::string_view s) {
    if (s == "standard") return Basis::standard;
    if (s == "magic") return Basis::magic;
    throw ParseError("unknown basis \"" + std::string(s) + "\" (expected \"standard\" or \"magic\")");
}

const ComplexMatrix4& magic_basis() {
    static const ComplexMatrix4 q = [] {
        const double h = 1.0 / std::numbers::sqrt2;
        const Complex i(0.0, 1.0);
        const CVector<4> e1{h, 0.0, 0.0, h};
        const CVector<4> e2{i * h, 0.0, 0.0, -i * h};
        const CVector<4> e3{0.0, i * h, i * h, 0.0};
        const CVector<4> e4{0.0, h, -h, 0.0};
        return ComplexMatrix4::from_columns({e1, e2, e3, e4});
    }();
    return q;
}

// ---- PureState ----

PureState::PureState(const CVector<4>& amplitudes, Basis basis) : amps_(amplitudes), basis_(basis) {
    const double n = norm(amps_);
    if (!(std::abs(n * n - 1.0) <= tolerance::pure_norm)) {
        std::ostringstream os;
        os << "pure state is not normalized: sum |amplitude|^2 = " << n * n;
        throw InvalidStateError(os.str());
    }
}

// ---- DensityMatrix ----

DensityMatrix::DensityMatrix(const ComplexMatrix4& matrix, Basis basis) : m_(matrix), basis_(basis) {
    const double herm = hermiticity_defect(m_);
    if (herm > tolerance::density) {
        std::ostringstream os;
        os << "density matrix is not Hermitian: max |rho - rho^dagger| = " << herm;
        throw InvalidStateError(os.str());
    }
    const Complex tr = m_.trace();
    if (std::abs(tr - 1.0) > tolerance::density) {
        std::ostringstream os;
        os << "density matrix trace is " << tr.real() << (tr.imag() >= 0 ? "+" : "") << tr.imag()
           << "i, expected 1";
        throw InvalidStateError(os.str());
    }
    eigenvalues_ = herm_eig(m_, tolerance::density).values;
    if (eigenvalues_[0] < -tolerance::density) {
        std::ostringstream os;
        os << "density matrix is not positive semidefinite: eigenvalue " << eigenvalues_[0];
        throw InvalidStateError(os.str());
    }
}

DensityMatrix::DensityMatrix(const ComplexMatrix4& matrix, Basis basis, const std::array<double, 4>& eigenvalues,
                             Trusted)
    : m_(matrix), basis_(basis), eigenvalues_(eigenvalues) {}

DensityMatrix DensityMatrix::from_pure(const PureState& psi) {
    return DensityMatrix(outer(psi.amplitudes(), psi.amplitudes()), psi.basis());
}

int DensityMatrix::rank() const {
    int r = 0;
    for (double v : eigenvalues_)
        if (v > tolerance::rank) ++r;
    return r;
}

// ---- basis changes ----

PureState to_magic(const PureState& psi) {
    if (psi.basis() != Basis::standard) throw InvalidStateError("to_magic: state is already in the magic basis");
    return PureState(magic_basis().adjoint() * psi.amplitudes(), Basis::magic);
}

PureState from_magic(const PureState& psi) {
    if (psi.basis() != Basis::magic) throw InvalidStateError("from_magic: state is not in the magic basis");
    return PureState(magic_basis() * psi.amplitudes(), Basis::standard);
}

DensityMatrix to_magic(const DensityMatrix& rho) {
    if (rho.basis() != Basis::standard) throw InvalidStateError("to_magic: state is already in the magic basis");
    const auto& q = magic_basis();
    return DensityMatrix(q.adjoint() * rho.matrix() * q, Basis::magic, rho.eigenvalues(), DensityMatrix::Trusted{});
}

DensityMatrix from_magic(const DensityMatrix& rho) {
    if (rho.basis() != Basis::magic) throw InvalidStateError("from_magic: state is not in the magic basis");
    const auto& q = magic_basis();
    return DensityMatrix(q * rho.matrix() * q.adjoint(), Basis::standard, rho.eigenvalues(),
                         DensityMatrix::Trusted{});
}

PureState in_basis(const PureState& psi, Basis target) {
    if (psi.basis() == target) return psi;
    return target == Basis::magic ? to_magic(psi) : from_magic(psi);
}

DensityMatrix in_basis(const DensityMatrix& rho, Basis target) {
    if (rho.basis() == target) return rho;
    return target == Basis::magic ? to_magic(rho) : from_magic(rho);
}

DensityMatrix magic_conjugate(const DensityMatrix& rho) {
    const DensityMatrix m = in_basis(rho, Basis::magic);
    // conj(rho) has the same spectrum as rho
    const DensityMatrix conj(m.matrix().conj(), Basis::magic, rho.eigenvalues(), DensityMatrix::Trusted{});
    return in_basis(conj, rho.basis());
}

DensityMatrix bell_mixture(const std::array<double, 4>& probabilities) {
    ComplexMatrix4 m;
    for (std::size_t k = 0; k < 4; ++k) {
        const auto e = magic_basis().column(k);
        m += outer(e, e) * probabilities[k];
    }
    return DensityMatrix(m, Basis::standard);
}

// ---- sampling ----

PureState random_pure(Rng& rng) {
    CVector<4> v;
    for (auto& x : v) x = rng.complex_gaussian();
    const double n = norm(v);
    for (auto& x : v) x /= n;
    return PureState(v, Basis::standard);
}

PureState random_pure(std::uint64_t seed) {
    Rng rng(seed);
    return random_pure(rng);
}

DensityMatrix random_density(int rank, Rng& rng) {
    if (rank < 1 || rank > 4) throw Error("random_density: rank must be in 1..4, got " + std::to_string(rank));
    std::array<CVector<4>, 4> cols{};
    for (int j = 0; j < rank; ++j)
        for (auto& x : cols[static_cast<std::size_t>(j)]) x = rng.complex_gaussian();
    ComplexMatrix4 m;
    for (int j = 0; j < rank; ++j) m += outer(cols[static_cast<std::size_t>(j)], cols[static_cast<std::size_t>(j)]);
    m *= 1.0 / m.trace().real();
    return DensityMatrix(m, Basis::standard);
}

DensityMatrix random_density(int rank, std::uint64_t seed) {
    Rng rng(seed);
    return random_density(rank, rng);
}

namespace {

// Gram-Schmidt QR of a Ginibre matrix; R comes out with a positive real
// diagonal, which is exactly the phase fix that makes Q Haar distributed.
template <std::size_t N>
CMatrix<N> haar_unitary(Rng& rng) {
    std::array<CVector<N>, N> cols{};
    for (auto& c : cols)
        for (auto& x : c) x = rng.complex_gaussian();
    for (std::size_t j = 0; j < N; ++j) {
        for (int pass = 0; pass < 2; ++pass)
            for (std::size_t k = 0; k < j; ++k) {
                const Complex proj = inner(cols[k], cols[j]);
                for (std::size_t i = 0; i < N; ++i) cols[j][i] -= proj * cols[k][i];
            }
        const double n = norm(cols[j]);
        for (auto& x : cols[j]) x /= n;
    }
    return CMatrix<N>::from_columns(cols);
}

}  // namespace

ComplexMatrix2 random_unitary2(Rng& rng) { return haar_unitary<2>(rng); }
ComplexMatrix4 random_unitary4(Rng& rng) { return haar_unitary<4>(rng); }

ComplexMatrix4 random_local_unitary(Rng& rng) {
    const auto ua = random_unitary2(rng);
    const auto ub = random_unitary2(rng);
    return kron(ua, ub);
}

ComplexMatrix4 random_local_unitary(std::uint64_t seed) {
    Rng rng(seed);
    return random_local_unitary(rng);
}

std::array<double, 4> random_simplex(Rng& rng) {
    std::array<double, 4> p{};
    double s = 0.0;
    for (auto& x : p) {
        x = -std::log(1.0 - rng.uniform());
        s += x;
    }
    for (auto& x : p) x /= s;
    return p;
}

DensityMatrix conjugate_by(const DensityMatrix& rho, const ComplexMatrix4& u) {
    return DensityMatrix(u * rho.matrix() * u.adjoint(), rho.basis());
}

MagicRealness is_real_in_magic(const ComplexMatrix4& u, double tol) {
    if (!is_unitary(u, tol)) throw Error("is_real_in_magic: matrix is not unitary within tolerance");
    const auto& q = magic_basis();
    const ComplexMatrix4 um = q.adjoint() * u * q;

    Complex pivot = 0.0;
    for (const auto& v : um.entries())
        if (std::abs(v) > std::abs(pivot)) pivot = v;
    const double phase = std::arg(pivot);
    const Complex unphase = std::polar(1.0, -phase);

    MagicRealness out;
    out.phase = phase;
    out.real = true;
    for (const auto& v : um.entries())
        if (std::abs((v * unphase).imag()) > tol) {
            out.real = false;
            break;
        }
    return out;
}

}  // namespace twoqubit
