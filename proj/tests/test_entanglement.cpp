#include "doctest.h"

#include <cmath>

#include "test_util.hpp"
#include "twoqubit/entanglement.hpp"

using namespace twoqubit;

namespace {

// Direct textbook evaluation, independent of the library's cancellation-free form.
double h2(double p) { return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p); }

const double h = 1.0 / std::sqrt(2.0);

DensityMatrix magic_diagonal(const std::array<double, 4>& p) {
    return DensityMatrix(ComplexMatrix4::diagonal(p), Basis::magic);
}

}  // namespace

TEST_CASE("binary_entropy") {
    CHECK(binary_entropy(0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(binary_entropy(0.9) == doctest::Approx(h2(0.9)).epsilon(1e-14));
    CHECK(binary_entropy(0.9) == doctest::Approx(0.46900).epsilon(1e-5));
    CHECK(binary_entropy(0.3) == doctest::Approx(binary_entropy(0.7)).epsilon(1e-15));
    CHECK_THROWS_AS(binary_entropy(1.1), Error);
    CHECK_THROWS_AS(binary_entropy(-1e-6), Error);
}

TEST_CASE("cal_e examples") {
    CHECK(cal_e(0.0) == 0.0);
    CHECK(cal_e(1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(cal_e(0.6) == doctest::Approx(h2(0.9)).epsilon(1e-13));
    CHECK(cal_e(0.5) == doctest::Approx(h2(0.5 + 0.5 * std::sqrt(0.75))).epsilon(1e-13));
    CHECK_THROWS_AS(cal_e(1.5), Error);
}

TEST_CASE("cal_e is monotone and convex on a fine grid") {
    const int n = 1000;
    std::vector<double> v(n + 1);
    for (int k = 0; k <= n; ++k) v[static_cast<std::size_t>(k)] = cal_e(static_cast<double>(k) / n);
    for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) CHECK(v[k + 1] - v[k] >= -1e-12);
    for (std::size_t k = 1; k < static_cast<std::size_t>(n); ++k) CHECK(v[k + 1] - 2 * v[k] + v[k - 1] >= -1e-12);
}

TEST_CASE("pure_concurrence examples") {
    CHECK(pure_concurrence(PureState({0.0, 0.0, 0.0, 1.0}, Basis::magic)) == doctest::Approx(1.0));
    CHECK(pure_concurrence(PureState({1.0, 0.0, 0.0, 0.0}, Basis::standard)) <= 1e-15);
    CHECK(pure_concurrence(PureState({h, h, 0.0, 0.0}, Basis::magic)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("pure_entanglement_entropy examples") {
    const PureState singlet(twoqubit::testing::singlet_standard(), Basis::standard);
    CHECK(pure_entanglement_entropy(singlet) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(pure_entanglement_entropy(PureState({1.0, 0.0, 0.0, 0.0}, Basis::standard)) <= 1e-15);

    const PureState partial({0.0, std::sqrt(0.9), std::sqrt(0.1), 0.0}, Basis::standard);
    CHECK(pure_entanglement_entropy(partial) == doctest::Approx(h2(0.9)).epsilon(1e-13));
    CHECK(pure_concurrence(partial) == doctest::Approx(0.6).epsilon(1e-14));
    CHECK(cal_e(pure_concurrence(partial)) == doctest::Approx(pure_entanglement_entropy(partial)).epsilon(1e-13));
}

TEST_CASE("pure states: E(C) equals the reduced-state entropy, for either subsystem") {
    Rng rng(101);
    double worst = 0.0, worst_ab = 0.0;
    for (int k = 0; k < 10000; ++k) {
        const auto psi = random_pure(rng);
        const double sb = pure_entanglement_entropy(psi, Subsystem::B);
        worst = std::max(worst, std::abs(cal_e(pure_concurrence(psi)) - sb));
        worst_ab = std::max(worst_ab, std::abs(pure_entanglement_entropy(psi, Subsystem::A) - sb));
    }
    CHECK(worst <= 1e-9);
    CHECK(worst_ab <= 1e-10);
}

TEST_CASE("r_matrix examples") {
    const auto bell = bell_mixture({0.5, 0.2, 0.2, 0.1});
    CHECK(max_abs_diff(r_matrix(bell), to_magic(bell).matrix()) <= 1e-12);

    const auto mixed = DensityMatrix(ComplexMatrix4::identity() * 0.25, Basis::standard);
    CHECK(max_abs_diff(r_matrix(mixed), ComplexMatrix4::identity() * 0.25) <= 1e-15);

    // For rho = |psi><psi|, rho* = |psi*><psi*| in the magic basis and
    // sqrt(rho) rho* sqrt(rho) = |<psi|psi*>|^2 rho = C^2 rho.
    Rng rng(103);
    for (int k = 0; k < 200; ++k) {
        const auto psi = random_pure(rng);
        const auto rho = to_magic(DensityMatrix::from_pure(psi));
        const double c = pure_concurrence(psi);
        const auto r = r_matrix(rho);
        CHECK(max_abs_diff(r, rho.matrix() * c) <= 1e-9);
        CHECK(std::abs(r.trace().real() - c) <= 1e-9);
    }
}

TEST_CASE("r_spectrum examples") {
    const auto s = r_spectrum(bell_mixture({0.1, 0.7, 0.1, 0.1}));
    CHECK(s.lambdas[0] == doctest::Approx(0.7).epsilon(1e-12));
    for (std::size_t k = 1; k < 4; ++k) CHECK(s.lambdas[k] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(s.trace_r == doctest::Approx(1.0).epsilon(1e-12));

    const auto singlet = DensityMatrix::from_pure(PureState(twoqubit::testing::singlet_standard(), Basis::standard));
    const auto ss = r_spectrum(singlet);
    CHECK(ss.lambdas[0] == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t k = 1; k < 4; ++k) CHECK(ss.lambdas[k] <= 1e-12);

    Rng rng(107);
    for (int k = 0; k < 300; ++k) {
        const auto rho = random_density(1 + k % 4, rng);
        const auto moved = conjugate_by(rho, random_local_unitary(rng));
        const auto a = r_spectrum(rho), b = r_spectrum(moved);
        for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(a.lambdas[i] - b.lambdas[i]) <= 1e-9);
    }
}

TEST_CASE("R spectrum: production path agrees with the two-root path") {
    Rng rng(109);
    double worst = 0.0;
    for (int k = 0; k < 2000; ++k) {
        const auto rho = random_density(1 + k % 4, rng);
        const auto a = r_spectrum(rho), b = r_spectrum_from_r_matrix(rho);
        for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(a.lambdas[i] - b.lambdas[i]));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("concurrence examples") {
    const auto bell = bell_mixture({0.75, 0.25, 0.0, 0.0});
    CHECK(concurrence(bell).c == doctest::Approx(0.5).epsilon(1e-12));

    const auto mixed = concurrence(DensityMatrix(ComplexMatrix4::identity() * 0.25, Basis::standard));
    CHECK(mixed.c == 0.0);
    CHECK(mixed.c_signed == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(mixed.conjectured);

    const auto r2 = concurrence(magic_diagonal({0.0, 0.0, 0.1, 0.9}));
    CHECK(r2.c == doctest::Approx(0.8).epsilon(1e-12));
    REQUIRE(r2.rank2_c.has_value());
    CHECK(*r2.rank2_c == doctest::Approx(0.8).epsilon(1e-12));
    CHECK_FALSE(r2.conjectured);
    CHECK(r2.entanglement == doctest::Approx(cal_e(0.8)).epsilon(1e-15));
}

TEST_CASE("entanglement_of_formation examples") {
    const auto singlet = DensityMatrix::from_pure(PureState(twoqubit::testing::singlet_standard(), Basis::standard));
    CHECK(entanglement_of_formation(singlet) == doctest::Approx(1.0).epsilon(1e-12));

    const double expected = h2(0.5 + 0.5 * std::sqrt(0.75));
    CHECK(expected == doctest::Approx(0.35458).epsilon(1e-5));
    CHECK(entanglement_of_formation(bell_mixture({0.75, 0.25, 0.0, 0.0})) ==
          doctest::Approx(expected).epsilon(1e-12));

    Rng rng(113);
    for (int k = 0; k < 200; ++k) {
        const auto ra = twoqubit::testing::random_qubit_density(rng);
        const auto rb = twoqubit::testing::random_qubit_density(rng);
        CHECK(entanglement_of_formation(DensityMatrix(kron(ra, rb), Basis::standard)) <= 1e-12);
    }
}

TEST_CASE("mixed formula reduces to the pure concurrence and entropy") {
    Rng rng(127);
    for (int k = 0; k < 2000; ++k) {
        const auto psi = random_pure(rng);
        const auto res = concurrence(DensityMatrix::from_pure(psi));
        CHECK(std::abs(res.c - pure_concurrence(psi)) <= 1e-9);
        CHECK(std::abs(res.entanglement - pure_entanglement_entropy(psi)) <= 1e-9);
        CHECK(res.rank == 1);
    }
}

TEST_CASE("concurrence is local-unitary invariant and bounded") {
    Rng rng(131);
    for (int k = 0; k < 1000; ++k) {
        const auto rho = random_density(1 + k % 4, rng);
        const auto a = concurrence(rho);
        const auto b = concurrence(conjugate_by(rho, random_local_unitary(rng)));
        CHECK(std::abs(a.c - b.c) <= 1e-9);
        CHECK(a.c >= 0.0);
        CHECK(a.c <= 1.0);
        CHECK(a.entanglement >= 0.0);
        CHECK(a.entanglement <= 1.0);
        CHECK(a.spectrum.trace_r <= 1.0 + 1e-9);
    }
}

TEST_CASE("rank-2 states: max(0, 2 lambda_max - Tr R) equals |lambda_1 - lambda_2|") {
    Rng rng(137);
    double worst = 0.0;
    for (int k = 0; k < 1000; ++k) {
        const auto res = concurrence(random_density(2, rng));
        REQUIRE(res.rank2_c.has_value());
        worst = std::max(worst, std::abs(res.c - *res.rank2_c));
    }
    CHECK(worst <= 1e-9);
}
