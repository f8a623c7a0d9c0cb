#include "doctest.h"

#include "test_util.hpp"
#include "twoqubit/entanglement.hpp"
#include "twoqubit/separability.hpp"

using namespace twoqubit;
using twoqubit::testing::random_qubit_density;

TEST_CASE("ppt_test examples") {
    const auto mixed = ppt_test(DensityMatrix(ComplexMatrix4::identity() * 0.25, Basis::standard));
    CHECK(mixed.min_pt_eigenvalue == doctest::Approx(0.25));
    CHECK(mixed.separable);
    CHECK_FALSE(mixed.margin_flag);

    const auto singlet =
        ppt_test(DensityMatrix::from_pure(PureState(twoqubit::testing::singlet_standard(), Basis::standard)));
    CHECK(singlet.min_pt_eigenvalue == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK_FALSE(singlet.separable);

    Rng rng(301);
    for (int k = 0; k < 200; ++k) {
        const DensityMatrix prod(kron(random_qubit_density(rng), random_qubit_density(rng)), Basis::standard);
        CHECK(ppt_test(prod).separable);
    }
}

TEST_CASE("ppt_test accepts magic-basis input") {
    const auto rho = random_density(4, std::uint64_t{303});
    CHECK(ppt_test(to_magic(rho)).min_pt_eigenvalue == doctest::Approx(ppt_test(rho).min_pt_eigenvalue));
}

TEST_CASE("ppt verdict does not depend on the transposed subsystem") {
    Rng rng(307);
    for (int k = 0; k < 1000; ++k) {
        const auto rho = random_density(1 + k % 4, rng);
        const auto a = ppt_test(rho, Subsystem::A), b = ppt_test(rho, Subsystem::B);
        CHECK(a.separable == b.separable);
        CHECK(std::abs(a.min_pt_eigenvalue - b.min_pt_eigenvalue) <= 1e-12);
    }
}

TEST_CASE("separable by construction means zero concurrence") {
    Rng rng(311);
    for (int k = 0; k < 300; ++k) {
        const DensityMatrix prod(kron(random_qubit_density(rng), random_qubit_density(rng)), Basis::standard);
        CHECK(concurrence(prod).c <= 1e-7);

        const int members = 1 + k % 16;
        ComplexMatrix4 mix;
        double total = 0.0;
        std::vector<double> w(static_cast<std::size_t>(members));
        for (auto& x : w) total += (x = rng.uniform() + 1e-3);
        for (int j = 0; j < members; ++j) {
            const auto a = random_unitary2(rng).column(0), b = random_unitary2(rng).column(0);
            const auto v = kron(a, b);
            mix += outer(v, v) * (w[static_cast<std::size_t>(j)] / total);
        }
        const DensityMatrix sep(mix, Basis::standard);
        CHECK(concurrence(sep).c <= 1e-7);
        CHECK(ppt_test(sep).separable);
    }
}

TEST_CASE("cross_validate: rank 4 and rank 2 campaigns agree on every unflagged sample") {
    const auto r4 = cross_validate(5000, 4, 2024);
    CHECK(r4.n == 5000);
    CHECK(r4.disagreements.empty());
    CHECK(r4.agreement == r4.unflagged());
    CHECK(r4.entangled_fraction > 0.0);
    CHECK(r4.entangled_fraction < 1.0);
    CHECK(r4.measure_name == std::string(sampling_measure_name));
    MESSAGE("rank-4 entangled fraction: " << r4.entangled_fraction << " (flagged " << r4.flagged << ")");

    const auto r2 = cross_validate(1000, 2, 2025);
    CHECK(r2.disagreements.empty());
    CHECK(r2.agreement == r2.unflagged());
}

TEST_CASE("cross_validate is independent of the job count") {
    const auto a = cross_validate(300, 3, 77, 1e-7, 1);
    const auto b = cross_validate(300, 3, 77, 1e-7, 4);
    CHECK(a.agreement == b.agreement);
    CHECK(a.flagged == b.flagged);
    CHECK(a.entangled == b.entangled);
    CHECK_THROWS_AS(cross_validate(0, 4, 1), Error);
}
