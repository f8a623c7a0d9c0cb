#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace twoqubit {

/// Seedable generator with a bit-stable output sequence on every platform:
/// the engine sequence is fixed by the standard and the real-valued
/// transforms below are written out by hand.
class Rng {
public:
    static constexpr const char* name = "mt19937_64+boxmuller/v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard complex Gaussian: real and imaginary parts iid N(0, 1).
    std::complex<double> complex_gaussian() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        return {radius * std::cos(angle), radius * std::sin(angle)};
    }

    double gaussian() { return complex_gaussian().real(); }

private:
    std::mt19937_64 engine_;
};

/// Derives an independent per-task seed from (master seed, stream index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    // splitmix64 finalizer over a golden-ratio stride
    std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace twoqubit
