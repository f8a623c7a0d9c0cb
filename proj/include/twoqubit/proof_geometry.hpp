#pragma once

// Geometry behind the rank-2 formula. A rank-2 state lives on the span of
// its eigenvectors v1, v2; states on that span are 2x2 density matrices
// omega = (I + r.sigma)/2 in the Bloch ball, and
//   f(omega) = Tr[omega* tau omega tau*],  tau_ij = v_i . v_j (bilinear),
// equals C^2 on the sphere. Adding |det tau|(|r|^2 - 1)/2 gives the convex
// quadratic g = K + r.L + r^T N r, constant along the null axis of N.

#include <array>
#include <cstdint>
#include <vector>

#include "twoqubit/ensemble.hpp"
#include "twoqubit/matrix.hpp"
#include "twoqubit/report.hpp"
#include "twoqubit/states.hpp"

namespace twoqubit {

using Vec3 = std::array<double, 3>;
using Mat3 = std::array<std::array<double, 3>, 3>;

struct RankTwoSupport {
    CVector<4> v1, v2;  // magic basis, orthonormal
    double mu1 = 0.0;   // mu1 >= mu2 > 0
    double mu2 = 0.0;
};

/// Leading eigenpairs of a rank-2 state. Throws InvalidStateError when the
/// third eigenvalue exceeds the rank threshold or when rho is pure.
RankTwoSupport support_of(const DensityMatrix& rho);

/// Point of the closed unit ball; throws Error when |r| > 1 + 1e-12.
class BlochPoint {
public:
    explicit BlochPoint(const Vec3& r);

    const Vec3& r() const { return r_; }
    double radius() const;
    /// (I + r.sigma)/2
    ComplexMatrix2 state() const;

private:
    Vec3 r_;
};

struct TauGeometry {
    ComplexMatrix2 tau;
    double det_abs = 0.0;   // |det tau|
    double trace_tt = 0.0;  // Tr(tau* tau)
    double K = 0.0;         // Tr(tau* tau)/4 - |det tau|/2
    Vec3 L{};
    Mat3 M{};
    Mat3 N{};
};

inline constexpr double degenerate_det_threshold = 1e-9;

TauGeometry tau_of(const RankTwoSupport& s);
/// Geometry for an arbitrary symmetric 2x2 tau.
TauGeometry geometry_from_tau(const ComplexMatrix2& tau);

/// Tr[omega* tau omega tau*].
double f_value(const BlochPoint& p, const TauGeometry& g);
/// Tr(tau* tau)/4 + r.L + r^T M r.
double f_quadratic(const BlochPoint& p, const TauGeometry& g);
/// f + |det tau| (|r|^2 - 1)/2.
double g_value(const BlochPoint& p, const TauGeometry& g);
/// K + r.L + r^T N r.
double g_quadratic(const BlochPoint& p, const TauGeometry& g);

struct GMinimum {
    double min_value = 0.0;
    Vec3 axis{};       // unit null vector of N
    Vec3 minimizer{};  // closest minimizing point to the origin
    bool degenerate = false;
};

/// Minimum of g over the closed ball: the analytic minimizer of the
/// quadratic form, cross-checked on a low-discrepancy sample of the ball.
GMinimum min_g(const TauGeometry& g);

/// Coefficients (a, b) with (a, b)(a, b)^dagger = (I + r.sigma)/2 for |r| = 1.
CVector<2> sphere_coefficients(const Vec3& unit_r);

/// a v1 + b v2 for the sphere point r, in the magic basis.
PureState support_state(const RankTwoSupport& s, const Vec3& unit_r);

/// Bloch vector of rho itself in the (v1, v2) frame.
inline Vec3 bloch_of(const RankTwoSupport& s) { return {0.0, 0.0, s.mu1 - s.mu2}; }

struct ConstantGDecomposition {
    Ensemble ensemble;  // exactly two states, standard basis
    std::array<Vec3, 2> points{};
    double g_rho = 0.0;
    std::array<double, 2> g_members{};
    bool degenerate = false;
};

/// Splits a rank-2 state into two pure states on its constant-g line.
ConstantGDecomposition constant_g_decomposition(const DensityMatrix& rho);

/// Geometry invariants: tau symmetry, the spectrum of M, L as an
/// eigenvector of M, and N PSD with a single zero mode.
std::vector<Check> geometry_checks(const TauGeometry& g);

/// Identities linking the geometry to the R spectrum, plus midpoint
/// convexity of E(sqrt g) on `chords` random chords of the ball. Pure
/// states are checked through their concurrence (no ball, no chords).
std::vector<Check> verify_proof_identities(const DensityMatrix& rho, std::uint64_t seed, int chords = 1000);

/// Deterministic quasi-uniform points in the unit ball (Halton 2, 3, 5).
std::vector<Vec3> ball_points(int count);

}  // namespace twoqubit
