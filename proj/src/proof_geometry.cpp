#include "twoqubit/proof_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "twoqubit/entanglement.hpp"
#include "twoqubit/rng.hpp"

namespace twoqubit {

namespace {

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double length(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 mat_vec(const Mat3& m, const Vec3& v) {
    Vec3 r{};
    for (std::size_t i = 0; i < 3; ++i) r[i] = dot(m[i], v);
    return r;
}

CMatrix<3> as_complex(const Mat3& m) {
    CMatrix<3> c;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) c(i, j) = m[i][j];
    return c;
}

double radical_inverse(unsigned index, unsigned base) {
    double result = 0.0, f = 1.0 / base;
    while (index > 0) {
        result += f * (index % base);
        index /= base;
        f /= base;
    }
    return result;
}

Vec3 random_ball_point(Rng& rng) {
    Vec3 d{rng.gaussian(), rng.gaussian(), rng.gaussian()};
    const double n = length(d);
    const double radius = std::cbrt(rng.uniform());
    for (auto& x : d) x *= radius / n;
    return d;
}

double entanglement_of_g(double g) { return cal_e(std::sqrt(std::clamp(g, 0.0, 1.0))); }

}  // namespace

RankTwoSupport support_of(const DensityMatrix& rho) {
    const auto es = herm_eig(in_basis(rho, Basis::magic).matrix(), tolerance::density);
    if (es.values[1] > tolerance::rank) {
        std::ostringstream os;
        os << "support_of: state has rank > 2 (third eigenvalue " << es.values[1] << ")";
        throw InvalidStateError(os.str());
    }
    if (es.values[2] <= tolerance::rank)
        throw InvalidStateError("support_of: state is pure; rank-1 states take the pure-state path");
    RankTwoSupport s;
    s.v1 = es.vectors.column(3);
    s.v2 = es.vectors.column(2);
    s.mu1 = es.values[3];
    s.mu2 = es.values[2];
    return s;
}

BlochPoint::BlochPoint(const Vec3& r) : r_(r) {
    if (length(r) > 1.0 + 1e-12) {
        std::ostringstream os;
        os << "Bloch vector of length " << length(r) << " lies outside the unit ball";
        throw Error(os.str());
    }
}

double BlochPoint::radius() const { return length(r_); }

ComplexMatrix2 BlochPoint::state() const {
    ComplexMatrix2 w = ComplexMatrix2::identity();
    for (std::size_t j = 0; j < 3; ++j) w += pauli()[j] * r_[j];
    return w * 0.5;
}

TauGeometry tau_of(const RankTwoSupport& s) {
    ComplexMatrix2 tau;
    tau(0, 0) = bilinear(s.v1, s.v1);
    tau(0, 1) = bilinear(s.v1, s.v2);
    tau(1, 0) = bilinear(s.v2, s.v1);
    tau(1, 1) = bilinear(s.v2, s.v2);
    return geometry_from_tau(tau);
}

TauGeometry geometry_from_tau(const ComplexMatrix2& tau) {
    TauGeometry g;
    g.tau = tau;
    const ComplexMatrix2 tau_c = tau.conj();
    const ComplexMatrix2 tt = tau_c * tau;
    g.det_abs = std::abs(tau(0, 0) * tau(1, 1) - tau(0, 1) * tau(1, 0));
    g.trace_tt = tt.trace().real();
    g.K = 0.25 * g.trace_tt - 0.5 * g.det_abs;
    const auto& sigma = pauli();
    for (std::size_t j = 0; j < 3; ++j) g.L[j] = 0.5 * (sigma[j] * tt).trace().real();
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            g.M[i][j] = 0.25 * (sigma[i].conj() * tau * sigma[j] * tau_c).trace().real();
            g.N[i][j] = g.M[i][j] + (i == j ? 0.5 * g.det_abs : 0.0);
        }
    return g;
}

double f_value(const BlochPoint& p, const TauGeometry& g) {
    const ComplexMatrix2 w = p.state();
    return (w.conj() * g.tau * w * g.tau.conj()).trace().real();
}

double f_quadratic(const BlochPoint& p, const TauGeometry& g) {
    const auto& r = p.r();
    return 0.25 * g.trace_tt + dot(r, g.L) + dot(r, mat_vec(g.M, r));
}

double g_value(const BlochPoint& p, const TauGeometry& g) {
    const double rr = dot(p.r(), p.r());
    return f_value(p, g) + 0.5 * g.det_abs * (rr - 1.0);
}

double g_quadratic(const BlochPoint& p, const TauGeometry& g) {
    const auto& r = p.r();
    return g.K + dot(r, g.L) + dot(r, mat_vec(g.N, r));
}

std::vector<Vec3> ball_points(int count) {
    std::vector<Vec3> pts;
    pts.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int k = 1; k <= count; ++k) {
        const auto idx = static_cast<unsigned>(k);
        const double radius = std::cbrt(radical_inverse(idx, 2));
        const double z = 2.0 * radical_inverse(idx, 3) - 1.0;
        const double phi = 2.0 * std::numbers::pi * radical_inverse(idx, 5);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        pts.push_back({radius * rho * std::cos(phi), radius * rho * std::sin(phi), radius * z});
    }
    return pts;
}

GMinimum min_g(const TauGeometry& g) {
    const auto es = herm_eig(as_complex(g.N), 1e-9);
    GMinimum out;
    out.degenerate = g.det_abs <= degenerate_det_threshold;
    for (std::size_t i = 0; i < 3; ++i) out.axis[i] = es.vectors(i, 0).real();
    const double axis_len = length(out.axis);
    for (auto& x : out.axis) x /= axis_len;

    // r* = -N^+ L / 2 over the non-null modes
    const double cutoff = 1e-9 * std::max(1.0, es.values[2]);
    Vec3 r{};
    for (std::size_t k = 0; k < 3; ++k) {
        if (es.values[k] <= cutoff) continue;
        Vec3 v{};
        for (std::size_t i = 0; i < 3; ++i) v[i] = es.vectors(i, k).real();
        const double coeff = -0.5 * dot(v, g.L) / es.values[k];
        for (std::size_t i = 0; i < 3; ++i) r[i] += coeff * v[i];
    }
    if (const double len = length(r); len > 1.0)
        for (auto& x : r) x /= len;
    out.minimizer = r;
    out.min_value = g_quadratic(BlochPoint(r), g);

    for (const auto& p : ball_points(1000)) out.min_value = std::min(out.min_value, g_quadratic(BlochPoint(p), g));
    return out;
}

CVector<2> sphere_coefficients(const Vec3& r) {
    const double z = std::clamp(r[2], -1.0, 1.0);
    if (1.0 + z <= 1e-300) return {0.0, 1.0};
    const double s = std::sqrt(2.0 * (1.0 + z));
    CVector<2> x{Complex((1.0 + z) / s, 0.0), Complex(r[0], r[1]) / s};
    const double n = norm(x);
    x[0] /= n;
    x[1] /= n;
    return x;
}

PureState support_state(const RankTwoSupport& s, const Vec3& unit_r) {
    const auto x = sphere_coefficients(unit_r);
    CVector<4> v;
    for (std::size_t i = 0; i < 4; ++i) v[i] = x[0] * s.v1[i] + x[1] * s.v2[i];
    const double n = norm(v);
    for (auto& a : v) a /= n;
    return PureState(v, Basis::magic);
}

ConstantGDecomposition constant_g_decomposition(const DensityMatrix& rho) {
    if (rho.rank() != 2) {
        std::ostringstream os;
        os << "constant_g_decomposition: requires a rank-2 state, got rank " << rho.rank();
        throw InvalidStateError(os.str());
    }
    const auto support = support_of(rho);
    const auto geom = tau_of(support);
    const auto minimum = min_g(geom);
    const Vec3& n = minimum.axis;
    const Vec3 r = bloch_of(support);

    // |r + t n| = 1
    const double b = dot(r, n);
    const double disc = std::sqrt(b * b - (dot(r, r) - 1.0));
    const double t_plus = -b + disc;
    const double t_minus = -b - disc;

    ConstantGDecomposition out;
    out.degenerate = minimum.degenerate;
    const std::array<double, 2> ts{t_plus, t_minus};
    const std::array<double, 2> weights{-t_minus / (t_plus - t_minus), t_plus / (t_plus - t_minus)};
    for (std::size_t k = 0; k < 2; ++k) {
        Vec3 p{};
        for (std::size_t i = 0; i < 3; ++i) p[i] = r[i] + ts[k] * n[i];
        const double len = length(p);
        for (auto& x : p) x /= len;
        out.points[k] = p;
        out.ensemble.probabilities.push_back(weights[k]);
        out.ensemble.states.push_back(from_magic(support_state(support, p)));
        out.g_members[k] = g_value(BlochPoint(p), geom);
    }
    out.g_rho = g_value(BlochPoint(r), geom);
    return out;
}

std::vector<Check> geometry_checks(const TauGeometry& g) {
    std::vector<Check> checks;
    checks.push_back(make_check("tau_symmetric", std::abs(g.tau(0, 1) - g.tau(1, 0)), 1e-12));

    double asym = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) asym = std::max(asym, std::abs(g.M[i][j] - g.M[j][i]));
    checks.push_back(make_check("m_symmetric", asym, 1e-12));

    const auto m_eig = herm_eig(as_complex(g.M), 1e-9).values;
    std::array<double, 3> expected{-0.5 * g.det_abs, 0.5 * g.det_abs, 0.25 * g.trace_tt};
    std::sort(expected.begin(), expected.end());
    double spec = 0.0;
    for (std::size_t k = 0; k < 3; ++k) spec = std::max(spec, std::abs(m_eig[k] - expected[k]));
    checks.push_back(make_check("m_spectrum", spec, 1e-9));

    const Vec3 ml = mat_vec(g.M, g.L);
    double eig_res = 0.0;
    for (std::size_t i = 0; i < 3; ++i) eig_res = std::max(eig_res, std::abs(ml[i] - 0.25 * g.trace_tt * g.L[i]));
    checks.push_back(make_check("l_eigenvector_of_m", eig_res, 1e-9));

    const auto n_eig = herm_eig(as_complex(g.N), 1e-9).values;
    Check n_check = make_check("n_psd_single_zero", std::abs(n_eig[0]), 1e-9);
    if (g.det_abs > degenerate_det_threshold && n_eig[1] <= 1e-9) n_check.pass = false;
    checks.push_back(n_check);
    return checks;
}

std::vector<Check> verify_proof_identities(const DensityMatrix& rho, std::uint64_t seed, int chords) {
    const auto res = concurrence(rho);
    const double l1 = res.spectrum.lambdas[0];
    const double l2 = res.spectrum.lambdas[1];
    std::vector<Check> checks;

    if (rho.rank() == 1) {
        const auto es = herm_eig(rho.matrix(), tolerance::density);
        const PureState psi(es.vectors.column(3), rho.basis());
        const double c = pure_concurrence(psi);
        checks.push_back(make_check("f_equals_lambda_squares", std::abs(c * c - (l1 * l1 + l2 * l2)), 1e-8));
        checks.push_back(make_check("cross_term_equals_minus_2_l1_l2", std::abs(2.0 * l1 * l2), 1e-8));
        checks.push_back(make_check("g_equals_lambda_gap_squared", std::abs(c * c - (l1 - l2) * (l1 - l2)), 1e-8));
        return checks;
    }

    const auto support = support_of(rho);
    const auto geom = tau_of(support);
    const BlochPoint r(bloch_of(support));
    const double rr = r.radius() * r.radius();

    const double f = f_value(r, geom);
    checks.push_back(make_check("f_equals_lambda_squares", std::abs(f - (l1 * l1 + l2 * l2)), 1e-8));
    const double cross = 0.5 * geom.det_abs * (rr - 1.0);
    checks.push_back(make_check("cross_term_equals_minus_2_l1_l2", std::abs(cross + 2.0 * l1 * l2), 1e-8));
    const double g = g_value(r, geom);
    checks.push_back(make_check("g_equals_lambda_gap_squared", std::abs(g - (l1 - l2) * (l1 - l2)), 1e-8));
    checks.push_back(
        make_check("sqrt_g_equals_rank2_c", std::abs(std::sqrt(std::max(g, 0.0)) - res.rank2_c.value_or(res.c)), 1e-8));

    Rng rng(seed);
    double violation = 0.0;
    for (int k = 0; k < chords; ++k) {
        const Vec3 a = random_ball_point(rng);
        const Vec3 b = random_ball_point(rng);
        const Vec3 mid{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
        const double fa = entanglement_of_g(g_quadratic(BlochPoint(a), geom));
        const double fb = entanglement_of_g(g_quadratic(BlochPoint(b), geom));
        const double fm = entanglement_of_g(g_quadratic(BlochPoint(mid), geom));
        violation = std::max(violation, fm - 0.5 * (fa + fb));
    }
    checks.push_back(make_check("midpoint_convexity_of_e_sqrt_g", violation, 1e-10));
    return checks;
}

}  // namespace twoqubit
