#include "twoqubit/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace twoqubit {

namespace {

constexpr double domain_slack = 1e-12;

double checked_unit_interval(double x, const char* what) {
    if (!(x >= -domain_slack && x <= 1.0 + domain_slack)) {
        std::ostringstream os;
        os << what << ": argument " << x << " outside [0, 1]";
        throw Error(os.str());
    }
    return std::clamp(x, 0.0, 1.0);
}

double xlog2x(double x) { return x <= 0.0 ? 0.0 : x * std::log2(x); }

// H(p) from the smaller probability, avoiding the 1 - p cancellation.
double entropy_from_minor(double minor) { return -(xlog2x(minor) + xlog2x(1.0 - minor)); }

RSpectrum spectrum_from_values(const std::array<double, 4>& ascending) {
    RSpectrum s;
    for (std::size_t k = 0; k < 4; ++k) s.lambdas[k] = std::max(0.0, ascending[3 - k]);
    std::sort(s.lambdas.begin(), s.lambdas.end(), std::greater<>());
    s.trace_r = s.lambdas[0] + s.lambdas[1] + s.lambdas[2] + s.lambdas[3];
    return s;
}

}  // namespace

double binary_entropy(double x) {
    x = checked_unit_interval(x, "binary_entropy");
    return entropy_from_minor(std::min(x, 1.0 - x));
}

double cal_e(double x) {
    x = checked_unit_interval(x, "cal_e");
    const double root = std::sqrt(1.0 - x * x);
    // 1/2 - root/2 written without cancellation
    const double minor = x * x / (2.0 * (1.0 + root));
    return entropy_from_minor(minor);
}

double von_neumann_entropy(const ComplexMatrix2& rho) {
    const auto es = herm_eig(rho, tolerance::density);
    double s = 0.0;
    for (double v : es.values) s -= xlog2x(std::max(0.0, v));
    return s;
}

double pure_concurrence(const PureState& psi) {
    const auto alpha = in_basis(psi, Basis::magic).amplitudes();
    return std::abs(bilinear(alpha, alpha));
}

double pure_entanglement_entropy(const PureState& psi, Subsystem traced) {
    const auto v = in_basis(psi, Basis::standard).amplitudes();
    return von_neumann_entropy(partial_trace(outer(v, v), traced));
}

ComplexMatrix4 r_matrix(const DensityMatrix& rho) {
    const auto m = in_basis(rho, Basis::magic).matrix();
    const auto root = psd_sqrt(m);
    const auto inner_product = root * m.conj() * root;
    return psd_sqrt((inner_product + inner_product.adjoint()) * 0.5);
}

RSpectrum r_spectrum(const DensityMatrix& rho) {
    const auto m = in_basis(rho, Basis::magic).matrix();
    const auto root = psd_sqrt(m);
    const auto a = root * m.conj() * root;
    const auto es = herm_eig(a, tolerance::density);
    const double floor = eigen_noise_floor(a);
    std::array<double, 4> values{};
    for (std::size_t k = 0; k < 4; ++k) values[k] = es.values[k] <= floor ? 0.0 : std::sqrt(es.values[k]);
    return spectrum_from_values(values);
}

RSpectrum r_spectrum_from_r_matrix(const DensityMatrix& rho) {
    return spectrum_from_values(herm_eig(r_matrix(rho), tolerance::density).values);
}

ConcurrenceResult concurrence(const DensityMatrix& rho) {
    ConcurrenceResult out;
    out.spectrum = r_spectrum(rho);
    const auto& l = out.spectrum.lambdas;
    out.c_signed = 2.0 * l[0] - out.spectrum.trace_r;
    out.c = std::clamp(out.c_signed, 0.0, 1.0);
    out.entanglement = cal_e(out.c);
    out.rank = rho.rank();
    if (out.rank <= 2)
        out.rank2_c = std::abs(l[0] - l[1]);
    else
        out.conjectured = true;
    return out;
}

double entanglement_of_formation(const DensityMatrix& rho) { return concurrence(rho).entanglement; }

}  // namespace twoqubit
