#include "twoqubit/separability.hpp"

#include <cmath>

#include "twoqubit/entanglement.hpp"
#include "twoqubit/parallel.hpp"
#include "twoqubit/rng.hpp"

namespace twoqubit {

SeparabilityVerdict ppt_test(const DensityMatrix& rho, Subsystem transposed) {
    const auto m = in_basis(rho, Basis::standard).matrix();
    const auto es = herm_eig(partial_transpose(m, transposed), tolerance::density);
    SeparabilityVerdict v;
    v.min_pt_eigenvalue = es.values[0];
    v.separable = v.min_pt_eigenvalue >= -ppt_separable_tol;
    v.margin_flag = std::abs(v.min_pt_eigenvalue) <= ppt_margin;
    return v;
}

CampaignReport cross_validate(int n, int rank, std::uint64_t seed, double tol, int jobs) {
    if (n < 1) throw Error("cross_validate: n must be >= 1");

    struct Sample {
        bool flagged = false;
        bool entangled_c = false;
        bool agree = false;
        double c = 0.0;
        double min_pt = 0.0;
        ComplexMatrix4 matrix;
    };
    std::vector<Sample> samples(static_cast<std::size_t>(n));

    parallel_for(samples.size(), jobs, [&](std::size_t i) {
        const auto rho = random_density(rank, derive_seed(seed, i));
        const auto res = concurrence(rho);
        const auto ppt = ppt_test(rho);
        Sample& s = samples[i];
        s.c = res.c;
        s.min_pt = ppt.min_pt_eigenvalue;
        s.entangled_c = res.c > tol;
        s.flagged = ppt.margin_flag || std::abs(res.c_signed) <= tol;
        s.agree = s.entangled_c == !ppt.separable;
        s.matrix = rho.matrix();
    });

    CampaignReport report;
    report.n = n;
    report.rank = rank;
    report.seed = seed;
    report.measure_name = std::string(sampling_measure_name);
    report.tol = tol;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const Sample& s = samples[i];
        if (s.entangled_c) ++report.entangled;
        if (s.flagged) {
            ++report.flagged;
            continue;
        }
        if (s.agree)
            ++report.agreement;
        else
            report.disagreements.push_back({i, derive_seed(seed, i), s.c, s.min_pt, s.matrix});
    }
    report.entangled_fraction = static_cast<double>(report.entangled) / n;
    return report;
}

}  // namespace twoqubit
