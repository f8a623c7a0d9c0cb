#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "twoqubit/states.hpp"

namespace twoqubit {

struct SeparabilityVerdict {
    double min_pt_eigenvalue = 0.0;
    bool separable = false;    // min_pt_eigenvalue >= -1e-9
    bool margin_flag = false;  // |min_pt_eigenvalue| <= 1e-7, too close to call
};

inline constexpr double ppt_separable_tol = 1e-9;
inline constexpr double ppt_margin = 1e-7;

/// Peres-Horodecki test: smallest eigenvalue of the partial transpose,
/// taken in the standard basis.
SeparabilityVerdict ppt_test(const DensityMatrix& rho, Subsystem transposed = Subsystem::B);

struct Disagreement {
    std::uint64_t index = 0;
    std::uint64_t sample_seed = 0;
    double c = 0.0;
    double min_pt_eigenvalue = 0.0;
    ComplexMatrix4 matrix;  // standard basis
};

struct CampaignReport {
    int n = 0;
    int rank = 0;
    std::uint64_t seed = 0;
    std::string measure_name;
    double tol = 0.0;
    int agreement = 0;  // unflagged samples where both verdicts match
    int flagged = 0;    // excluded from the agreement denominator
    int entangled = 0;  // by the concurrence formula, over all samples
    double entangled_fraction = 0.0;
    std::vector<Disagreement> disagreements;

    int unflagged() const { return n - flagged; }
    bool all_agree() const { return disagreements.empty(); }
};

/// Samples n states of the given rank (sample i drawn from
/// derive_seed(seed, i)) and compares c > tol against PPT violation.
/// Samples whose signed concurrence or PT eigenvalue fall within the
/// margin band are flagged instead of counted.
CampaignReport cross_validate(int n, int rank, std::uint64_t seed, double tol = 1e-7, int jobs = 1);

}  // namespace twoqubit
