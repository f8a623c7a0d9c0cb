#pragma once

// Seeded verification campaigns behind `twoqubit verify`. Every suite draws
// sample i from derive_seed(suite_seed, i), evaluates its checks per sample
// and reduces them in index order, so reports are byte-identical for a given
// config regardless of the job count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "twoqubit/convex_roof.hpp"
#include "twoqubit/states.hpp"

namespace twoqubit {

struct VerifyConfig {
    std::string suite = "all";
    std::uint64_t seed = 1;
    std::optional<int> n;       // per-suite default when unset
    std::optional<int> rank;    // ppt: only this rank; roof: rank of the sampled states
    std::optional<double> tol;  // ppt decision threshold; roof agreement bound
    int jobs = 1;
    int restarts = 32;    // roof optimizer budget
    int max_iters = 2000;
};

/// pure, bell, rank2, ppt, proof, roof, invariance
const std::vector<std::string>& verify_suite_names();

struct VerifyOutcome {
    nlohmann::json report;
    bool pass = false;
};

/// Throws ConfigError for an unknown suite or out-of-range n, rank, tol or jobs.
VerifyOutcome run_verify(const VerifyConfig& config);

nlohmann::json config_to_json(const VerifyConfig& config);

/// {target_eof, min_average, gap, restarts, iters_used, seed, ensemble {p, states}}
/// plus the remaining optimizer options.
nlohmann::json roof_report(const DensityMatrix& rho, const MinimizeOptions& options, const MinimizeResult& result);

}  // namespace twoqubit
