#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "json.hpp"

namespace twoqubit {

/// One verified identity: the measured residual against its tolerance.
struct Check {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

inline Check make_check(std::string name, double residual, double tolerance) {
    const bool ok = !std::isnan(residual) && residual <= tolerance;
    return {std::move(name), residual, tolerance, ok};
}

inline bool all_pass(const std::vector<Check>& checks) {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

inline void to_json(nlohmann::json& j, const Check& c) {
    j = nlohmann::json{{"name", c.name}, {"residual", c.residual}, {"tolerance", c.tolerance}, {"pass", c.pass}};
}

}  // namespace twoqubit
