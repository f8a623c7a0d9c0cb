#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace twoqubit::cli {

enum ExitCode : int { ok = 0, input_error = 1, verification_failure = 2 };

/// Runs `twoqubit <args...>` (args exclude the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// One "path,value" row per JSON leaf, preceded by a header row. Numbers
/// are written exactly as the JSON rendering writes them.
std::string to_csv(const nlohmann::json& report);

}  // namespace twoqubit::cli
