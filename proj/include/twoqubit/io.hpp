#pragma once

// State files. Density matrix: {"basis": ..., "matrix": [[[re, im] x4] x4]},
// pure state: {"basis": ..., "amplitudes": [[re, im] x4]}; standard-basis
// order uu, ud, du, dd. Numbers are written with 17 significant digits.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "twoqubit/states.hpp"

namespace twoqubit {

std::string to_json_text(const DensityMatrix& rho);
std::string to_json_text(const PureState& psi);

/// Parses either file kind into a density matrix. A missing "basis" field
/// falls back to `default_basis`; errors name the line/column or JSON path.
/// Throws ParseError for malformed documents, InvalidStateError for
/// well-formed documents that fail state validation.
DensityMatrix parse_state(std::string_view text, Basis default_basis = Basis::standard,
                          std::string_view source = "<input>");
PureState parse_pure_state(std::string_view text, std::string_view source = "<input>");

DensityMatrix read_state_file(const std::filesystem::path& path, Basis default_basis = Basis::standard);

/// Throws Error on I/O failure.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

/// JSON encodings used inside reports (doubles round-trip exactly).
nlohmann::json state_to_json(const DensityMatrix& rho);
nlohmann::json state_to_json(const PureState& psi);

}  // namespace twoqubit
