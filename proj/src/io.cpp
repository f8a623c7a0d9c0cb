#include "twoqubit/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace twoqubit {

namespace {

using nlohmann::json;

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string pair_text(Complex z) { return "[" + num(z.real()) + ", " + num(z.imag()) + "]"; }

std::string basis_line(Basis b) { return "{\n  \"basis\": \"" + std::string(to_string(b)) + "\",\n"; }

[[noreturn]] void schema_error(std::string_view source, const std::string& path, const std::string& what) {
    throw ParseError(std::string(source) + ": " + path + ": " + what);
}

// Line and column (1-based) of a byte offset.
std::pair<std::size_t, std::size_t> locate(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_document(std::string_view text, std::string_view source) {
    try {
        json j = json::parse(text.begin(), text.end());
        if (!j.is_object()) schema_error(source, "$", "expected a JSON object");
        return j;
    } catch (const json::parse_error& e) {
        // nlohmann reports the offset one past the offending byte
        const auto [line, col] = locate(text, e.byte == 0 ? 0 : e.byte - 1);
        std::string msg = e.what();
        if (const auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
        throw ParseError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
    }
}

Basis read_basis(const json& j, Basis fallback, std::string_view source) {
    if (!j.contains("basis")) return fallback;
    const auto& b = j.at("basis");
    if (!b.is_string()) schema_error(source, "basis", "expected a string");
    try {
        return basis_from_string(b.get<std::string>());
    } catch (const ParseError& e) {
        schema_error(source, "basis", e.what());
    }
}

Complex read_complex(const json& j, std::string_view source, const std::string& path) {
    if (!j.is_array() || j.size() != 2) schema_error(source, path, "expected [re, im]");
    for (std::size_t k = 0; k < 2; ++k)
        if (!j[k].is_number()) schema_error(source, path + "[" + std::to_string(k) + "]", "expected a number");
    return {j[0].get<double>(), j[1].get<double>()};
}

const json& require_array(const json& j, std::size_t size, std::string_view source, const std::string& path) {
    if (!j.is_array() || j.size() != size)
        schema_error(source, path, "expected an array of " + std::to_string(size) + " entries");
    return j;
}

CVector<4> read_amplitudes(const json& j, std::string_view source) {
    const auto& a = require_array(j.at("amplitudes"), 4, source, "amplitudes");
    CVector<4> v;
    for (std::size_t i = 0; i < 4; ++i) v[i] = read_complex(a[i], source, "amplitudes[" + std::to_string(i) + "]");
    return v;
}

ComplexMatrix4 read_matrix(const json& j, std::string_view source) {
    const auto& rows = require_array(j.at("matrix"), 4, source, "matrix");
    ComplexMatrix4 m;
    for (std::size_t i = 0; i < 4; ++i) {
        const std::string row_path = "matrix[" + std::to_string(i) + "]";
        const auto& row = require_array(rows[i], 4, source, row_path);
        for (std::size_t k = 0; k < 4; ++k) m(i, k) = read_complex(row[k], source, row_path + "[" + std::to_string(k) + "]");
    }
    return m;
}

json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

}  // namespace

std::string to_json_text(const DensityMatrix& rho) {
    std::string out = basis_line(rho.basis()) + "  \"matrix\": [\n";
    for (std::size_t i = 0; i < 4; ++i) {
        out += "    [";
        for (std::size_t k = 0; k < 4; ++k) out += (k ? ", " : "") + pair_text(rho.matrix()(i, k));
        out += i < 3 ? "],\n" : "]\n";
    }
    return out + "  ]\n}\n";
}

std::string to_json_text(const PureState& psi) {
    std::string out = basis_line(psi.basis()) + "  \"amplitudes\": [";
    for (std::size_t i = 0; i < 4; ++i) out += (i ? ", " : "") + pair_text(psi.amplitudes()[i]);
    return out + "]\n}\n";
}

DensityMatrix parse_state(std::string_view text, Basis default_basis, std::string_view source) {
    const json j = parse_document(text, source);
    const bool has_matrix = j.contains("matrix"), has_amps = j.contains("amplitudes");
    if (has_matrix == has_amps) schema_error(source, "$", "expected exactly one of \"matrix\" or \"amplitudes\"");
    const Basis basis = read_basis(j, default_basis, source);
    try {
        if (has_amps) return DensityMatrix::from_pure(PureState(read_amplitudes(j, source), basis));
        return DensityMatrix(read_matrix(j, source), basis);
    } catch (const ParseError&) {
        throw;
    } catch (const InvalidStateError& e) {
        throw InvalidStateError(std::string(source) + ": " + e.what());
    }
}

PureState parse_pure_state(std::string_view text, std::string_view source) {
    const json j = parse_document(text, source);
    if (!j.contains("amplitudes")) schema_error(source, "amplitudes", "missing field");
    try {
        return PureState(read_amplitudes(j, source), read_basis(j, Basis::standard, source));
    } catch (const ParseError&) {
        throw;
    } catch (const InvalidStateError& e) {
        throw InvalidStateError(std::string(source) + ": " + e.what());
    }
}

DensityMatrix read_state_file(const std::filesystem::path& path, Basis default_basis) {
    return parse_state(read_text_file(path), default_basis, path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string() + " for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    if (!out) throw Error("write to " + path.string() + " failed");
}

json state_to_json(const DensityMatrix& rho) {
    json rows = json::array();
    for (std::size_t i = 0; i < 4; ++i) {
        json row = json::array();
        for (std::size_t k = 0; k < 4; ++k) row.push_back(complex_json(rho.matrix()(i, k)));
        rows.push_back(std::move(row));
    }
    return {{"basis", to_string(rho.basis())}, {"matrix", std::move(rows)}};
}

json state_to_json(const PureState& psi) {
    json amps = json::array();
    for (const auto& z : psi.amplitudes()) amps.push_back(complex_json(z));
    return {{"basis", to_string(psi.basis())}, {"amplitudes", std::move(amps)}};
}

}  // namespace twoqubit
