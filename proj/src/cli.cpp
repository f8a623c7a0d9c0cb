#include "twoqubit/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "twoqubit/convex_roof.hpp"
#include "twoqubit/entanglement.hpp"
#include "twoqubit/io.hpp"
#include "twoqubit/report.hpp"
#include "twoqubit/rng.hpp"
#include "twoqubit/separability.hpp"
#include "twoqubit/verify.hpp"

namespace twoqubit::cli {

namespace {

using nlohmann::json;

// Reached on bad input or configuration; maps to exit code 1.
struct InputError : Error {
    using Error::Error;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
}

void flatten(const json& j, const std::string& path, std::string& out) {
    if (j.is_object() && !j.empty()) {
        for (const auto& [key, value] : j.items()) flatten(value, path.empty() ? key : path + "." + key, out);
    } else if (j.is_array() && !j.empty()) {
        for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "." + std::to_string(i), out);
    } else {
        std::string value;
        if (j.is_string())
            value = csv_field(j.get<std::string>());
        else if (!j.is_null())
            value = j.dump();
        out += csv_field(path) + "," + value + "\n";
    }
}

struct Common {
    std::uint64_t seed = 1;
    std::optional<int> n;
    std::optional<int> rank;
    std::optional<double> tol;
    std::string format = "json";
    std::string out;
    int jobs = 1;
};

void add_common(CLI::App* app, Common& c, bool with_n_rank) {
    app->add_option("--seed", c.seed, "Master seed (u64)")->capture_default_str();
    if (with_n_rank) {
        app->add_option("--n", c.n, "Sample count")->check(CLI::PositiveNumber);
        app->add_option("--rank", c.rank, "State rank")->check(CLI::Range(1, 4));
    }
    app->add_option("--tol", c.tol, "Tolerance override")->check(CLI::PositiveNumber);
    app->add_option("--format", c.format, "Report format")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app->add_option("--out", c.out, "Output path (default: stdout)");
    app->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
}

void emit(const json& report, const Common& c, std::ostream& out) {
    const std::string text = c.format == "csv" ? to_csv(report) : report.dump(2) + "\n";
    if (c.out.empty())
        out << text;
    else
        try {
            write_text_file(c.out, text);
        } catch (const Error& e) {
            throw InputError(e.what());
        }
}

json header(const std::string& command) {
    return {{"command", command}, {"version", TWOQUBIT_VERSION}, {"rng", Rng::name}, {"measure_name", sampling_measure_name}};
}

// ---- analyze ----

struct AnalyzeArgs {
    std::string input;
    std::optional<std::string> basis;
    bool minimize = false;
    int restarts = 32;
    int max_iters = 2000;
    int ensemble_size = 4;
};

int cmd_analyze(const AnalyzeArgs& a, const Common& c, std::ostream& out) {
    std::optional<DensityMatrix> parsed;
    try {
        const Basis fallback = a.basis ? basis_from_string(*a.basis) : Basis::standard;
        parsed = read_state_file(a.input, fallback);
        if (a.basis && parsed->basis() != fallback)
            throw InputError(a.input + ": basis field \"" + std::string(to_string(parsed->basis())) +
                             "\" conflicts with --basis " + *a.basis);
    } catch (const InputError&) {
        throw;
    } catch (const Error& e) {
        throw InputError(e.what());
    }
    const DensityMatrix& rho = *parsed;
    const double tol = c.tol.value_or(1e-7);

    const auto res = concurrence(rho);
    const auto cross = r_spectrum_from_r_matrix(rho);
    const auto ppt = ppt_test(rho);
    const bool entangled = res.c_signed > tol;
    const bool flagged = ppt.margin_flag || std::abs(res.c_signed) <= tol;

    double path_gap = 0.0;
    for (std::size_t k = 0; k < 4; ++k)
        path_gap = std::max(path_gap, std::abs(res.spectrum.lambdas[k] - cross.lambdas[k]));
    std::vector<Check> checks{make_check("spectrum_paths_agree", path_gap, 1e-9),
                              make_check("ppt_agrees_with_concurrence",
                                         !flagged && entangled == ppt.separable ? 1.0 : 0.0, 0.0)};

    json report = header("analyze");
    report["config"] = {{"input", a.input},
                        {"basis", a.basis ? json(*a.basis) : json(nullptr)},
                        {"tol", tol},
                        {"seed", c.seed},
                        {"jobs", c.jobs},
                        {"minimize", a.minimize}};
    report["state"] = {{"input_basis", to_string(rho.basis())},
                       {"eigenvalues", rho.eigenvalues()},
                       {"rank", res.rank},
                       {"standard", state_to_json(in_basis(rho, Basis::standard))}};
    report["c"] = res.c;
    report["c_signed"] = res.c_signed;
    report["E"] = res.entanglement;
    report["rank2_c"] = res.rank2_c ? json(*res.rank2_c) : json(nullptr);
    report["conjectured"] = res.conjectured;
    report["r_spectrum"] = {{"lambdas", res.spectrum.lambdas}, {"trace_r", res.spectrum.trace_r},
                            {"cross_check_lambdas", cross.lambdas}};
    report["ppt"] = {{"min_pt_eigenvalue", ppt.min_pt_eigenvalue},
                     {"separable", ppt.separable},
                     {"margin_flag", ppt.margin_flag}};
    report["entangled"] = entangled;
    report["flagged"] = flagged;

    if (a.minimize) {
        MinimizeOptions opt;
        opt.ensemble_size = std::max(a.ensemble_size, res.rank);
        opt.restarts = a.restarts;
        opt.max_iters = a.max_iters;
        opt.seed = c.seed;
        opt.jobs = c.jobs;
        const auto r = minimize(rho, opt);
        const double below = res.entanglement - r.min_average;
        checks.push_back(res.rank <= 2 ? make_check("roof_not_below_eof", below, 1e-9)
                                       : make_check("roof_conjecture_not_beaten", below, 1e-4));
        report["roof"] = roof_report(rho, opt, r);
    }
    report["checks"] = checks;
    report["pass"] = all_pass(checks);
    emit(report, c, out);
    return all_pass(checks) ? ok : verification_failure;
}

// ---- verify ----

int cmd_verify(const std::string& suite, VerifyConfig cfg, const Common& c, std::ostream& out) {
    cfg.suite = suite;
    cfg.seed = c.seed;
    cfg.n = c.n;
    cfg.rank = c.rank;
    cfg.tol = c.tol;
    cfg.jobs = c.jobs;
    const auto outcome = run_verify(cfg);
    emit(outcome.report, c, out);
    return outcome.pass ? ok : verification_failure;
}

// ---- sample ----

int cmd_sample(const Common& c, std::ostream& out) {
    if (c.out.empty()) throw InputError("sample: --out <directory> is required");
    const int n = c.n.value_or(1);
    const int rank = c.rank.value_or(4);
    const std::filesystem::path dir(c.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());

    const int width = std::max(5, static_cast<int>(std::to_string(n - 1).size()));
    json files = json::array();
    for (int i = 0; i < n; ++i) {
        std::ostringstream name;
        name << "state_" << std::setw(width) << std::setfill('0') << i << ".json";
        const auto rho = random_density(rank, derive_seed(c.seed, static_cast<std::uint64_t>(i)));
        write_text_file(dir / name.str(), to_json_text(rho));
        files.push_back(name.str());
    }

    json report = header("sample");
    report["config"] = {{"seed", c.seed}, {"n", n}, {"rank", rank}, {"out", c.out}};
    report["files"] = std::move(files);
    Common summary = c;
    summary.out.clear();
    emit(report, summary, out);
    return ok;
}

}  // namespace

std::string to_csv(const json& report) {
    std::string out = "path,value\n";
    flatten(report, "", out);
    return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-qubit entanglement of formation: analysis and verification campaigns", "twoqubit"};
    app.set_version_flag("--version", TWOQUBIT_VERSION);
    app.require_subcommand(1);

    Common analyze_common, verify_common, sample_common;
    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Concurrence, E, R spectrum and PPT verdict of one state file");
    analyze->add_option("input", analyze_args.input, "Density-matrix or pure-state JSON file")->required();
    analyze->add_option("--basis", analyze_args.basis, "Basis of the input file")
        ->check(CLI::IsMember({"standard", "magic"}));
    analyze->add_flag("--minimize", analyze_args.minimize, "Also run the convex-roof optimizer");
    analyze->add_option("--restarts", analyze_args.restarts, "Optimizer restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    analyze->add_option("--max-iters", analyze_args.max_iters, "Optimizer iterations per restart")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    analyze->add_option("--ensemble-size", analyze_args.ensemble_size, "Optimizer ensemble size")
        ->check(CLI::Range(1, max_ensemble_size))
        ->capture_default_str();
    add_common(analyze, analyze_common, false);

    std::string suite;
    auto* verify = app.add_subcommand("verify", "Run a seeded verification suite");
    std::vector<std::string> choices = verify_suite_names();
    choices.push_back("all");
    verify->add_option("suite", suite, "pure|bell|rank2|ppt|proof|roof|invariance|all")
        ->required()
        ->check(CLI::IsMember(choices));
    add_common(verify, verify_common, true);
    VerifyConfig verify_budget;
    verify->add_option("--restarts", verify_budget.restarts, "Roof optimizer restarts")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    verify->add_option("--max-iters", verify_budget.max_iters, "Roof optimizer iterations per restart")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* sample = app.add_subcommand("sample", "Write seeded random density matrices to a directory");
    add_common(sample, sample_common, true);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? ok : input_error;
    }

    try {
        if (analyze->parsed()) return cmd_analyze(analyze_args, analyze_common, out);
        if (verify->parsed()) return cmd_verify(suite, verify_budget, verify_common, out);
        return cmd_sample(sample_common, out);
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return input_error;
    } catch (const std::exception& e) {
        // anything past input validation is an internal inconsistency
        err << "internal error: " << e.what() << "\n";
        return verification_failure;
    }
}

}  // namespace twoqubit::cli
