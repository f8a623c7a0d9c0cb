#include "twoqubit/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "twoqubit/convex_roof.hpp"
#include "twoqubit/entanglement.hpp"
#include "twoqubit/io.hpp"
#include "twoqubit/parallel.hpp"
#include "twoqubit/proof_geometry.hpp"
#include "twoqubit/report.hpp"
#include "twoqubit/rng.hpp"
#include "twoqubit/separability.hpp"

namespace twoqubit {

namespace {

using nlohmann::json;

// Position of each suite in the canonical list doubles as its seed stream.
const std::vector<std::string> suite_names = {"pure", "bell", "rank2", "ppt", "proof", "roof", "invariance"};

std::uint64_t suite_seed(const VerifyConfig& cfg, const std::string& suite) {
    const auto it = std::find(suite_names.begin(), suite_names.end(), suite);
    return derive_seed(cfg.seed, static_cast<std::uint64_t>(it - suite_names.begin()));
}

// Worst residual of one named check over a sample sequence, plus the first
// failing index. NaN residuals stick.
class Series {
public:
    Series(std::string name, double tol) : name_(std::move(name)), tol_(tol) {}

    void add(const Check& c, std::size_t index) {
        if (std::isnan(c.residual) || std::isnan(worst_))
            worst_ = std::numeric_limits<double>::quiet_NaN();
        else
            worst_ = std::max(worst_, c.residual);
        if (!c.pass) {
            ++failures_;
            if (!first_failure_) first_failure_ = index;
        }
    }

    Check check() const {
        Check c = make_check(name_, worst_, tol_);
        c.pass = c.pass && failures_ == 0;
        return c;
    }

    const std::string& name() const { return name_; }
    const std::optional<std::size_t>& first_failure() const { return first_failure_; }

private:
    std::string name_;
    double tol_;
    double worst_ = 0.0;
    long failures_ = 0;
    std::optional<std::size_t> first_failure_;
};

struct SuiteResult {
    std::string suite;
    int n = 0;
    std::uint64_t seed = 0;
    std::vector<Check> checks;
    json stats = json::object();
    json failing_sample = nullptr;

    bool pass() const { return all_pass(checks); }

    json to_json() const {
        return {{"suite", suite}, {"n", n},           {"seed", seed},     {"checks", checks},
                {"stats", stats}, {"failing_sample", failing_sample}, {"pass", pass()}};
    }
};

using SampleBody = std::function<std::vector<Check>(std::size_t index, std::uint64_t sample_seed)>;
using SampleDump = std::function<json(std::size_t index, std::uint64_t sample_seed)>;

// Runs body on n derived seeds in parallel and reduces the per-sample checks
// in index order. Check names and tolerances come from the first sample.
SuiteResult sample_suite(const std::string& suite, int n, std::uint64_t seed, int jobs, const SampleBody& body,
                         const SampleDump& dump) {
    std::vector<std::vector<Check>> per_sample(static_cast<std::size_t>(n));
    parallel_for(per_sample.size(), jobs,
                 [&](std::size_t i) { per_sample[i] = body(i, derive_seed(seed, i)); });

    std::vector<Series> series;
    for (const auto& c : per_sample.front()) series.emplace_back(c.name, c.tolerance);
    for (std::size_t i = 0; i < per_sample.size(); ++i) {
        if (per_sample[i].size() != series.size()) throw Error("internal: inconsistent check list in suite " + suite);
        for (std::size_t k = 0; k < series.size(); ++k) series[k].add(per_sample[i][k], i);
    }

    SuiteResult out;
    out.suite = suite;
    out.n = n;
    out.seed = seed;
    std::optional<std::size_t> first;
    std::string first_check;
    for (const auto& s : series) {
        out.checks.push_back(s.check());
        if (s.first_failure() && (!first || *s.first_failure() < *first)) {
            first = s.first_failure();
            first_check = s.name();
        }
    }
    if (first) {
        const std::uint64_t ss = derive_seed(seed, *first);
        out.failing_sample = {{"check", first_check}, {"index", *first}, {"sample_seed", ss}, {"sample", dump(*first, ss)}};
    }
    return out;
}

double max_abs(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double m = 0.0;
    for (std::size_t k = 0; k < 4; ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

// Induced infinity norm: largest absolute row sum.
double inf_norm(const ComplexMatrix4& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double row = 0.0;
        for (std::size_t k = 0; k < 4; ++k) row += std::abs(m(i, k));
        best = std::max(best, row);
    }
    return best;
}

json density_dump(int rank, std::uint64_t ss) { return state_to_json(random_density(rank, ss)); }

// ---- suites ----

SuiteResult suite_pure(const VerifyConfig& cfg) {
    const auto seed = suite_seed(cfg, "pure");
    const SampleBody body = [](std::size_t, std::uint64_t ss) {
        const auto psi = random_pure(ss);
        const double c = pure_concurrence(psi);
        const double s_b = pure_entanglement_entropy(psi, Subsystem::B);
        const double s_a = pure_entanglement_entropy(psi, Subsystem::A);
        return std::vector<Check>{
            make_check("cal_e_of_concurrence_equals_entropy", std::abs(cal_e(std::min(c, 1.0)) - s_b), 1e-9),
            make_check("entropy_same_for_either_subsystem", std::abs(s_a - s_b), 1e-9),
            make_check("concurrence_at_most_one", std::max(0.0, c - 1.0), 1e-12),
        };
    };
    return sample_suite("pure", cfg.n.value_or(10000), seed, cfg.jobs, body,
                        [](std::size_t, std::uint64_t ss) { return state_to_json(random_pure(ss)); });
}

SuiteResult suite_bell(const VerifyConfig& cfg) {
    const auto seed = suite_seed(cfg, "bell");
    const auto draw = [](std::uint64_t ss) {
        Rng rng(ss);
        return random_simplex(rng);
    };
    const SampleBody body = [draw](std::size_t, std::uint64_t ss) {
        const auto p = draw(ss);
        const auto rho = bell_mixture(p);
        const double expected = std::max(0.0, 2.0 * *std::max_element(p.begin(), p.end()) - 1.0);
        const auto m = to_magic(rho).matrix();
        return std::vector<Check>{
            make_check("c_equals_2pmax_minus_1", std::abs(concurrence(rho).c - expected), 1e-9),
            make_check("r_equals_rho", inf_norm(r_matrix(rho) - m), 1e-9),
        };
    };
    auto out = sample_suite("bell", cfg.n.value_or(1000), seed, cfg.jobs, body, [draw](std::size_t, std::uint64_t ss) {
        const auto p = draw(ss);
        return json{{"probabilities", p}, {"state", state_to_json(bell_mixture(p))}};
    });

    // (3/4, 1/4, 0, 0): c = 1/2 and E = 0.35458 to five places
    const auto example = concurrence(bell_mixture({0.75, 0.25, 0.0, 0.0}));
    out.checks.push_back(make_check("example_three_quarters_c", std::abs(example.c - 0.5), 1e-12));
    out.checks.push_back(make_check("example_three_quarters_e", std::abs(example.entanglement - 0.35458), 5e-6));
    out.stats["example_three_quarters"] = {{"c", example.c}, {"E", example.entanglement}};
    return out;
}

SuiteResult suite_rank2(const VerifyConfig& cfg) {
    const auto seed = suite_seed(cfg, "rank2");
    const SampleBody body = [](std::size_t, std::uint64_t ss) {
        const auto rho = random_density(2, ss);
        const auto res = concurrence(rho);
        const auto cross = r_spectrum_from_r_matrix(rho);
        std::vector<Check> checks{
            make_check("rank_is_two", std::abs(res.rank - 2), 0.0),
            make_check("c_equals_lambda_gap", std::abs(res.c - res.rank2_c.value_or(-1.0)), 1e-9),
            make_check("spectrum_paths_agree", max_abs(res.spectrum.lambdas, cross.lambdas), 1e-9),
        };
        for (auto& c : verify_proof_identities(rho, 0, 0))
            if (c.name == "f_equals_lambda_squares" || c.name == "cross_term_equals_minus_2_l1_l2")
                checks.push_back(std::move(c));
        return checks;
    };
    return sample_suite("rank2", cfg.n.value_or(1000), seed, cfg.jobs, body,
                        [](std::size_t, std::uint64_t ss) { return density_dump(2, ss); });
}

json campaign_json(const CampaignReport& r) {
    json dis = json::array();
    for (const auto& d : r.disagreements)
        dis.push_back({{"index", d.index},
                       {"sample_seed", d.sample_seed},
                       {"c", d.c},
                       {"min_pt_eigenvalue", d.min_pt_eigenvalue},
                       {"state", state_to_json(DensityMatrix(d.matrix, Basis::standard))}});
    return {{"n", r.n},
            {"rank", r.rank},
            {"seed", r.seed},
            {"measure_name", r.measure_name},
            {"tol", r.tol},
            {"agreement", r.agreement},
            {"flagged", r.flagged},
            {"unflagged", r.unflagged()},
            {"entangled", r.entangled},
            {"entangled_fraction", r.entangled_fraction},
            {"disagreements", std::move(dis)}};
}

SuiteResult suite_ppt(const VerifyConfig& cfg) {
    SuiteResult out;
    out.suite = "ppt";
    out.seed = suite_seed(cfg, "ppt");
    std::vector<std::pair<int, int>> plan;  // (rank, n)
    if (cfg.rank)
        plan.emplace_back(*cfg.rank, cfg.n.value_or(*cfg.rank >= 3 ? 5000 : 1000));
    else
        plan = {{4, cfg.n.value_or(5000)}, {2, cfg.n.value_or(1000)}};

    json campaigns = json::array();
    for (const auto& [rank, n] : plan) {
        const auto r = cross_validate(n, rank, derive_seed(out.seed, static_cast<std::uint64_t>(rank)), cfg.tol.value_or(1e-7),
                                      cfg.jobs);
        out.n += n;
        const std::string tag = "rank" + std::to_string(rank);
        out.checks.push_back(
            make_check("sign_agreement_" + tag, static_cast<double>(r.disagreements.size()), 0.0));
        out.checks.push_back(make_check("agreement_covers_unflagged_" + tag,
                                        static_cast<double>(r.unflagged() - r.agreement), 0.0));
        if (!r.disagreements.empty() && out.failing_sample.is_null()) {
            const auto& d = r.disagreements.front();
            out.failing_sample = {{"check", "sign_agreement_" + tag},
                                  {"index", d.index},
                                  {"sample_seed", d.sample_seed},
                                  {"sample", state_to_json(DensityMatrix(d.matrix, Basis::standard))}};
        }
        campaigns.push_back(campaign_json(r));
    }
    out.stats["campaigns"] = std::move(campaigns);
    return out;
}

// Random direction on the unit sphere.
Vec3 sphere_point(Rng& rng) {
    for (;;) {
        const Vec3 v{rng.gaussian(), rng.gaussian(), rng.gaussian()};
        const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
        if (n > 1e-6) return {v[0] / n, v[1] / n, v[2] / n};
    }
}

SuiteResult suite_proof(const VerifyConfig& cfg) {
    const auto seed = suite_seed(cfg, "proof");
    const SampleBody body = [](std::size_t, std::uint64_t ss) {
        const auto rho = random_density(2, ss);
        const auto support = support_of(rho);
        const auto geom = tau_of(support);
        auto checks = geometry_checks(geom);

        checks.push_back(make_check("min_g_is_zero", std::abs(min_g(geom).min_value), 1e-9));

        Rng rng(derive_seed(ss, 1));
        double sphere = 0.0;
        for (int k = 0; k < 8; ++k) {
            const Vec3 r = sphere_point(rng);
            const BlochPoint p(r);
            const double c = pure_concurrence(support_state(support, r));
            const double f = f_value(p, geom), g = g_value(p, geom);
            sphere = std::max({sphere, std::abs(g - f), std::abs(f - c * c)});
        }
        checks.push_back(make_check("sphere_g_equals_f_equals_c_squared", sphere, 1e-9));

        const auto res = concurrence(rho);
        const auto d = constant_g_decomposition(rho);
        const auto standard = in_basis(rho, Basis::standard).matrix();
        checks.push_back(make_check("decomposition_reconstructs_rho", max_abs_diff(d.ensemble.mixture(), standard), 1e-10));
        double member = 0.0;
        for (const auto& psi : d.ensemble.states) member = std::max(member, std::abs(pure_concurrence(psi) - res.c));
        checks.push_back(make_check("decomposition_members_have_c", member, 1e-9));
        checks.push_back(make_check("decomposition_average_is_cal_e_c",
                                    std::abs(average_entanglement(d.ensemble) - res.entanglement), 1e-9));

        for (auto& c : verify_proof_identities(rho, derive_seed(ss, 2), 1000)) checks.push_back(std::move(c));
        return checks;
    };
    return sample_suite("proof", cfg.n.value_or(1000), seed, cfg.jobs, body,
                        [](std::size_t, std::uint64_t ss) { return density_dump(2, ss); });
}

json ensemble_json(const Ensemble& e) {
    json states = json::array();
    for (const auto& psi : e.states) states.push_back(state_to_json(psi));
    return {{"p", e.probabilities}, {"states", std::move(states)}};
}

}  // namespace

json roof_report(const DensityMatrix& rho, const MinimizeOptions& opt, const MinimizeResult& r) {
    const double eof = entanglement_of_formation(rho);
    return {{"target_eof", eof},
            {"min_average", r.min_average},
            {"gap", r.min_average - eof},
            {"ensemble_size", opt.ensemble_size},
            {"restarts", opt.restarts},
            {"max_iters", opt.max_iters},
            {"ftol", opt.ftol},
            {"iters_used", r.iters_used},
            {"seed", opt.seed},
            {"ensemble", ensemble_json(r.best)}};
}

namespace {

struct RoofRun {
    DensityMatrix rho;
    MinimizeOptions opt;
    MinimizeResult result;
    double eof = 0.0;
};

// Minimizes each (rank, sample seed) target; parallel over targets.
std::vector<RoofRun> roof_runs(const std::vector<std::pair<int, std::uint64_t>>& targets, int ensemble_size,
                               const VerifyConfig& cfg) {
    std::vector<std::optional<RoofRun>> slots(targets.size());
    parallel_for(targets.size(), cfg.jobs, [&](std::size_t i) {
        const auto [rank, ss] = targets[i];
        const auto rho = random_density(rank, ss);
        MinimizeOptions opt;
        opt.ensemble_size = ensemble_size;
        opt.restarts = cfg.restarts;
        opt.max_iters = cfg.max_iters;
        opt.seed = derive_seed(ss, 0);
        slots[i] = RoofRun{rho, opt, minimize(rho, opt), entanglement_of_formation(rho)};
    });
    std::vector<RoofRun> out;
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

SuiteResult suite_roof(const VerifyConfig& cfg) {
    SuiteResult out;
    out.suite = "roof";
    out.seed = suite_seed(cfg, "roof");
    const int rank = cfg.rank.value_or(2);
    out.n = cfg.n.value_or(25);
    const double gap_tol = cfg.tol.value_or(1e-3);

    std::vector<std::pair<int, std::uint64_t>> targets;
    for (int i = 0; i < out.n; ++i) targets.emplace_back(rank, derive_seed(out.seed, static_cast<std::uint64_t>(i)));
    const auto runs = roof_runs(targets, 4, cfg);

    Series gap("gap_within_tolerance", gap_tol);
    Series below(rank <= 2 ? "never_below_eof" : "conjecture_never_beaten", rank <= 2 ? 1e-9 : 1e-4);
    Series books("lowest_evaluated_is_returned", 0.0);
    json samples = json::array();
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const auto& r = runs[i];
        if (rank <= 2) gap.add(make_check("", r.result.min_average - r.eof, gap_tol), i);
        below.add(make_check("", r.eof - r.result.min_average, rank <= 2 ? 1e-9 : 1e-4), i);
        books.add(make_check("", std::abs(r.result.lowest_evaluated - r.result.min_average), 0.0), i);
        json rec = roof_report(r.rho, r.opt, r.result);
        rec["index"] = i;
        rec["rank"] = rank;
        samples.push_back(std::move(rec));
    }
    std::vector<Series*> all{&below, &books};
    if (rank <= 2) all.insert(all.begin(), &gap);
    std::optional<std::size_t> first;
    std::string first_check;
    for (auto* s : all) {
        out.checks.push_back(s->check());
        if (s->first_failure() && (!first || *s->first_failure() < *first)) {
            first = s->first_failure();
            first_check = s->name();
        }
    }
    if (first)
        out.failing_sample = {{"check", first_check},
                              {"index", *first},
                              {"sample_seed", targets[*first].second},
                              {"sample", state_to_json(runs[*first].rho)}};
    out.stats["samples"] = std::move(samples);

    if (rank == 2) {
        // Conjecture probes: five rank-3 and five rank-4 states.
        std::vector<std::pair<int, std::uint64_t>> probes;
        const auto probe_seed = derive_seed(out.seed, 1u << 20);
        for (std::uint64_t k = 0; k < 10; ++k) probes.emplace_back(k < 5 ? 3 : 4, derive_seed(probe_seed, k));
        const auto probe_runs = roof_runs(probes, 4, cfg);
        Series beaten("probe_conjecture_never_beaten", 1e-4);
        json probe_json = json::array();
        double max_gap = 0.0;
        for (std::size_t k = 0; k < probe_runs.size(); ++k) {
            const auto& r = probe_runs[k];
            beaten.add(make_check("", r.eof - r.result.min_average, 1e-4), k);
            max_gap = std::max(max_gap, r.result.min_average - r.eof);
            probe_json.push_back({{"rank", probes[k].first},
                                  {"sample_seed", probes[k].second},
                                  {"target_eof", r.eof},
                                  {"min_average", r.result.min_average},
                                  {"gap", r.result.min_average - r.eof}});
        }
        out.checks.push_back(beaten.check());
        if (beaten.first_failure() && out.failing_sample.is_null()) {
            const auto k = *beaten.first_failure();
            out.failing_sample = {{"check", beaten.name()},
                                  {"index", k},
                                  {"sample_seed", probes[k].second},
                                  {"sample", state_to_json(probe_runs[k].rho)}};
        }
        out.stats["conjecture_probes"] = {{"max_gap", max_gap}, {"records", std::move(probe_json)}};

        // Six-member ensembles on the same targets: reported only.
        const auto six = roof_runs(targets, 6, cfg);
        double lowering = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < six.size(); ++i)
            lowering = std::max(lowering, runs[i].result.min_average - six[i].result.min_average);
        out.stats["ensemble_size_probe"] = {
            {"ensemble_size", 6}, {"max_lowering_vs_4", lowering}, {"within_1e-4", lowering <= 1e-4}};
    }
    return out;
}

SuiteResult suite_invariance(const VerifyConfig& cfg) {
    const auto seed = suite_seed(cfg, "invariance");
    const auto draw = [](std::size_t index, std::uint64_t ss) {
        Rng rng(ss);
        const auto rho = random_density(1 + static_cast<int>(index % 4), rng);
        const auto u = random_local_unitary(rng);
        return std::pair{rho, u};
    };
    const SampleBody body = [draw](std::size_t index, std::uint64_t ss) {
        const auto [rho, u] = draw(index, ss);
        const auto a = concurrence(rho), b = concurrence(conjugate_by(rho, u));

        Rng rng(derive_seed(ss, 1));
        const auto local = random_local_unitary(rng);
        const auto realness = is_real_in_magic(local, 1e-9);
        const auto um = magic_basis().adjoint() * local * magic_basis() * std::polar(1.0, -realness.phase);
        double imag = 0.0;
        for (const auto& z : um.entries()) imag = std::max(imag, std::abs(z.imag()));
        const bool nonlocal_real = is_real_in_magic(random_unitary4(rng), 1e-9).real;

        return std::vector<Check>{
            make_check("r_spectrum_local_invariance", max_abs(a.spectrum.lambdas, b.spectrum.lambdas), 1e-9),
            make_check("concurrence_local_invariance", std::abs(a.c_signed - b.c_signed), 1e-9),
            make_check("local_unitary_real_in_magic", realness.real ? imag : std::max(imag, 1.0), 1e-9),
            make_check("generic_unitary_not_real_in_magic", nonlocal_real ? 1.0 : 0.0, 0.0),
        };
    };
    return sample_suite("invariance", cfg.n.value_or(1000), seed, cfg.jobs, body,
                        [draw](std::size_t index, std::uint64_t ss) {
                            const auto [rho, u] = draw(index, ss);
                            json uj = json::array();
                            for (std::size_t i = 0; i < 4; ++i) {
                                json row = json::array();
                                for (std::size_t k = 0; k < 4; ++k) row.push_back({u(i, k).real(), u(i, k).imag()});
                                uj.push_back(std::move(row));
                            }
                            return json{{"state", state_to_json(rho)}, {"local_unitary", std::move(uj)}};
                        });
}

SuiteResult run_suite(const std::string& name, const VerifyConfig& cfg) {
    if (name == "pure") return suite_pure(cfg);
    if (name == "bell") return suite_bell(cfg);
    if (name == "rank2") return suite_rank2(cfg);
    if (name == "ppt") return suite_ppt(cfg);
    if (name == "proof") return suite_proof(cfg);
    if (name == "roof") return suite_roof(cfg);
    return suite_invariance(cfg);
}

void validate(const VerifyConfig& cfg) {
    if (cfg.suite != "all" && std::find(suite_names.begin(), suite_names.end(), cfg.suite) == suite_names.end())
        throw ConfigError("unknown suite \"" + cfg.suite + "\"");
    if (cfg.n && *cfg.n < 1) throw ConfigError("--n must be at least 1");
    if (cfg.rank && (*cfg.rank < 1 || *cfg.rank > 4)) throw ConfigError("--rank must be in 1..4");
    if (cfg.tol && !(*cfg.tol > 0.0 && std::isfinite(*cfg.tol))) throw ConfigError("--tol must be a positive number");
    if (cfg.jobs < 1) throw ConfigError("--jobs must be at least 1");
    if (cfg.restarts < 1 || cfg.max_iters < 1) throw ConfigError("--restarts and --max-iters must be at least 1");
}

}  // namespace

const std::vector<std::string>& verify_suite_names() { return suite_names; }

json config_to_json(const VerifyConfig& cfg) {
    return {{"suite", cfg.suite},
            {"seed", cfg.seed},
            {"n", cfg.n ? json(*cfg.n) : json(nullptr)},
            {"rank", cfg.rank ? json(*cfg.rank) : json(nullptr)},
            {"tol", cfg.tol ? json(*cfg.tol) : json(nullptr)},
            {"jobs", cfg.jobs},
            {"restarts", cfg.restarts},
            {"max_iters", cfg.max_iters}};
}

VerifyOutcome run_verify(const VerifyConfig& cfg) {
    validate(cfg);
    std::vector<std::string> names;
    if (cfg.suite == "all")
        names = suite_names;
    else
        names.push_back(cfg.suite);

    VerifyOutcome out;
    out.pass = true;
    json suites = json::array();
    for (const auto& name : names) {
        const auto r = run_suite(name, cfg);
        out.pass = out.pass && r.pass();
        suites.push_back(r.to_json());
    }
    out.report = {{"command", "verify"},
                  {"version", TWOQUBIT_VERSION},
                  {"config", config_to_json(cfg)},
                  {"rng", Rng::name},
                  {"measure_name", sampling_measure_name},
                  {"suites", std::move(suites)},
                  {"pass", out.pass}};
    return out;
}

}  // namespace twoqubit
