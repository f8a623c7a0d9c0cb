#include "doctest.h"

#include <filesystem>
#include <map>
#include <sstream>

#include "test_util.hpp"
#include "twoqubit/cli.hpp"
#include "twoqubit/entanglement.hpp"
#include "twoqubit/io.hpp"

using namespace twoqubit;
using nlohmann::json;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run run(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Fresh scratch directory per test case.
struct Scratch {
    std::filesystem::path dir;
    explicit Scratch(const std::string& name) : dir(std::filesystem::temp_directory_path() / ("twoqubit_cli_" + name)) {
        std::filesystem::remove_all(dir);
        std::filesystem::create_directories(dir);
    }
    ~Scratch() { std::filesystem::remove_all(dir); }
    std::string write(const std::string& name, const std::string& text) const {
        write_text_file(dir / name, text);
        return (dir / name).string();
    }
};

void collect_numbers(const json& j, const std::string& path, std::map<std::string, double>& out) {
    if (j.is_object() && !j.empty())
        for (const auto& [k, v] : j.items()) collect_numbers(v, path.empty() ? k : path + "." + k, out);
    else if (j.is_array() && !j.empty())
        for (std::size_t i = 0; i < j.size(); ++i) collect_numbers(j[i], path + "." + std::to_string(i), out);
    else if (j.is_number())
        out[path] = j.get<double>();
}

}  // namespace

TEST_CASE("analyze: singlet, maximally mixed and the three-quarter Bell mixture") {
    Scratch s("analyze");
    const auto singlet = s.write("singlet.json", to_json_text(PureState(twoqubit::testing::singlet_standard(), Basis::standard)));
    auto r = run({"analyze", singlet});
    REQUIRE(r.code == 0);
    auto j = json::parse(r.out);
    CHECK(j["c"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["E"].get<double>() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(j["entangled"] == true);
    CHECK(j["ppt"]["separable"] == false);
    CHECK(j["config"]["input"] == singlet);

    const auto mixed = s.write("mixed.json", to_json_text(DensityMatrix(ComplexMatrix4::identity() * 0.25, Basis::standard)));
    j = json::parse(run({"analyze", mixed}).out);
    CHECK(j["c"].get<double>() == 0.0);
    CHECK(j["E"].get<double>() == 0.0);
    CHECK(j["ppt"]["separable"] == true);
    CHECK(j["conjectured"] == true);

    const auto bell = s.write("bell.json", to_json_text(bell_mixture({0.75, 0.25, 0.0, 0.0})));
    j = json::parse(run({"analyze", bell}).out);
    CHECK(j["c"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(j["E"].get<double>() == doctest::Approx(0.35458).epsilon(1e-5));
    CHECK(j["rank"].is_null());
    CHECK(j["state"]["rank"] == 2);
    CHECK(j["rank2_c"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("analyze: magic-basis input and basis conflicts") {
    Scratch s("basis");
    const auto rho = random_density(3, std::uint64_t{601});
    const auto magic_text = to_json_text(to_magic(rho));
    const auto tagged = s.write("tagged.json", magic_text);
    const auto a = json::parse(run({"analyze", tagged}).out);
    const auto b = json::parse(run({"analyze", tagged, "--basis", "magic"}).out);
    CHECK(a["c"].get<double>() == doctest::Approx(concurrence(rho).c).epsilon(1e-12));
    CHECK(a["c"] == b["c"]);
    CHECK(run({"analyze", tagged, "--basis", "standard"}).code == cli::input_error);

    // untagged magic file read through --basis
    json untagged = json::parse(magic_text);
    untagged.erase("basis");
    const auto bare = s.write("bare.json", untagged.dump());
    const auto c = json::parse(run({"analyze", bare, "--basis", "magic"}).out);
    CHECK(c["c"].get<double>() == doctest::Approx(concurrence(rho).c).epsilon(1e-12));
}

TEST_CASE("analyze: input errors exit with 1 and a located diagnostic") {
    Scratch s("errors");
    const auto broken = s.write("broken.json", "{\n  \"basis\": \"standard\",\n  \"matrix\": [[\n");
    auto r = run({"analyze", broken});
    CHECK(r.code == cli::input_error);
    CHECK(r.err.find("broken.json:4:") != std::string::npos);

    const auto invalid = s.write("invalid.json", R"({"amplitudes": [[1,0],[1,0],[0,0],[0,0]]})");
    CHECK(run({"analyze", invalid}).code == cli::input_error);
    CHECK(run({"analyze", (s.dir / "absent.json").string()}).code == cli::input_error);
    CHECK(run({"analyze"}).code == cli::input_error);
    CHECK(run({"analyze", invalid, "--basis", "bell"}).code == cli::input_error);
}

TEST_CASE("analyze --minimize attaches the optimizer report") {
    Scratch s("minimize");
    const auto rho = random_density(2, std::uint64_t{607});
    const auto path = s.write("rho.json", to_json_text(rho));
    const auto r = run({"analyze", path, "--minimize", "--restarts", "4", "--seed", "3"});
    REQUIRE(r.code == 0);
    const auto roof = json::parse(r.out)["roof"];
    for (const char* key : {"target_eof", "min_average", "gap", "restarts", "iters_used", "seed", "ensemble"})
        CHECK(roof.contains(key));
    CHECK(roof["gap"].get<double>() <= 1e-3);
    CHECK(roof["gap"].get<double>() >= -1e-9);
    CHECK(roof["ensemble"]["p"].size() == roof["ensemble"]["states"].size());
}

TEST_CASE("verify: exit codes and failing-sample serialization") {
    CHECK(run({"verify", "bell", "--n", "50"}).code == cli::ok);
    CHECK(run({"verify", "nonsense"}).code == cli::input_error);
    CHECK(run({"verify", "ppt", "--rank", "5"}).code == cli::input_error);
    CHECK(run({"verify", "ppt", "--n", "0"}).code == cli::input_error);
    CHECK(run({"verify", "pure", "--format", "xml"}).code == cli::input_error);

    // a one-step optimizer cannot reach the agreement bound
    const auto r = run({"verify", "roof", "--n", "2", "--rank", "2", "--restarts", "1", "--max-iters", "1"});
    CHECK(r.code == cli::verification_failure);
    const auto j = json::parse(r.out);
    CHECK(j["pass"] == false);
    const auto& failing = j["suites"][0]["failing_sample"];
    REQUIRE(failing.is_object());
    CHECK(failing["check"] == "gap_within_tolerance");
    CHECK_NOTHROW(parse_state(failing["sample"].dump()));
}

TEST_CASE("verify: reports embed config and are byte-deterministic") {
    const auto a = run({"verify", "rank2", "--n", "200", "--seed", "11"});
    const auto b = run({"verify", "rank2", "--n", "200", "--seed", "11"});
    CHECK(a.out == b.out);
    auto j = json::parse(a.out);
    CHECK(j["config"]["seed"] == 11);
    CHECK(j["config"]["n"] == 200);
    CHECK(j["version"] == TWOQUBIT_VERSION);
    CHECK(j["measure_name"] == std::string(sampling_measure_name));

    auto c = json::parse(run({"verify", "rank2", "--n", "200", "--seed", "11", "--jobs", "3"}).out);
    CHECK(c["config"]["jobs"] == 3);
    c["config"].erase("jobs");
    j["config"].erase("jobs");
    CHECK(c.dump() == j.dump());
    CHECK(run({"verify", "rank2", "--n", "200", "--seed", "12"}).out != a.out);
}

TEST_CASE("verify: CSV and JSON carry identical numeric fields") {
    Scratch s("csv");
    const auto json_path = (s.dir / "r.json").string(), csv_path = (s.dir / "r.csv").string();
    REQUIRE(run({"verify", "invariance", "--n", "100", "--out", json_path}).code == 0);
    REQUIRE(run({"verify", "invariance", "--n", "100", "--format", "csv", "--out", csv_path}).code == 0);

    std::map<std::string, double> from_json;
    collect_numbers(json::parse(read_text_file(json_path)), "", from_json);

    std::istringstream csv(read_text_file(csv_path));
    std::string line;
    std::getline(csv, line);
    CHECK(line == "path,value");
    std::map<std::string, double> from_csv;
    while (std::getline(csv, line)) {
        const auto comma = line.rfind(',');
        const auto value = line.substr(comma + 1);
        const auto path = line.substr(0, comma);
        if (from_json.count(path)) from_csv[path] = std::stod(value);
    }
    CHECK(from_json.size() > 10);
    CHECK(from_csv == from_json);
}

TEST_CASE("sample: deterministic files that re-validate") {
    Scratch s("sample");
    const auto first = (s.dir / "a").string(), second = (s.dir / "b").string();
    REQUIRE(run({"sample", "--rank", "2", "--n", "3", "--seed", "7", "--out", first}).code == 0);
    REQUIRE(run({"sample", "--rank", "2", "--n", "3", "--seed", "7", "--out", second}).code == 0);
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(first)) {
        ++files;
        CHECK(read_text_file(entry.path()) == read_text_file(std::filesystem::path(second) / entry.path().filename()));
    }
    CHECK(files == 3);

    const auto pure_dir = (s.dir / "pure").string();
    REQUIRE(run({"sample", "--rank", "1", "--n", "5", "--out", pure_dir}).code == 0);
    for (const auto& entry : std::filesystem::directory_iterator(pure_dir)) {
        const auto rho = read_state_file(entry.path());
        CHECK(rho.rank() == 1);
        CHECK(max_abs_diff(rho.matrix() * rho.matrix(), rho.matrix()) <= 1e-12);
    }

    const auto many = (s.dir / "many").string();
    const auto r = run({"sample", "--rank", "4", "--n", "100", "--seed", "9", "--out", many});
    REQUIRE(r.code == 0);
    const auto names = json::parse(r.out)["files"];
    REQUIRE(names.size() == 100);
    for (std::size_t i = 0; i < names.size(); ++i) {
        const auto rho = read_state_file(std::filesystem::path(many) / names[i].get<std::string>());
        CHECK(max_abs_diff(rho.matrix(), random_density(4, derive_seed(9, i)).matrix()) <= 1e-15);
    }

    CHECK(run({"sample", "--n", "2"}).code == cli::input_error);
    CHECK(run({"sample", "--rank", "0", "--out", many}).code == cli::input_error);
}

TEST_CASE("top-level usage") {
    CHECK(run({"--version"}).code == cli::ok);
    CHECK(run({"--help"}).code == cli::ok);
    CHECK(run({}).code == cli::input_error);
    CHECK(run({"frobnicate"}).code == cli::input_error);
}
