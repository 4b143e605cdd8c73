#include "doctest.h"

#include <sys/wait.h>

#include <clocale>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bvlab/io.hpp"

using namespace bvlab;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() {
        dir = fs::temp_directory_path() / ("bvlab_io_" + std::to_string(::getpid()));
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    std::string operator/(const std::string& name) const { return (dir / name).string(); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Run {
    int code = -1;
    std::string out, err;
};

Run cli(const Scratch& s, const std::string& args) {
    const std::string o = s / "stdout.txt", e = s / "stderr.txt";
    const std::string cmd = std::string(BVLAB_CLI) + " " + args + " > " + o + " 2> " + e;
    const int status = std::system(cmd.c_str());
    Run r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(o);
    r.err = slurp(e);
    return r;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

const std::string kSteps = std::string(BVLAB_DATA) + "/coefficients/steps_1_4.json";

}  // namespace

TEST_CASE("coefficient JSON round trip") {
    const StepCoefficient a({-1.0, 0.5}, {1.0, 3.0, 2.0}, 0.75);
    auto back = coefficient_from_json(coefficient_to_json(a));
    REQUIRE(std::holds_alternative<StepCoefficient>(back));
    const auto& s = std::get<StepCoefficient>(back);
    CHECK(s.breakpoints == a.breakpoints);
    CHECK(s.values == a.values);
    CHECK(s.m == a.m);

    const Grid g = Grid::spanning(-1.0, 1.0, 11);
    std::vector<double> vals(g.n);
    for (std::size_t i = 0; i < g.n; ++i) vals[i] = 2.0 + std::sin(g.at(i));
    auto sampled = coefficient_from_json(coefficient_to_json(SampledCoefficient(g, vals)));
    REQUIRE(std::holds_alternative<SampledCoefficient>(sampled));
    CHECK(std::get<SampledCoefficient>(sampled).samples == vals);

    auto steps = load_coefficient(kSteps);
    CHECK(coefficient_min(steps) == 1.0);
    CHECK(coefficient_max(steps) == 4.0);
}

TEST_CASE("coefficient JSON validation names the field") {
    auto j = coefficient_to_json(StepCoefficient({0.0}, {1.0, 2.0}));
    j["values"] = nlohmann::json::array({1.0, -2.0});
    CHECK_THROWS_AS(coefficient_from_json(j), std::invalid_argument);
    j = coefficient_to_json(StepCoefficient({0.0}, {1.0, 2.0}));
    j["type"] = "spline";
    try {
        coefficient_from_json(j);
        FAIL("no throw");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("type") != std::string::npos);
    }
    j.erase("type");
    CHECK_THROWS_AS(coefficient_from_json(j), std::invalid_argument);
}

TEST_CASE("FNV-1a reference vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("numbers round-trip and ignore the locale") {
    for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23, 1.0}) CHECK(std::stod(format_number(x)) == x);
    CHECK(format_number(0.5).find('.') != std::string::npos);
    if (std::setlocale(LC_NUMERIC, "de_DE.UTF-8")) {
        CHECK(format_number(0.5) == "0.5");
        std::setlocale(LC_NUMERIC, "C");
    }
}

TEST_CASE("CSV table: provenance line, header, row width") {
    CsvTable t({"k", "value"});
    t.row({CsvTable::cell(3), CsvTable::cell(0.25)});
    CHECK_THROWS_AS(t.row({"1"}), std::invalid_argument);
    std::ostringstream os;
    t.write(os, {"sweep", "0123456789abcdef", 1});
    auto l = lines(os.str());
    REQUIRE(l.size() == 3);
    CHECK(l[0] == "# bvlab command=sweep config_hash=0123456789abcdef calibration_version=1");
    CHECK(l[1] == "k,value");
    CHECK(l[2] == "3,0.25");
}

TEST_CASE("error records are one line of JSON") {
    const auto rec = error_record("schema", "bad \"value\"\nhere");
    CHECK(rec.find('\n') == std::string::npos);
    auto j = nlohmann::json::parse(rec);
    CHECK(j["error"]["kind"] == "schema");
    CHECK(j["error"]["message"] == "bad \"value\"\nhere");
}

TEST_CASE("space-time field save and load") {
    Scratch s;
    SpaceTimeField u(Grid{-1.0, 0.5, 5}, Grid{0.0, 0.25, 3});
    for (std::size_t k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < 5; ++i) u(i, k) = cplx(i + 0.5 * k, -double(k));
    u.save(s / "u.bin", "feedface");
    auto j = load_json(s / "u.bin.json");
    CHECK(j["n_x"] == 5);
    CHECK(j["n_t"] == 3);
    CHECK(j["config_hash"] == "feedface");
    CHECK(fs::file_size(s / "u.bin") == 5 * 3 * 2 * sizeof(double));
    auto back = SpaceTimeField::load(s / "u.bin");
    CHECK(back.values == u.values);
    CHECK(back.x.x0 == u.x.x0);
    CHECK(back.t.h == u.t.h);
}

TEST_CASE("cli: resolvent writes a CSV with provenance, deterministically") {
    Scratch s;
    const std::string args = "resolvent --coeff " + kSteps + " --tau -1 0.5 4 --out ";
    auto r1 = cli(s, args + s / "a.csv");
    auto r2 = cli(s, args + s / "b.csv");
    CHECK(r1.code == 0);
    CHECK(r2.code == 0);
    const auto a = slurp(s / "a.csv");
    CHECK(a == slurp(s / "b.csv"));
    auto l = lines(a);
    REQUIRE(l.size() == 5);
    CHECK(l[0].rfind("# bvlab command=resolvent config_hash=", 0) == 0);
    CHECK(l[1] == "tau,eps,q_v,q_flux,omega_bound_ok,energy_residual");
}

TEST_CASE("cli: dumped configuration reloads to the same output") {
    Scratch s;
    auto dump = cli(s, "--dump-config resolvent --coeff " + kSteps + " --tau -2");
    REQUIRE(dump.code == 0);
    {
        std::ofstream(s / "c.toml") << dump.out;
    }
    auto direct = cli(s, "resolvent --coeff " + kSteps + " --tau -2");
    auto reloaded = cli(s, "--config " + s / "c.toml" + " resolvent");
    CHECK(direct.code == 0);
    CHECK(reloaded.code == 0);
    CHECK(direct.out == reloaded.out);
    auto seeded = cli(s, "--seed 7 resolvent --coeff " + kSteps + " --tau -2");
    CHECK(lines(seeded.out)[0] != lines(direct.out)[0]);
}

TEST_CASE("cli: error exits carry a JSON record") {
    Scratch s;
    auto endpoint = cli(s, "estimate --kind strichartz --p 4 --q inf --lebesgue");
    CHECK(endpoint.code == 2);
    auto j = nlohmann::json::parse(endpoint.err);
    CHECK(j["error"]["kind"] == "invalid_argument");
    CHECK(j["error"]["message"].get<std::string>().find("(4, inf)") != std::string::npos);

    auto unknown = cli(s, "resolvent --coeff flat --bogus 1");
    CHECK(unknown.code == 2);
    CHECK(nlohmann::json::parse(unknown.err)["error"]["kind"] == "schema");

    auto missing = cli(s, "resolvent --coeff " + s / "missing.json");
    CHECK(missing.code == 3);
    CHECK(nlohmann::json::parse(missing.err)["error"]["kind"] == "runtime");
}

TEST_CASE("cli: evolve writes a field with its sidecar") {
    Scratch s;
    auto r = cli(s, "evolve --coeff flat --u0 gaussian --box 32 --dx 0.0625 --T 0.5 --nt 5 --out " + s / "f.bin");
    REQUIRE(r.code == 0);
    auto summary = nlohmann::json::parse(r.out);
    auto field = SpaceTimeField::load(s / "f.bin");
    CHECK(field.x.n == 1025);
    CHECK(field.t.n == 5);
    CHECK(load_json(s / "f.bin.json")["config_hash"] == summary["config_hash"]);
    // Mass is conserved by the propagator.
    CHECK(lp_norm(field.slice_t(4), 2.0) == doctest::Approx(lp_norm(field.slice_t(0), 2.0)).epsilon(1e-10));
}

TEST_CASE("cli: counterexample writes JSON and CSV") {
    Scratch s;
    auto r = cli(s, "counterexample --nmax 6 --kmin 3 --kmax 4 --budget 100000 --out " + s / "ce");
    REQUIRE(r.code <= 1);  // threshold failures are reported, not hidden
    auto meta = load_json(s / "ce.json");
    CHECK(meta.contains("config_hash"));
    auto l = lines(slurp(s / "ce.csv"));
    REQUIRE(l.size() == 4);
    CHECK(l[1].rfind("k,lambda,residual,Q_k,envelope", 0) == 0);
}
