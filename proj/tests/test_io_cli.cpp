#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "nlpot/io.hpp"

using namespace nlpot;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;
namespace fs = std::filesystem;

// ----------------------------------------------------------- library side ----

TEST_CASE("config parser handles comments, spacing, and junk") {
    auto kv = io::parse_config("a=1\n# note\n  b = two words \n\nc=3 # tail\n");
    CHECK(kv.size() == 3);
    CHECK(kv["a"] == "1");
    CHECK(kv["b"] == "two words");
    CHECK(kv["c"] == "3");
    CHECK_THROWS_WITH(io::parse_config("novalue\n"), ContainsSubstring("line 1"));
    CHECK_THROWS_WITH(io::parse_config("ok=1\n=orphan\n"),
                      ContainsSubstring("line 2"));
}

TEST_CASE("numeric formatting round-trips doubles") {
    CHECK(io::num(1.0) == "1");
    CHECK(io::num(0.5) == "0.5");
    CHECK(io::num(-2.5) == "-2.5");
    std::mt19937_64 rng(5u);
    std::uniform_real_distribution<double> U(-1e6, 1e6);
    for (int i = 0; i < 200; ++i) {
        double v = U(rng);
        CHECK(std::stod(io::num(v)) == v);
    }
    CHECK(std::stod(io::num(0.1)) == 0.1);
}

TEST_CASE("measure serialization round trips every kind") {
    Measure atomic =
        Measure::atomic(3, {{0.1, 0.2, 0.3}, {-0.4, 0.0, 0.5}}, {1.0, 2.5});
    Measure grid = Measure::grid(3, {-1.0, -1.0, -1.0}, 2.0, 2,
                                 Vec(8, 0.125));
    Measure radial = Measure::radial(3, {0.25, 0.5, 1.0}, {0.2, 0.7, 1.0});
    for (const Measure& mu : {atomic, grid, radial}) {
        io::json j = io::measure_to_json(mu);
        Measure back = io::measure_from_json(j);
        CHECK(io::measure_to_json(back) == j);
        CHECK(back.dim() == mu.dim());
        CHECK(back.kind() == mu.kind());
    }

    io::json bad = io::measure_to_json(atomic);
    bad.erase("schema_version");
    CHECK_THROWS_WITH(io::measure_from_json(bad),
                      ContainsSubstring("schema_version"));
    io::json odd = io::measure_to_json(atomic);
    odd["kind"] = "fractal";
    CHECK_THROWS_WITH(io::measure_from_json(odd), ContainsSubstring("kind"));
}

TEST_CASE("spec serialization keeps parameters and validates on load") {
    PotentialSpec s;
    s.alpha = 2.0;
    s.p = 3.0;
    s.quad_rings = 128;
    s.trunc_R = 0.75;
    io::json j = io::spec_to_json(s);
    PotentialSpec back = io::spec_from_json(j);
    CHECK(back.alpha == 2.0);
    CHECK(back.p == 3.0);
    CHECK(back.quad_rings == 128);
    CHECK(back.trunc_R == 0.75);
    j["quad_rings"] = 8;
    CHECK_THROWS_AS(io::spec_from_json(j), std::invalid_argument);
}

TEST_CASE("seed serialization round trips a built schedule") {
    SeedSequence seed = schedule_thm33(4.0, 3);
    io::json j = io::seed_to_json(seed);
    SeedSequence back = io::seed_from_json(j);
    CHECK(io::seed_to_json(back) == j);
    // a tampered radius no longer passes the shrink certificate
    j["radii"][0] = j["radii"][0].get<double>() * 100.0;
    CHECK_THROWS_AS(io::seed_from_json(j), std::domain_error);
}

TEST_CASE("CSV writer emits byte-exact rows") {
    fs::path p = fs::temp_directory_path() / "nlpot_csv_probe.csv";
    {
        io::CsvWriter w(p.string());
        w.header({"a", "b"});
        w.row({1.0, 0.5});
        w.row({2.5, -1.0});
        w.line({"x", "y"});
    }
    CHECK(io::read_file(p.string()) == "a,b\n1,0.5\n2.5,-1\nx,y\n");
    fs::remove(p);
    CHECK_THROWS_AS(io::CsvWriter("/nonexistent_dir_zz/f.csv"), io::FileError);
}

TEST_CASE("estimate report serialization carries verdict and parameters") {
    EstimateReport r;
    r.id = EstimateId::Thm42_lower;
    r.verdict = Verdict::Consistent;
    r.max_ratio = 2.0;
    r.min_ratio = 1.0;
    r.fitted_C = 5.0;
    r.notes = {"note one"};
    r.params = {{"alpha", 1.0}, {"p", 2.0}};
    r.samples.push_back({"x=(1,0,0)", 3.0, 1.5, 0.0, 0.0});
    r.samples.push_back({"x=(0,1,0)", 4.0, 2.0, 0.1, 0.2});
    io::json j = io::report_to_json(r);
    CHECK(j.at("estimate") == "Thm42_lower");
    CHECK(j.at("verdict") == "Consistent");
    CHECK(j.at("sample_count") == 2);
    CHECK(j.at("params").at("alpha") == 1.0);

    fs::path p = fs::temp_directory_path() / "nlpot_report_probe.csv";
    io::write_estimate_csv(p.string(), r);
    std::string csv = io::read_file(p.string());
    CHECK_THAT(csv, ContainsSubstring("sample,input,lhs,rhs,lhs_err,rhs_err,ratio"));
    CHECK_THAT(csv, ContainsSubstring("0,x=(1,0,0),3,1.5,0,0,2"));
    fs::remove(p);
}

// --------------------------------------------------------------- CLI side ----

namespace {

struct RunResult {
    int code = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    const char* cli = std::getenv("NLPOT_CLI_PATH");
    REQUIRE(cli != nullptr);
    std::string cmd = std::string(cli) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    while (std::size_t got = std::fread(buf, 1, sizeof(buf), pipe))
        res.out.append(buf, got);
    int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

fs::path scratch_dir() {
    static fs::path base = [] {
        fs::path p = fs::temp_directory_path() /
                     ("nlpot_cli_" + std::to_string(::getpid()));
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return base;
}

std::string qq(const fs::path& p) { return p.string(); }

}  // namespace

TEST_CASE("cli: help lists the subcommands") {
    RunResult r = run_cli("--help");
    CHECK(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("potential"));
    CHECK_THAT(r.out, ContainsSubstring("construct"));
    CHECK_THAT(r.out, ContainsSubstring("classify"));
}

TEST_CASE("cli: classify emits the region verdict as JSON") {
    RunResult b = run_cli("classify --lambda 4 --sigma 1 --n 3");
    REQUIRE(b.code == 0);
    io::json jb = io::json::parse(b.out);
    CHECK(jb.at("region") == "B");
    CHECK(jb.at("has_pointwise_bounds") == true);
    CHECK(jb.at("u").at("base_exponent").get<double>() == Approx(4.0 / 3.0));
    CHECK(jb.at("u").at("flavor") == "LittleO");

    RunResult c = run_cli("classify --lambda 4 --sigma 3 --n 3");
    REQUIRE(c.code == 0);
    io::json jc = io::json::parse(c.out);
    CHECK(jc.at("region") == "C");
    CHECK(jc.at("marker") == "no pointwise bound");
}

TEST_CASE("cli: ladder trace reports rungs and termination") {
    fs::path d = scratch_dir() / "moser";
    RunResult r =
        run_cli("moser --n 3 --lambda 4 --sigma 2.2 --out " + qq(d));
    REQUIRE(r.code == 0);
    io::json j = io::json::parse(r.out);
    CHECK(j.at("m") == 2);
    CHECK(j.at("reached_infinity") == true);
    CHECK(j.at("C0").get<double>() == Approx(7.0 / 15.0));
    CHECK(fs::exists(d / "moser.json"));
}

TEST_CASE("cli: missing input file exits 2 and names the path") {
    RunResult r = run_cli("verify --id Thm42_lower --measure /nonexistent_zz.json");
    CHECK(r.code == 2);
    CHECK_THAT(r.out, ContainsSubstring("/nonexistent_zz.json"));
}

TEST_CASE("cli: contract violations exit 1") {
    CHECK(run_cli("verify --id NotAnEstimate").code == 1);

    fs::path d = scratch_dir() / "reject";
    RunResult below = run_cli(
        "construct --tag thm34 --n 3 --lambda 4 --sigma 2.5 --out " + qq(d));
    CHECK(below.code == 1);
    CHECK_THAT(below.out, ContainsSubstring("critical exponent"));

    fs::path cfg = scratch_dir() / "bad.cfg";
    io::write_file(qq(cfg), "bogus = 1\n");
    RunResult badkey =
        run_cli("--config " + qq(cfg) + " classify --lambda 3 --sigma 1 --n 3");
    CHECK(badkey.code == 1);
    CHECK_THAT(badkey.out, ContainsSubstring("bogus"));
}

TEST_CASE("cli: sweep tables are byte-deterministic") {
    fs::path d1 = scratch_dir() / "sweep1";
    fs::path d2 = scratch_dir() / "sweep2";
    REQUIRE(run_cli("sweep --n 3 --steps 6 --max 6 --out " + qq(d1)).code == 0);
    REQUIRE(run_cli("sweep --n 3 --steps 6 --max 6 --out " + qq(d2)).code == 0);
    std::string a = io::read_file(qq(d1 / "sweep.csv"));
    std::string b = io::read_file(qq(d2 / "sweep.csv"));
    CHECK(a == b);
    CHECK_THAT(a, ContainsSubstring("lambda,sigma,region"));
}

TEST_CASE("cli: probe seeding is reproducible per seed") {
    fs::path d1 = scratch_dir() / "seed1";
    fs::path d2 = scratch_dir() / "seed2";
    fs::path d3 = scratch_dir() / "seed3";
    std::string base = "verify --id Lemma42 --seed 7 --probes 8 --out ";
    REQUIRE(run_cli(base + qq(d1)).code == 0);
    REQUIRE(run_cli(base + qq(d2)).code == 0);
    REQUIRE(run_cli("verify --id Lemma42 --seed 8 --probes 8 --out " + qq(d3))
                .code == 0);
    std::string a = io::read_file(qq(d1 / "verify_Lemma42_samples.csv"));
    std::string b = io::read_file(qq(d2 / "verify_Lemma42_samples.csv"));
    std::string c = io::read_file(qq(d3 / "verify_Lemma42_samples.csv"));
    CHECK(a == b);
    CHECK(a != c);
}

TEST_CASE("cli: potential evaluation reads stored measures and probes") {
    fs::path d = scratch_dir() / "pot";
    fs::create_directories(d);
    Measure mu = Measure::atomic(3, {{0.0, 0.0, 0.0}}, {2.0});
    io::write_file(qq(d / "m.json"), io::measure_to_json(mu).dump());
    io::json probes = {{"schema_version", io::schema_version},
                       {"points", {{0.5, 0.0, 0.0}, {0.25, 0.0, 0.0}}}};
    io::write_file(qq(d / "p.json"), probes.dump());
    RunResult r = run_cli("potential --op riesz_kernel --measure " +
                          qq(d / "m.json") + " --probe-file " + qq(d / "p.json") +
                          " --out " + qq(d));
    REQUIRE(r.code == 0);
    CHECK_THAT(r.out, ContainsSubstring("wrote 2 rows"));
    std::string csv = io::read_file(qq(d / "potential.csv"));
    // alpha defaults to 1: value = mass * |x|^{-2} / (n - alpha)
    CHECK_THAT(csv, ContainsSubstring("0.5,0,0,4,"));
    CHECK_THAT(csv, ContainsSubstring("0.25,0,0,16,"));
}

TEST_CASE("cli: representation mass survives the file round trip") {
    fs::path d = scratch_dir() / "repr";
    fs::create_directories(d);
    Measure mu =
        Measure::atomic(3, {{0.5, 0.0, 0.0}, {0.0, 0.4, 0.0}}, {1.0, 0.5});
    io::HarmonicSpec h;
    h.constant = 0.7;
    h.linear = {0.3, 0.0, 0.0};
    io::write_file(qq(d / "dec.json"),
                   io::decomposition_to_json(2.0, &mu, h, 1.0).dump());
    RunResult r = run_cli("repr --mode mass --file " + qq(d / "dec.json"));
    REQUIRE(r.code == 0);
    io::json j = io::json::parse(r.out);
    CHECK(j.at("verdict") == "Consistent");
    CHECK(j.at("m").get<double>() == Approx(2.0).epsilon(0.01));
}
