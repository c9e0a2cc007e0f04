#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include "psz/conditions.hpp"
#include "psz/experiments.hpp"
#include "psz/function_model.hpp"
#include "psz/functionals.hpp"
#include "psz/rearrange.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CmdResult {
    int code = -1;
    std::string out;
    std::string err;
};

const fs::path& work_dir() {
    static const fs::path dir = [] {
        const fs::path d = fs::temp_directory_path() / "psz_cli_test";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

CmdResult run_cli(const std::string& args) {
    const fs::path err_path = work_dir() / "stderr.txt";
    const std::string cmd =
        std::string(PSZ_CLI_PATH) + " " + args + " 2>" + err_path.string();
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult r;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream err(err_path);
    r.err.assign(std::istreambuf_iterator<char>(err), {});
    return r;
}

std::string write_file(const std::string& name, const std::string& text) {
    const fs::path p = work_dir() / name;
    std::ofstream out(p);
    out << text;
    return p.string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), {}};
}

const std::string kAffine = R"({"kind": "affine", "a": 2.0, "b": 0.5})";
const std::string kConstant = R"({"kind": "constant", "p": 2.0})";
const std::string kQuadHalf = R"({"kind": "quadratic", "a": 2.0, "b": 0.5})";
const std::string kPowerWell =
    R"({"kind": "powerwell", "a": 0.5, "b": 1.0, "gamma": 2.7027027027027026})";
const std::string kHat =
    R"({"breakpoints": [-1.0, 0.2, 0.3, 0.4, 1.0], "values": [0.0, 0.0, 0.2, 0.0, 0.0]})";

}  // namespace

TEST_CASE("rearrange round-trips through the wire format") {
    const std::string hat = write_file("hat.json", kHat);
    const std::string csv = (work_dir() / "profile.csv").string();
    const auto r = run_cli("rearrange --in " + hat + " --no-meta --csv " + csv +
                           " --samples 11");
    CHECK(r.code == 0);

    const json out = json::parse(r.out);
    const psz::PiecewiseLinear expect =
        psz::symmetrize(psz::PiecewiseLinear({-1.0, 0.2, 0.3, 0.4, 1.0},
                                             {0.0, 0.0, 0.2, 0.0, 0.0}));
    CHECK(out.at("breakpoints").get<std::vector<double>>() == expect.breakpoints());
    CHECK(out.at("values").get<std::vector<double>>() == expect.values());

    // u** = u*: feeding the output back is an exact fixed point.
    const std::string star = write_file("hat_star.json", r.out);
    const auto r2 = run_cli("rearrange --in " + star + " --no-meta");
    CHECK(r2.code == 0);
    CHECK(r2.out == r.out);

    std::ifstream profile(csv);
    std::string line;
    int rows = 0;
    std::getline(profile, line);
    CHECK(line == "x,u,u_star");
    while (std::getline(profile, line)) ++rows;
    CHECK(rows == 11);
}

TEST_CASE("functional subcommand matches the library evaluation") {
    const std::string hat = write_file("hat.json", kHat);
    const std::string aff = write_file("aff.json", kAffine);
    const auto r = run_cli("functional --u " + hat + " --p " + aff +
                           " --which J --no-meta");
    CHECK(r.code == 0);
    const json out = json::parse(r.out);
    const double expect = psz::eval_J(
        psz::PiecewiseLinear({-1.0, 0.2, 0.3, 0.4, 1.0}, {0.0, 0.0, 0.2, 0.0, 0.0}),
        psz::ExponentSpec::affine(2.0, 0.5));
    CHECK(out.at("which") == "J");
    CHECK(out.at("value").get<double>() == expect);
    CHECK(out.at("est_error").get<double>() < 1e-9);
}

TEST_CASE("check verdicts drive the exit code") {
    const std::string pw = write_file("pw.json", kPowerWell);
    const std::string aff = write_file("aff.json", kAffine);
    const std::string cn = write_file("cn.json", kConstant);
    const std::string qd = write_file("qd.json", kQuadHalf);

    auto r = run_cli("check --p " + pw + " --thm4 --no-meta");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out).at("pass") == true);

    r = run_cli("check --p " + aff + " --thm4 --no-meta");
    CHECK(r.code == 2);
    CHECK(json::parse(r.out).at("pass") == false);

    r = run_cli("check --p " + pw + " --joint-k --mesh-w 60 --mesh-x 61 --no-meta");
    CHECK(r.code == 0);
    CHECK(json::parse(r.out).at("pass") == true);

    r = run_cli("check --p " + qd + " --kcal-probe 0.5 1.0 --no-meta");
    CHECK(r.code == 0);
    json probe = json::parse(r.out);
    REQUIRE(probe.at("found") == true);
    const auto d = psz::kcal_negativity_probe(psz::ExponentSpec::quadratic(2.0, 0.5),
                                              0.5, 1.0);
    REQUIRE(d.has_value());
    CHECK(probe.at("d").get<double>() == *d);
    CHECK(probe.at("det").get<double>() < 0.0);

    r = run_cli("check --p " + cn + " --kcal-probe 0.5 1.0 --no-meta");
    CHECK(r.code == 0);
    probe = json::parse(r.out);
    CHECK(probe.at("found") == false);
    CHECK(probe.at("d").is_null());
}

TEST_CASE("certificates pass and fail through exit codes") {
    auto r = run_cli("certify region --name R1 --no-meta");
    CHECK(r.code == 0);
    json cert = json::parse(r.out);
    CHECK(cert.at("pass") == true);
    CHECK(cert.at("region") == "R1");
    CHECK(cert.at("sup_bound").get<double>() <= 0.51);
    CHECK(cert.at("failing_cell").is_null());

    r = run_cli("certify region --name R1 --threshold 0.37 --no-meta");
    CHECK(r.code == 2);
    cert = json::parse(r.out);
    CHECK(cert.at("pass") == false);
    REQUIRE(cert.at("failing_cell").is_array());
    CHECK(cert.at("failing_cell").size() == 4);
    CHECK(cert.at("sup_bound").get<double>() > 0.37);

    r = run_cli("certify region --name R9 --no-meta");
    CHECK(r.code == 0);

    r = run_cli("certify region --name R99 --no-meta");
    CHECK(r.code == 1);

    const std::string dump = (work_dir() / "cells.csv").string();
    r = run_cli("certify region --name R9 --no-meta --dump " + dump);
    CHECK(r.code == 0);
    std::ifstream cells(dump);
    std::string header;
    std::getline(cells, header);
    CHECK(header == "lo1,hi1,lo2,hi2,bound_lo,bound_hi,certified");
}

TEST_CASE("outputs are byte-stable under --no-meta and carry meta otherwise") {
    const fs::path a = work_dir() / "a.json";
    const fs::path b = work_dir() / "b.json";
    const fs::path c = work_dir() / "c.json";
    auto r = run_cli("certify region --name R1 --no-meta --out " + a.string());
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    r = run_cli("certify region --name R1 --no-meta --out " + b.string());
    CHECK(r.code == 0);
    r = run_cli("certify region --name R1 --no-meta --threads 3 --out " + c.string());
    CHECK(r.code == 0);
    const std::string bytes = slurp(a.string());
    CHECK(!bytes.empty());
    CHECK(bytes == slurp(b.string()));
    CHECK(bytes == slurp(c.string()));

    const json with_meta = json::parse(run_cli("certify region --name R1").out);
    CHECK(with_meta.contains("meta"));
    CHECK(with_meta.at("meta").at("tool") == "psz");
    CHECK(with_meta.contains("wall_time"));
    CHECK(!json::parse(bytes).contains("wall_time"));

    const std::string pw = write_file("pw.json", kPowerWell);
    const std::string s1 =
        run_cli("experiment i-suite --p " + pw + " --trials 16 --seed 9 --no-meta").out;
    const std::string s2 = run_cli("experiment i-suite --p " + pw +
                                   " --trials 16 --seed 9 --threads 2 --no-meta")
                               .out;
    CHECK(!s1.empty());
    CHECK(s1 == s2);
}

TEST_CASE("experiment subcommands report trials and exit codes") {
    const std::string aff = write_file("aff.json", kAffine);
    const std::string cn = write_file("cn.json", kConstant);
    const std::string pw = write_file("pw.json", kPowerWell);

    auto r = run_cli("experiment j-counterexample --p " + aff + " --no-meta");
    CHECK(r.code == 0);
    json out = json::parse(r.out);
    CHECK(out.at("found") == true);
    CHECK(out.at("report").at("pass") == false);
    CHECK(out.at("report").at("gap").get<double>() < -1e-6);

    r = run_cli("experiment j-counterexample --p " + cn + " --no-meta");
    CHECK(r.code == 0);
    out = json::parse(r.out);
    CHECK(out.at("found") == false);
    CHECK(out.at("report").is_null());

    r = run_cli("experiment preconv --p " + pw +
                " --x1 -0.5 --x2 0.5 --s 1 --t 2 --no-meta");
    CHECK(r.code == 0);
    out = json::parse(r.out);
    REQUIRE(out.at("reports").size() == 3);  // default eps ladder
    for (const auto& rep : out.at("reports")) {
        CHECK(rep.at("pass") == true);
        CHECK(rep.at("inputs").at("closed_form_gap").get<double>() > 0.08);
    }

    const std::string gaps = (work_dir() / "gaps.csv").string();
    r = run_cli("experiment i-suite --p " + pw +
                " --trials 20 --seed 42 --no-meta --csv " + gaps);
    CHECK(r.code == 0);
    out = json::parse(r.out);
    CHECK(out.at("trials") == 20);
    CHECK(out.at("failures") == 0);
    CHECK(out.at("reports").size() == 20);
    std::ifstream csv(gaps);
    std::string line;
    int lines = 0;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == 21);

    r = run_cli("experiment steiner --demo 16 --no-meta");
    CHECK(r.code == 0);
    out = json::parse(r.out);
    const psz::SteinerResult expect = psz::steiner_grid_demo(
        std::vector<psz::ExponentSpec>(16, psz::ExponentSpec::quadratic(2.0, 1.0)),
        psz::demo_two_band_grid(16));
    CHECK(out.at("I_original").get<double>() == expect.I_original);
    CHECK(out.at("I_symmetrized").get<double>() == expect.I_symmetrized);

    // The same run through explicit files: a single exponent object is
    // replicated across the grid's columns.
    const psz::Grid2D demo = psz::demo_two_band_grid(16);
    json gj{{"nx", demo.nx}, {"ny", demo.ny}, {"hx", demo.hx}, {"hy", demo.hy},
            {"samples", demo.samples}};
    const std::string grid = write_file("grid.json", gj.dump());
    const std::string p2d =
        write_file("p2d.json", R"({"kind": "quadratic", "a": 2.0, "b": 1.0})");
    r = run_cli("experiment steiner --p2d " + p2d + " --grid " + grid + " --no-meta");
    CHECK(r.code == 0);
    out = json::parse(r.out);
    CHECK(out.at("I_original").get<double>() == expect.I_original);
    CHECK(out.at("I_symmetrized").get<double>() == expect.I_symmetrized);
}

TEST_CASE("usage errors exit with code 1 and a diagnostic") {
    const std::string hat = write_file("hat.json", kHat);
    const std::string pw = write_file("pw.json", kPowerWell);
    const std::string bad = write_file("bad.json", "{ oops");

    auto r = run_cli("rearrange --in " + bad);
    CHECK(r.code == 1);
    CHECK(r.err.find("parse error") != std::string::npos);
    CHECK(r.err.find("column") != std::string::npos);

    CHECK(run_cli("rearrange --in " + work_dir().string() + "/absent.json").code == 1);
    CHECK(run_cli("rearrange").code == 1);
    CHECK(run_cli("rearrange --in " + hat + " --frobnicate").code == 1);
    CHECK(run_cli("rearrange --in " + hat + " --samples 10").code == 1);
    CHECK(run_cli("functional --u " + hat + " --p " + pw + " --which K").code == 1);
    CHECK(run_cli("check --p " + pw + " --thm4 --joint-k").code == 1);
    CHECK(run_cli("check --p " + pw).code == 1);
    CHECK(run_cli("certify region --name R1 --budget -5").code == 1);
    CHECK(run_cli("experiment i-suite --p " + pw + " --trials 0").code == 1);
    CHECK(run_cli("experiment steiner").code == 1);
    CHECK(run_cli("experiment steiner --demo 16 --grid " + hat).code == 1);
    CHECK(run_cli("experiment steiner --demo 4").code == 1);
    CHECK(run_cli("").code == 1);  // a subcommand is required
}

TEST_CASE("help text enumerates the flags") {
    auto r = run_cli("--help");
    CHECK(r.code == 0);
    for (const char* flag : {"--out", "--no-meta", "--threads", "--rel-tol", "--abs-tol"})
        CHECK(r.out.find(flag) != std::string::npos);

    r = run_cli("certify region --help");
    CHECK(r.code == 0);
    for (const char* flag : {"--name", "--step1", "--step2", "--threshold", "--dump",
                             "--budget"})
        CHECK(r.out.find(flag) != std::string::npos);

    r = run_cli("experiment --help");
    CHECK(r.code == 0);
    for (const char* sub : {"j-counterexample", "i-suite", "preconv", "steiner"})
        CHECK(r.out.find(sub) != std::string::npos);
}
