// Command-line front end for the toolkit.  Every subcommand reads JSON,
// writes JSON (stdout or --out), and communicates through its exit code:
//   0  success, property held, certificate passed
//   2  the property or certificate failed honestly
//   1  usage error, malformed input, numeric precondition violated
// With --no-meta the output depends only on the inputs, byte for byte.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "psz/certify.hpp"
#include "psz/conditions.hpp"
#include "psz/experiments.hpp"
#include "psz/function_model.hpp"
#include "psz/functionals.hpp"
#include "psz/rearrange.hpp"

using ojson = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitFail = 2;

struct GlobalOpts {
    std::string out_path;
    bool no_meta = false;
    int threads = 1;
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;

    psz::QuadratureConfig quadrature() const {
        psz::QuadratureConfig cfg;
        cfg.rel_tol = rel_tol;
        cfg.abs_tol = abs_tol;
        return cfg;
    }
};

std::string iso_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

// One number formatter for JSON and CSV alike: shortest round-trip form.
std::string num(double v) { return ojson(v).dump(); }

ojson load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return ojson::parse(in);  // parse errors carry line/byte diagnostics
}

void emit(ojson payload, const GlobalOpts& g) {
    if (!g.no_meta) {
        ojson doc;
        doc["meta"] = ojson{{"tool", "psz"}, {"generated", iso_now()}};
        for (auto& [key, value] : payload.items()) doc[key] = value;
        payload = std::move(doc);
    }
    const std::string text = payload.dump(2) + "\n";
    if (g.out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(g.out_path);
        if (!out) throw std::invalid_argument("cannot write " + g.out_path);
        out << text;
    }
}

// --- wire formats -------------------------------------------------------

psz::PiecewiseLinear pl_from_json(const ojson& j) {
    if (!j.is_object() || !j.contains("breakpoints") || !j.contains("values"))
        throw std::invalid_argument(
            "profile JSON must be an object with breakpoints and values arrays");
    return psz::PiecewiseLinear(j.at("breakpoints").get<std::vector<double>>(),
                                j.at("values").get<std::vector<double>>());
}

ojson pl_to_json(const psz::PiecewiseLinear& u) {
    return ojson{{"breakpoints", u.breakpoints()}, {"values", u.values()}};
}

psz::ExponentSpec exponent_from_json(const ojson& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw std::invalid_argument("exponent JSON must be an object with a kind field");
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant")
        return psz::ExponentSpec::constant(j.at("p").get<double>());
    if (kind == "quadratic")
        return psz::ExponentSpec::quadratic(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "powerwell")
        return psz::ExponentSpec::powerwell(j.at("a").get<double>(), j.at("b").get<double>(),
                                            j.at("gamma").get<double>());
    if (kind == "affine")
        return psz::ExponentSpec::affine(j.at("a").get<double>(), j.at("b").get<double>());
    if (kind == "table")
        return psz::ExponentSpec::table(j.at("breakpoints").get<std::vector<double>>(),
                                        j.at("values").get<std::vector<double>>());
    throw std::invalid_argument("unknown exponent kind \"" + kind + "\"");
}

psz::ExponentSpec exponent_from_file(const std::string& path) {
    return exponent_from_json(load_json(path));
}

psz::Grid2D grid_from_json(const ojson& j) {
    if (!j.is_object())
        throw std::invalid_argument("grid JSON must be an object");
    psz::Grid2D g;
    g.nx = j.at("nx").get<int>();
    g.ny = j.at("ny").get<int>();
    g.hx = j.at("hx").get<double>();
    g.hy = j.at("hy").get<double>();
    g.samples = j.at("samples").get<std::vector<double>>();
    return g;
}

ojson verdict_to_json(const psz::ConditionVerdict& v) {
    ojson j{{"passed", v.passed}, {"margin", v.margin}};
    j["witness"] = v.witness ? ojson(*v.witness) : ojson(nullptr);
    return j;
}

ojson report_to_json(const psz::TrialReport& r) {
    ojson inputs = ojson::object();
    for (const auto& [key, value] : r.inputs) inputs[key] = value;
    return ojson{{"inputs", inputs},
                 {"value_original", r.value_original},
                 {"value_symmetrized", r.value_symmetrized},
                 {"gap", r.gap},
                 {"tolerance", r.tolerance},
                 {"pass", r.pass}};
}

ojson cert_to_json(const psz::Certificate& c, bool with_timing) {
    ojson j{{"region", c.region},
            {"cells_total", c.cells_total},
            {"cells_refined", c.cells_refined},
            {"cells_wide", c.cells_wide},
            {"sup_bound", c.sup_bound},
            {"threshold", c.threshold},
            {"pass", c.pass}};
    j["failing_cell"] =
        c.failing_cell ? ojson(std::vector<double>(c.failing_cell->begin(),
                                                   c.failing_cell->end()))
                       : ojson(nullptr);
    if (with_timing) j["wall_time"] = c.wall_time;
    return j;
}

ojson master_to_json(const psz::MasterCertificate& m, bool with_timing) {
    ojson j{{"name", m.name},
            {"pass", m.pass},
            {"sup_bound", m.sup_bound},
            {"threshold", m.threshold},
            {"failing_region", m.failing_region}};
    ojson parts = ojson::array();
    for (const auto& c : m.parts) parts.push_back(cert_to_json(c, with_timing));
    j["parts"] = std::move(parts);
    if (with_timing) j["wall_time"] = m.wall_time;
    return j;
}

// --- subcommand bodies ----------------------------------------------------

int run_rearrange(const GlobalOpts& g, const std::string& in_path,
                  const std::string& csv_path, int samples) {
    const psz::PiecewiseLinear u = pl_from_json(load_json(in_path));
    const psz::PiecewiseLinear us = psz::symmetrize(u);
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw std::invalid_argument("cannot write " + csv_path);
        csv << "x,u,u_star\n";
        for (int i = 0; i < samples; ++i) {
            const double x = -1.0 + 2.0 * i / (samples - 1);
            csv << num(x) << ',' << num(psz::eval_u(u, x)) << ','
                << num(psz::eval_u(us, x)) << '\n';
        }
    }
    emit(pl_to_json(us), g);
    return kExitOk;
}

int run_functional(const GlobalOpts& g, const std::string& u_path,
                   const std::string& p_path, const std::string& which) {
    const psz::PiecewiseLinear u = pl_from_json(load_json(u_path));
    const psz::ExponentSpec p = exponent_from_file(p_path);
    const psz::FunctionalResult r = which == "I"
                                        ? psz::eval_I_detailed(u, p, g.quadrature())
                                        : psz::eval_J_detailed(u, p, g.quadrature());
    emit(ojson{{"which", which},
               {"value", r.value},
               {"est_error", r.est_error},
               {"zero_slope_measure", r.zero_slope_measure}},
         g);
    return kExitOk;
}

int run_check(const GlobalOpts& g, const std::string& p_path, bool thm4,
              bool joint_k, int mesh_w, int mesh_x,
              const std::vector<double>& kcal_probe) {
    const int modes = int(thm4) + int(joint_k) + int(!kcal_probe.empty());
    if (modes != 1)
        throw std::invalid_argument(
            "check needs exactly one of --thm4, --joint-k, --kcal-probe");
    const psz::ExponentSpec p = exponent_from_file(p_path);

    if (thm4) {
        const psz::Thm4Verdict v = psz::check_sufficient_thm4(p);
        const bool pass = v.part1.passed || v.part2.passed;
        emit(ojson{{"check", "thm4"},
                   {"pass", pass},
                   {"even_and_power_convex", verdict_to_json(v.part1)},
                   {"even_bounded_and_sqrt_convex", verdict_to_json(v.part2)}},
             g);
        return pass ? kExitOk : kExitFail;
    }
    if (joint_k) {
        const psz::ConditionVerdict v = psz::check_joint_convexity_K(p, mesh_w, mesh_x);
        ojson j{{"check", "joint-k"}, {"mesh_w", mesh_w}, {"mesh_x", mesh_x}};
        j["pass"] = v.passed;
        j["margin"] = v.margin;
        j["witness"] = v.witness ? ojson(*v.witness) : ojson(nullptr);
        emit(std::move(j), g);
        return v.passed ? kExitOk : kExitFail;
    }
    const double y = kcal_probe[0], c = kcal_probe[1];
    const std::optional<double> d = psz::kcal_negativity_probe(p, y, c);
    ojson j{{"check", "kcal-probe"}, {"y", y}, {"c", c}, {"found", d.has_value()}};
    j["d"] = d ? ojson(*d) : ojson(nullptr);
    if (d) j["det"] = psz::det_Kcal_hessian(c, *d, y, p);
    emit(std::move(j), g);
    return kExitOk;  // the probe reports either outcome as a completed search
}

int run_certify_master(const GlobalOpts& g, bool half, std::int64_t budget) {
    const psz::MasterCertificate m = half ? psz::verify_calc_half(budget, 1.0, g.threads)
                                          : psz::verify_calc(budget, 1.0, g.threads);
    emit(master_to_json(m, !g.no_meta), g);
    return m.pass ? kExitOk : kExitFail;
}

int run_certify_region(const GlobalOpts& g, const std::string& name,
                       std::int64_t budget, double step1, double step2,
                       double threshold, const std::string& dump_path) {
    psz::RegionSpec spec = psz::standard_region(name);
    if (!std::isnan(step1)) spec.step1 = step1;
    if (!std::isnan(step2)) spec.step2 = step2;
    if (!std::isnan(threshold)) spec.threshold = threshold;
    const psz::Certificate c =
        dump_path.empty()
            ? psz::verify_region(spec, budget, g.threads)
            : psz::verify_region_dump(spec, budget, g.threads, dump_path);
    emit(cert_to_json(c, !g.no_meta), g);
    return c.pass ? kExitOk : kExitFail;
}

int run_exp_j(const GlobalOpts& g, const std::string& p_path) {
    const psz::ExponentSpec p = exponent_from_file(p_path);
    const auto witness = psz::find_j_counterexample(p, g.quadrature());
    ojson j{{"experiment", "j-counterexample"}, {"found", witness.has_value()}};
    j["report"] = witness ? report_to_json(*witness) : ojson(nullptr);
    emit(std::move(j), g);
    return kExitOk;  // a completed scan is a success either way
}

int run_exp_i_suite(const GlobalOpts& g, const std::string& p_path, int trials,
                    std::uint64_t seed, int max_nodes, bool plateaus,
                    const std::string& csv_path) {
    const psz::ExponentSpec p = exponent_from_file(p_path);
    const psz::SuiteSummary s = psz::run_I_suite(p, trials, seed, max_nodes,
                                                 g.threads, plateaus, g.quadrature());
    if (!csv_path.empty()) {
        std::ofstream csv(csv_path);
        if (!csv) throw std::invalid_argument("cannot write " + csv_path);
        csv << "trial,seed,n_nodes,gap,pass\n";
        for (std::size_t i = 0; i < s.reports.size(); ++i) {
            const psz::TrialReport& r = s.reports[i];
            csv << i << ',' << num(r.input("seed")) << ','
                << num(r.input("n_nodes")) << ',' << num(r.gap) << ','
                << (r.pass ? 1 : 0) << '\n';
        }
    }
    ojson reports = ojson::array();
    for (const auto& r : s.reports) reports.push_back(report_to_json(r));
    emit(ojson{{"experiment", "i-suite"},
               {"trials", s.trials},
               {"failures", s.failures},
               {"min_gap", s.min_gap},
               {"reports", std::move(reports)}},
         g);
    return s.failures == 0 ? kExitOk : kExitFail;
}

int run_exp_preconv(const GlobalOpts& g, const std::string& p_path, double x1,
                    double x2, double s, double t, std::vector<double> eps) {
    const psz::ExponentSpec p = exponent_from_file(p_path);
    const auto reports = psz::preconv_probe(p, x1, x2, s, t, eps, g.quadrature());
    bool all_pass = true;
    ojson arr = ojson::array();
    for (const auto& r : reports) {
        all_pass = all_pass && r.pass;
        arr.push_back(report_to_json(r));
    }
    emit(ojson{{"experiment", "preconv"}, {"reports", std::move(arr)}}, g);
    return all_pass ? kExitOk : kExitFail;
}

int run_exp_steiner(const GlobalOpts& g, const std::string& p2d_path,
                    const std::string& grid_path, int demo_n) {
    psz::Grid2D grid;
    std::vector<psz::ExponentSpec> cols;
    if (demo_n > 0) {
        if (!p2d_path.empty() || !grid_path.empty())
            throw std::invalid_argument("--demo excludes --p2d and --grid");
        grid = psz::demo_two_band_grid(demo_n);
        cols.assign(grid.nx, psz::ExponentSpec::quadratic(2.0, 1.0));
    } else {
        if (p2d_path.empty() || grid_path.empty())
            throw std::invalid_argument("steiner needs --p2d and --grid, or --demo N");
        grid = grid_from_json(load_json(grid_path));
        const ojson pj = load_json(p2d_path);
        if (pj.is_array()) {
            for (const auto& item : pj) cols.push_back(exponent_from_json(item));
        } else {
            // a single exponent object is replicated across all columns
            cols.assign(std::max(grid.nx, 0), exponent_from_json(pj));
        }
    }
    const psz::SteinerResult r = psz::steiner_grid_demo(cols, grid);
    emit(ojson{{"experiment", "steiner"},
               {"nx", grid.nx},
               {"ny", grid.ny},
               {"I_original", r.I_original},
               {"I_symmetrized", r.I_symmetrized},
               {"gap", r.I_original - r.I_symmetrized}},
         g);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Verification toolkit for Polya-Szego type inequalities with a "
        "variable summability exponent"};
    app.fallthrough();
    app.require_subcommand(1);

    GlobalOpts g;
    g.threads = std::max(1u, std::thread::hardware_concurrency());
    app.add_option("--out", g.out_path, "Write the JSON result to this file instead of stdout");
    app.add_flag("--no-meta", g.no_meta,
                 "Omit the meta block and timings; output then depends only on inputs");
    app.add_option("--threads", g.threads,
                   "Worker threads for certify and experiment i-suite")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--rel-tol", g.rel_tol, "Quadrature relative tolerance")
        ->envname("PSZ_REL_TOL")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--abs-tol", g.abs_tol, "Quadrature absolute tolerance")
        ->envname("PSZ_ABS_TOL")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    int rc = kExitOk;

    // rearrange
    std::string re_in, re_csv;
    int re_samples = 201;
    auto* re = app.add_subcommand(
        "rearrange", "Symmetric decreasing rearrangement of a piecewise-linear profile");
    re->add_option("--in", re_in, "Profile JSON {breakpoints, values}")->required();
    auto* re_csv_opt =
        re->add_option("--csv", re_csv, "Also write a sampled x,u,u_star profile CSV");
    re->add_option("--samples", re_samples, "Rows in the CSV profile")
        ->check(CLI::Range(2, 1000001))
        ->needs(re_csv_opt)
        ->capture_default_str();
    re->callback([&] { rc = run_rearrange(g, re_in, re_csv, re_samples); });

    // functional
    std::string fn_u, fn_p, fn_which;
    auto* fn = app.add_subcommand("functional",
                                  "Evaluate the gradient integral I or J of a profile");
    fn->add_option("--u", fn_u, "Profile JSON")->required();
    fn->add_option("--p", fn_p, "Exponent JSON")->required();
    fn->add_option("--which", fn_which, "Functional to evaluate")
        ->required()
        ->check(CLI::IsMember({"I", "J"}));
    fn->callback([&] { rc = run_functional(g, fn_u, fn_p, fn_which); });

    // check
    std::string ck_p;
    bool ck_thm4 = false, ck_joint = false;
    int ck_mesh_w = 200, ck_mesh_x = 201;
    std::vector<double> ck_probe;
    auto* ck = app.add_subcommand("check", "Structural conditions on an exponent field");
    ck->add_option("--p", ck_p, "Exponent JSON")->required();
    ck->add_flag("--thm4", ck_thm4, "Sufficient conditions for the rearrangement inequality");
    ck->add_flag("--joint-k", ck_joint, "Mesh scan for joint convexity of the kernel K");
    ck->add_option("--mesh-w", ck_mesh_w, "Joint-convexity scan: w samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ck->add_option("--mesh-x", ck_mesh_x, "Joint-convexity scan: x samples")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    ck->add_option("--kcal-probe", ck_probe,
                   "Search for a tilt d making the tilted kernel's Hessian "
                   "determinant negative at (y, c)")
        ->expected(2);
    ck->callback([&] {
        rc = run_check(g, ck_p, ck_thm4, ck_joint, ck_mesh_w, ck_mesh_x, ck_probe);
    });

    // certify
    std::int64_t cert_budget = 10000000;
    auto* cert = app.add_subcommand("certify",
                                    "Certified interval bounds over the standard regions");
    cert->require_subcommand(1);
    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--budget", cert_budget,
                        "Total refinement evaluations across the mesh")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
    };
    auto* cert_calc = cert->add_subcommand(
        "calc", "Master certificate: sup A <= 0.63 over the whole quadrant");
    add_budget(cert_calc);
    cert_calc->callback([&] { rc = run_certify_master(g, false, cert_budget); });
    auto* cert_half = cert->add_subcommand(
        "calc-half", "Master certificate: sup A <= 0.5 for q <= 1.36");
    add_budget(cert_half);
    cert_half->callback([&] { rc = run_certify_master(g, true, cert_budget); });

    std::string reg_name, reg_dump;
    double reg_step1 = std::nan(""), reg_step2 = std::nan("");
    double reg_threshold = std::nan("");
    auto* cert_reg = cert->add_subcommand("region", "Certify one named region");
    cert_reg->add_option("--name", reg_name, "Region name (R1..R9 or a derived sweep)")
        ->required();
    cert_reg->add_option("--step1", reg_step1, "Override the first mesh step")
        ->check(CLI::PositiveNumber);
    cert_reg->add_option("--step2", reg_step2, "Override the second mesh step")
        ->check(CLI::PositiveNumber);
    cert_reg->add_option("--threshold", reg_threshold, "Override the threshold");
    cert_reg->add_option("--dump", reg_dump, "Per-cell CSV dump path");
    add_budget(cert_reg);
    cert_reg->callback([&] {
        rc = run_certify_region(g, reg_name, cert_budget, reg_step1, reg_step2,
                                reg_threshold, reg_dump);
    });

    // experiment
    auto* exp = app.add_subcommand("experiment",
                                   "Empirical probes of the rearrangement inequalities");
    exp->require_subcommand(1);

    std::string ej_p;
    auto* exp_j = exp->add_subcommand(
        "j-counterexample", "Scan tent profiles for a failure of the J inequality");
    exp_j->add_option("--p", ej_p, "Exponent JSON")->required();
    exp_j->callback([&] { rc = run_exp_j(g, ej_p); });

    std::string ei_p, ei_csv;
    int ei_trials = 100, ei_max_nodes = 12;
    std::uint64_t ei_seed = 1;
    bool ei_plateaus = false;
    auto* exp_i = exp->add_subcommand(
        "i-suite", "Random piecewise-linear trials of the I inequality");
    exp_i->add_option("--p", ei_p, "Exponent JSON")->required();
    exp_i->add_option("--trials", ei_trials, "Number of trials")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    exp_i->add_option("--seed", ei_seed, "Base seed")->capture_default_str();
    exp_i->add_option("--max-nodes", ei_max_nodes, "Largest node count per profile")
        ->check(CLI::Range(1, 1000))
        ->capture_default_str();
    exp_i->add_flag("--plateaus", ei_plateaus, "Allow plateau segments in the profiles");
    exp_i->add_option("--csv", ei_csv, "Per-trial gap CSV path");
    exp_i->callback([&] {
        rc = run_exp_i_suite(g, ei_p, ei_trials, ei_seed, ei_max_nodes, ei_plateaus, ei_csv);
    });

    std::string ep_p;
    double ep_x1 = 0.0, ep_x2 = 0.0, ep_s = 0.0, ep_t = 0.0;
    std::vector<double> ep_eps{1e-2, 5e-3, 2.5e-3};
    auto* exp_p = exp->add_subcommand(
        "preconv", "Two-ramp probe of the kernel-sum inequality at small heights");
    exp_p->add_option("--p", ep_p, "Exponent JSON")->required();
    exp_p->add_option("--x1", ep_x1, "Left ramp center")->required();
    exp_p->add_option("--x2", ep_x2, "Right ramp center")->required();
    exp_p->add_option("--s", ep_s, "Left inverse slope")->required();
    exp_p->add_option("--t", ep_t, "Right inverse slope")->required();
    exp_p->add_option("--eps", ep_eps, "Heights to probe (repeatable)")
        ->check(CLI::PositiveNumber);
    exp_p->callback([&] { rc = run_exp_preconv(g, ep_p, ep_x1, ep_x2, ep_s, ep_t, ep_eps); });

    std::string es_p2d, es_grid;
    int es_demo = 0;
    auto* exp_s = exp->add_subcommand(
        "steiner", "Column-wise rearrangement of a 2D grid field");
    exp_s->add_option("--p2d", es_p2d,
                      "Exponent JSON per column (array), or one object for all columns");
    exp_s->add_option("--grid", es_grid, "Grid JSON {nx, ny, hx, hy, samples}");
    exp_s->add_option("--demo", es_demo, "Use the built-in two-band field at this resolution")
        ->check(CLI::PositiveNumber);
    exp_s->callback([&] { rc = run_exp_steiner(g, es_p2d, es_grid, es_demo); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    } catch (const ojson::parse_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return rc;
}
