#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bqec/channels.hpp"
#include "bqec/states.hpp"
#include "bqec/sweep.hpp"

namespace fs = std::filesystem;
using namespace bqec;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;
constexpr int kExitConvergence = 3;

int run_codewords(int dim) {
    struct Target {
        const char* label;
        double alpha;
        Orientation branch;
        double expected_r;
    };
    const Target targets[] = {
        {"ssc_par_0.5", 0.5, Orientation::parallel, -1.41},
        {"ssc_par_1.0", 1.0, Orientation::parallel, -1.36},
        {"ssc_perp_0.5", 0.5, Orientation::perpendicular, 1.39},
        {"ssc_perp_1.0", 1.0, Orientation::perpendicular, 1.29},
    };

    bool ok = true;
    try {
        const double rstar = solve_sf_codeword_r();
        const double exact = std::acosh(5.0) / 4.0;
        const Vec sf = squeezed_fock(rstar, 2, dim);
        const double nbar = mean_photon(sf);
        std::printf("squeezed-Fock codewords (n = 2):\n");
        std::printf("  r* = %.6f   (arccosh(5)/4 = %.6f)\n", rstar, exact);
        std::printf("  mean photon = %.4f   (target 3.830 +- 0.005)\n", nbar);
        ok = ok && std::abs(rstar - exact) < 1e-9 && std::abs(nbar - 3.83) <= 0.005;

        std::printf("squeezed-cat codewords solved for <n> = %.2f:\n", kTargetMeanPhoton);
        for (const auto& t : targets) {
            const double r = solve_ssc_squeezing(t.alpha, kTargetMeanPhoton, t.branch, dim);
            const bool match = std::abs(r - t.expected_r) <= 0.01;
            std::printf("  %-13s alpha=%.1f  r = %+.4f   (reference %+.2f)  %s\n", t.label,
                        t.alpha, r, t.expected_r, match ? "ok" : "MISMATCH");
            ok = ok && match;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "codewords: %s\n", e.what());
        return kExitSolver;
    }
    return ok ? kExitOk : kExitSolver;
}

int run_commute_check(double gamma1, double gamma2, int J, int dim, std::uint64_t seed) {
    const Mat rho = random_density(dim, seed);
    const double dist = commutation_distance(gamma1, gamma2, rho, J, dim);

    // convergence indicator: trace defect of each truncated channel
    const KrausSet loss = full_kraus_set(ErrorFamily::loss, gamma1, J, dim);
    const KrausSet deph = full_kraus_set(ErrorFamily::dephasing, gamma2, J, dim);
    const double defect =
        std::max(std::abs(apply_channel(loss, rho).trace().real() - 1.0),
                 std::abs(apply_channel(deph, rho).trace().real() - 1.0));
    const bool converged = defect < 1e-8;
    const bool pass = dist < 1e-8;

    std::printf("commutation check (seed %llu, dim %d, J %d):\n",
                (unsigned long long)seed, dim, J);
    std::printf("  gamma1 = %g, gamma2 = %g\n", gamma1, gamma2);
    std::printf("  || N1(N2(rho)) - N2(N1(rho)) ||_F = %.3e  -> %s\n", dist,
                pass ? "pass" : "FAIL");
    std::printf("  channel trace defect = %.3e  -> %s\n", defect,
                converged ? "converged" : "not-converged");
    return pass ? kExitOk : kExitSolver;
}

void apply_json_config(const std::string& path, SweepConfig& cfg,
                       std::vector<std::string>& measures, std::string& error,
                       std::vector<std::string>& formats) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file " + path);
    nlohmann::json j;
    in >> j;
    if (j.contains("error")) error = j["error"].get<std::string>();
    if (j.contains("gamma_min")) cfg.gamma_min = j["gamma_min"].get<double>();
    if (j.contains("gamma_max")) cfg.gamma_max = j["gamma_max"].get<double>();
    if (j.contains("points")) cfg.points = j["points"].get<int>();
    if (j.contains("dim")) cfg.dim = j["dim"].get<int>();
    if (j.contains("out")) cfg.out_dir = j["out"].get<std::string>();
    if (j.contains("force")) cfg.force = j["force"].get<bool>();
    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("check_convergence")) cfg.check_convergence = j["check_convergence"].get<bool>();
    if (j.contains("measure")) measures = j["measure"].get<std::vector<std::string>>();
    if (j.contains("format")) formats = j["format"].get<std::vector<std::string>>();
}

int run_sweep_cmd(SweepConfig cfg, const std::vector<std::string>& measures,
                  const std::string& error, const std::vector<std::string>& formats,
                  bool gamma_max_given) {
    if (error == "loss") {
        cfg.error = ErrorFamily::loss;
    } else if (error == "dephasing") {
        cfg.error = ErrorFamily::dephasing;
        if (!gamma_max_given && cfg.gamma_max == 1e-2) cfg.gamma_max = kDephasingValidityMax;
    } else {
        std::fprintf(stderr, "sweep: unknown error family '%s'\n", error.c_str());
        return kExitValidation;
    }
    cfg.measures.clear();
    for (const auto& m : measures) {
        if (m == "kl") cfg.measures.push_back(Measure::kl);
        else if (m == "petz") cfg.measures.push_back(Measure::petz);
        else if (m == "opt") cfg.measures.push_back(Measure::opt);
        else {
            std::fprintf(stderr, "sweep: unknown measure '%s'\n", m.c_str());
            return kExitValidation;
        }
    }
    cfg.csv = cfg.json = cfg.svg = false;
    for (const auto& f : formats) {
        if (f == "csv") cfg.csv = true;
        else if (f == "json") cfg.json = true;
        else if (f == "svg") cfg.svg = true;
        else {
            std::fprintf(stderr, "sweep: unknown format '%s'\n", f.c_str());
            return kExitValidation;
        }
    }

    SweepResult result;
    try {
        result = run_sweep(cfg);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "sweep: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sweep: %s\n", e.what());
        return kExitSolver;
    }

    fs::create_directories(cfg.out_dir);
    const std::string base = std::string("sweep_") + error;
    if (cfg.csv) {
        std::ofstream out(fs::path(cfg.out_dir) / (base + ".csv"));
        write_sweep_csv(result, out);
    }
    if (cfg.json) {
        std::ofstream out(fs::path(cfg.out_dir) / (base + ".json"));
        out << sweep_json(cfg, result);
    }
    if (cfg.svg) {
        for (const auto& m : cfg.measures) {
            std::ofstream out(fs::path(cfg.out_dir) /
                              (base + "_" + measure_name(m) + ".svg"));
            out << sweep_svg(result, measure_name(m));
        }
    }

    std::printf("sweep: %zu rows over %zu grid points (dim %d, max TP residual %.2e)\n",
                result.rows.size(), result.grid.size(), result.dim, result.max_tp_residual);
    for (const auto& f : result.solver_failures)
        std::fprintf(stderr, "sweep: solver failure: %s\n", f.c_str());
    for (const auto& v : result.convergence_violations)
        std::fprintf(stderr, "sweep: convergence gate: %s\n", v.c_str());
    if (!result.convergence_violations.empty()) return kExitConvergence;
    if (!result.solver_failures.empty()) return kExitSolver;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bosonic code toolkit: squeezed-Fock vs squeezed-cat error correction"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    auto* cw = app.add_subcommand("codewords",
                                  "Solve codeword parameters and check them against the "
                                  "reference table");
    int cw_dim = 120;
    cw->add_option("--dim", cw_dim, "Fock cutoff");

    auto* sw = app.add_subcommand("sweep", "Sweep a metric over the error rate");
    SweepConfig cfg;
    std::vector<std::string> measures = {"kl", "petz"};
    std::vector<std::string> formats = {"csv"};
    std::string error = "loss";
    std::string config_path;
    sw->add_option("--config", config_path, "JSON config file (flags override it)");
    auto* opt_measure = sw->add_option("--measure", measures, "kl|petz|opt")->delimiter(',');
    auto* opt_error = sw->add_option("--error", error, "loss|dephasing");
    auto* opt_gmin = sw->add_option("--gamma-min", cfg.gamma_min, "low end of the rate grid");
    auto* opt_gmax = sw->add_option("--gamma-max", cfg.gamma_max, "high end of the rate grid");
    auto* opt_points = sw->add_option("--points", cfg.points, "log-spaced grid points");
    auto* opt_dim = sw->add_option("--dim", cfg.dim, "Fock cutoff");
    auto* opt_out = sw->add_option("--out", cfg.out_dir, "output directory");
    auto* opt_format = sw->add_option("--format", formats, "csv,json,svg")->delimiter(',');
    auto* opt_force = sw->add_flag("--force", cfg.force, "allow rates outside the validity window");
    auto* opt_seed = sw->add_option("--seed", cfg.seed, "seed recorded in metadata");
    auto* opt_conv = sw->add_flag("--check-convergence", cfg.check_convergence,
                                  "re-run at 1.5x dim and compare scalars");

    auto* cc = app.add_subcommand("commute-check",
                                  "Frobenius distance between the two channel orderings");
    double cc_g1 = 1e-3, cc_g2 = 1e-3;
    int cc_J = 20, cc_dim = 40;
    std::uint64_t cc_seed = 12345;
    cc->add_option("--gamma1", cc_g1, "loss rate");
    cc->add_option("--gamma2", cc_g2, "dephasing rate");
    cc->add_option("-J,--terms", cc_J, "Kraus series truncation");
    cc->add_option("--dim", cc_dim, "Fock cutoff");
    cc->add_option("--seed", cc_seed, "density-matrix seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cw->parsed()) return run_codewords(cw_dim);
        if (cc->parsed()) return run_commute_check(cc_g1, cc_g2, cc_J, cc_dim, cc_seed);
        if (sw->parsed()) {
            if (!config_path.empty()) {
                // config supplies values only where flags were not given
                SweepConfig file_cfg = cfg;
                std::vector<std::string> file_measures = measures;
                std::vector<std::string> file_formats = formats;
                std::string file_error = error;
                apply_json_config(config_path, file_cfg, file_measures, file_error, file_formats);
                if (!*opt_gmin) cfg.gamma_min = file_cfg.gamma_min;
                if (!*opt_gmax) cfg.gamma_max = file_cfg.gamma_max;
                if (!*opt_points) cfg.points = file_cfg.points;
                if (!*opt_dim) cfg.dim = file_cfg.dim;
                if (!*opt_out) cfg.out_dir = file_cfg.out_dir;
                if (!*opt_force) cfg.force = file_cfg.force;
                if (!*opt_seed) cfg.seed = file_cfg.seed;
                if (!*opt_conv) cfg.check_convergence = file_cfg.check_convergence;
                if (!*opt_measure) measures = file_measures;
                if (!*opt_format) formats = file_formats;
                if (!*opt_error) error = file_error;
            }
            return run_sweep_cmd(cfg, measures, error, formats, bool(*opt_gmax));
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "%s\n", e.what());
        return kExitSolver;
    }
    return kExitValidation;
}
