#include "bqec/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "bqec/metrics_kl.hpp"
#include "bqec/recovery_opt.hpp"
#include "bqec/recovery_petz.hpp"

namespace bqec {

std::string measure_name(Measure m) {
    switch (m) {
        case Measure::kl: return "kl";
        case Measure::petz: return "petz";
        case Measure::opt: return "opt";
    }
    return "?";
}

std::vector<std::pair<std::string, CodePair>> standard_codes(int dim) {
    std::vector<std::pair<std::string, CodePair>> codes;
    codes.emplace_back("sf", make_sf_code(dim));
    const struct {
        const char* label;
        double alpha;
        Orientation branch;
    } cats[] = {
        {"ssc_par_0.5", 0.5, Orientation::parallel},
        {"ssc_par_1.0", 1.0, Orientation::parallel},
        {"ssc_perp_0.5", 0.5, Orientation::perpendicular},
        {"ssc_perp_1.0", 1.0, Orientation::perpendicular},
    };
    for (const auto& c : cats) {
        const double r = solve_ssc_squeezing(c.alpha, kTargetMeanPhoton, c.branch, dim);
        codes.emplace_back(c.label, make_ssc_code(c.alpha, r, dim));
    }
    return codes;
}

std::vector<double> log_grid(double lo, double hi, int points) {
    if (points < 1) throw std::invalid_argument("log_grid: need at least one point");
    if (points == 1 || lo == hi) return {lo};
    if (lo <= 0 || hi <= lo) throw std::invalid_argument("log_grid: need 0 < lo < hi");
    std::vector<double> grid(static_cast<size_t>(points));
    const double step = (std::log10(hi) - std::log10(lo)) / (points - 1);
    for (int i = 0; i < points; ++i) grid[size_t(i)] = std::pow(10.0, std::log10(lo) + i * step);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

namespace {

void parallel_for(int n, const std::function<void(int)>& fn) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = std::min<unsigned>(hw, unsigned(std::max(1, n)));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i; (i = next.fetch_add(1)) < n;) fn(i);
        });
    for (auto& t : pool) t.join();
}

void validate(const SweepConfig& config) {
    if (config.points < 1) throw std::invalid_argument("sweep: points must be >= 1");
    if (config.dim < 8) throw std::invalid_argument("sweep: dim too small");
    if (config.measures.empty()) throw std::invalid_argument("sweep: no measures requested");
    if (!config.force) {
        if (config.gamma_min <= 0)
            throw std::invalid_argument("sweep: gamma_min must be positive (use --force for 0)");
        const double window = (config.error == ErrorFamily::loss) ? kLossValidityMax
                                                                  : kDephasingValidityMax;
        if (config.gamma_max > window * (1 + 1e-12))
            throw std::invalid_argument(
                "sweep: gamma_max exceeds the first-order validity window (use --force)");
    }
    if (config.gamma_max < config.gamma_min)
        throw std::invalid_argument("sweep: gamma_max < gamma_min");
}

struct GridValues {
    // values[point][code] per measure; NaN marks a failed point
    std::map<std::string, std::vector<std::vector<double>>> values;
    std::vector<std::string> failures;
    double max_tp_residual = 0.0;
};

GridValues evaluate_grid(const SweepConfig& config, const std::vector<double>& grid,
                         const std::vector<std::pair<std::string, CodePair>>& codes,
                         int dim) {
    GridValues out;
    const int np = int(grid.size());
    const int nc = int(codes.size());
    for (const auto& m : config.measures)
        out.values[measure_name(m)] =
            std::vector<std::vector<double>>(size_t(np), std::vector<double>(size_t(nc), 0.0));
    std::vector<double> tp_worst(size_t(np), 0.0);
    std::vector<std::string> fail(static_cast<size_t>(np));

    parallel_for(np, [&](int p) {
        const double gamma = grid[size_t(p)];
        const KrausSet kraus = first_order_set(config.error, gamma, dim);
        for (int c = 0; c < nc; ++c) {
            const CodePair& code = codes[size_t(c)].second;
            tp_worst[size_t(p)] = std::max(
                tp_worst[size_t(p)],
                std::max(std::abs(tp_residual(kraus, code.zero_logical)),
                         std::abs(tp_residual(kraus, code.one_logical))));
            for (const auto& m : config.measures) {
                double v = std::numeric_limits<double>::quiet_NaN();
                try {
                    switch (m) {
                        case Measure::kl:
                            v = kl_cost_kraus(code, kraus);
                            break;
                        case Measure::petz:
                            v = petz_fidelity(code, kraus).fidelity;
                            break;
                        case Measure::opt:
                            v = optimal_recovery(code, kraus).choi.fidelity;
                            break;
                    }
                } catch (const std::exception& e) {
                    std::ostringstream msg;
                    msg << measure_name(m) << "/" << codes[size_t(c)].first << "/gamma="
                        << gamma << ": " << e.what();
                    fail[size_t(p)] = fail[size_t(p)].empty()
                                          ? msg.str()
                                          : fail[size_t(p)] + "; " + msg.str();
                }
                out.values[measure_name(m)][size_t(p)][size_t(c)] = v;
            }
        }
    });

    for (int p = 0; p < np; ++p) {
        out.max_tp_residual = std::max(out.max_tp_residual, tp_worst[size_t(p)]);
        if (!fail[size_t(p)].empty()) out.failures.push_back(fail[size_t(p)]);
    }
    return out;
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config) {
    validate(config);
    SweepResult result;
    result.dim = config.dim;
    result.grid = log_grid(config.gamma_min, config.gamma_max, config.points);

    const auto codes = standard_codes(config.dim);
    GridValues main_values = evaluate_grid(config, result.grid, codes, config.dim);
    result.solver_failures = main_values.failures;
    result.max_tp_residual = main_values.max_tp_residual;

    for (const auto& [measure, table] : main_values.values) {
        for (size_t p = 0; p < result.grid.size(); ++p)
            for (size_t c = 0; c < codes.size(); ++c) {
                const double v = table[p][c];
                if (!std::isfinite(v)) continue;  // failed point, recorded separately
                result.rows.push_back({result.grid[p], codes[c].first, measure, v});
            }
    }
    std::sort(result.rows.begin(), result.rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tie(a.measure, a.state, a.gamma) < std::tie(b.measure, b.state, b.gamma);
    });

    if (config.check_convergence) {
        const int dim2 = (3 * config.dim) / 2;
        const auto codes2 = standard_codes(dim2);
        GridValues check = evaluate_grid(config, result.grid, codes2, dim2);
        for (const auto& [measure, table] : main_values.values) {
            const auto& table2 = check.values.at(measure);
            for (size_t p = 0; p < result.grid.size(); ++p)
                for (size_t c = 0; c < codes.size(); ++c) {
                    const double delta = std::abs(table[p][c] - table2[p][c]);
                    if (!(delta < 1e-8)) {
                        std::ostringstream msg;
                        msg << measure << "/" << codes[c].first << "/gamma=" << result.grid[p]
                            << ": |delta|=" << delta << " between dim " << config.dim
                            << " and " << dim2;
                        result.convergence_violations.push_back(msg.str());
                    }
                }
        }
    }
    return result;
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_sweep_csv(const SweepResult& result, std::ostream& out) {
    out << "gamma,state,measure,value\n";
    for (const auto& row : result.rows)
        out << format_double(row.gamma) << ',' << row.state << ',' << row.measure << ','
            << format_double(row.value) << '\n';
}

std::string sweep_json(const SweepConfig& config, const SweepResult& result) {
    using nlohmann::json;
    json j;
    j["config"] = {
        {"error", config.error == ErrorFamily::loss ? "loss" : "dephasing"},
        {"gamma_min", config.gamma_min},
        {"gamma_max", config.gamma_max},
        {"points", config.points},
        {"dim", config.dim},
        {"force", config.force},
        {"seed", config.seed},
    };
    json measures = json::array();
    for (const auto& m : config.measures) measures.push_back(measure_name(m));
    j["config"]["measures"] = measures;
    j["metadata"] = {
        {"tool_version", kToolVersion},
        {"dim", result.dim},
        {"max_tp_residual", result.max_tp_residual},
        {"solver_failures", result.solver_failures},
        {"convergence_violations", result.convergence_violations},
        {"grid", result.grid},
    };

    // regroup rows as measure -> state -> values over the grid
    std::map<std::string, std::map<std::string, std::map<double, double>>> series;
    for (const auto& row : result.rows) series[row.measure][row.state][row.gamma] = row.value;

    json orderings = json::object();
    json slopes = json::object();
    for (const auto& [measure, states] : series) {
        const bool fidelity_like = measure != "kl";
        json per_point = json::array();
        for (double g : result.grid) {
            std::vector<std::pair<double, std::string>> ranked;
            for (const auto& [state, vals] : states) {
                auto it = vals.find(g);
                if (it == vals.end()) continue;
                const double badness = fidelity_like ? 1.0 - it->second : it->second;
                ranked.emplace_back(badness, state);
            }
            std::sort(ranked.begin(), ranked.end());
            json labels = json::array();
            for (const auto& [v, s] : ranked) labels.push_back(s);
            per_point.push_back(labels);
        }
        orderings[measure] = per_point;

        json measure_slopes = json::object();
        for (const auto& [state, vals] : states) {
            std::vector<double> lx, ly;
            for (const auto& [g, v] : vals) {
                const double y = fidelity_like ? 1.0 - v : v;
                if (g > 0 && y > 1e-300) {
                    lx.push_back(std::log10(g));
                    ly.push_back(std::log10(y));
                }
            }
            if (lx.size() < 2) {
                measure_slopes[state] = nullptr;
                continue;
            }
            double sx = 0, sy = 0, sxx = 0, sxy = 0;
            for (size_t i = 0; i < lx.size(); ++i) {
                sx += lx[i];
                sy += ly[i];
                sxx += lx[i] * lx[i];
                sxy += lx[i] * ly[i];
            }
            const double n = double(lx.size());
            measure_slopes[state] = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        }
        slopes[measure] = measure_slopes;
    }
    j["orderings"] = orderings;
    j["slopes"] = slopes;
    return j.dump(2);
}

std::string sweep_svg(const SweepResult& result, const std::string& measure) {
    const bool fidelity_like = measure != "kl";
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& row : result.rows) {
        if (row.measure != measure) continue;
        double y = fidelity_like ? 1.0 - row.value : row.value;
        if (row.gamma <= 0 || y <= 0) continue;  // log-log plot
        const double lx = std::log10(row.gamma), ly = std::log10(y);
        series[row.state].emplace_back(lx, ly);
        xmin = std::min(xmin, lx);
        xmax = std::max(xmax, lx);
        ymin = std::min(ymin, ly);
        ymax = std::max(ymax, ly);
    }
    const int width = 820, height = 560, ml = 70, mr = 170, mt = 30, mb = 50;
    if (series.empty() || xmax <= xmin) {
        return "<svg xmlns='http://www.w3.org/2000/svg' width='820' height='560'>"
               "<text x='20' y='40'>no positive data for measure " + measure +
               "</text></svg>";
    }
    if (ymax <= ymin) ymax = ymin + 1;
    auto px = [&](double lx) { return ml + (lx - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto py = [&](double ly) { return height - mb - (ly - ymin) / (ymax - ymin) * (height - mt - mb); };

    std::ostringstream svg;
    svg << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "' font-family='sans-serif' font-size='12'>\n";
    svg << "<rect width='100%' height='100%' fill='white'/>\n";
    svg << "<rect x='" << ml << "' y='" << mt << "' width='" << (width - ml - mr) << "' height='"
        << (height - mt - mb) << "' fill='none' stroke='black'/>\n";
    for (int d = int(std::ceil(xmin)); d <= int(std::floor(xmax)); ++d) {
        svg << "<line x1='" << px(d) << "' y1='" << (height - mb) << "' x2='" << px(d) << "' y2='"
            << (height - mb + 5) << "' stroke='black'/>\n";
        svg << "<text x='" << px(d) << "' y='" << (height - mb + 20)
            << "' text-anchor='middle'>1e" << d << "</text>\n";
    }
    for (int d = int(std::ceil(ymin)); d <= int(std::floor(ymax)); ++d) {
        svg << "<line x1='" << (ml - 5) << "' y1='" << py(d) << "' x2='" << ml << "' y2='" << py(d)
            << "' stroke='black'/>\n";
        svg << "<text x='" << (ml - 8) << "' y='" << (py(d) + 4) << "' text-anchor='end'>1e" << d
            << "</text>\n";
    }
    svg << "<text x='" << (ml + (width - ml - mr) / 2) << "' y='" << (height - 10)
        << "' text-anchor='middle'>gamma</text>\n";
    svg << "<text x='18' y='" << (mt + (height - mt - mb) / 2) << "' transform='rotate(-90 18 "
        << (mt + (height - mt - mb) / 2) << ")' text-anchor='middle'>"
        << (fidelity_like ? "infidelity" : "KL cost") << "</text>\n";

    static const char* palette[] = {"#2e7d32", "#e91e8c", "#7b1fa2", "#ef6c00", "#5d4037",
                                    "#1565c0", "#00838f", "#9e9d24"};
    int color_idx = 0, legend_y = mt + 16;
    for (const auto& [state, pts] : series) {
        const char* color = palette[color_idx++ % 8];
        svg << "<polyline fill='none' stroke='" << color << "' stroke-width='1.8' points='";
        auto sorted = pts;
        std::sort(sorted.begin(), sorted.end());
        for (const auto& [lx, ly] : sorted) svg << px(lx) << ',' << py(ly) << ' ';
        svg << "'/>\n";
        svg << "<line x1='" << (width - mr + 12) << "' y1='" << legend_y << "' x2='"
            << (width - mr + 36) << "' y2='" << legend_y << "' stroke='" << color
            << "' stroke-width='3'/>\n";
        svg << "<text x='" << (width - mr + 42) << "' y='" << (legend_y + 4) << "'>" << state
            << "</text>\n";
        legend_y += 20;
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace bqec
