#ifndef BQEC_SWEEP_HPP
#define BQEC_SWEEP_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bqec/channels.hpp"
#include "bqec/states.hpp"

namespace bqec {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr double kTargetMeanPhoton = 3.83;

enum class Measure { kl, petz, opt };

std::string measure_name(Measure m);

struct SweepConfig {
    ErrorFamily error = ErrorFamily::loss;
    double gamma_min = 1e-7;
    double gamma_max = 1e-2;
    int points = 25;
    int dim = 120;
    std::vector<Measure> measures = {Measure::kl, Measure::petz};
    std::string out_dir = ".";
    bool csv = true;
    bool json = false;
    bool svg = false;
    bool force = false;            // lift the gamma validity-window check
    bool check_convergence = false;
    std::uint64_t seed = 12345;
};

struct SweepRow {
    double gamma = 0.0;
    std::string state;
    std::string measure;
    double value = 0.0;  // KL cost for "kl"; channel fidelity for "petz"/"opt"
};

struct SweepResult {
    std::vector<SweepRow> rows;  // sorted by (measure, state, gamma)
    std::vector<double> grid;
    std::vector<std::string> solver_failures;
    std::vector<std::string> convergence_violations;
    double max_tp_residual = 0.0;
    int dim = 0;
};

// The five reference codes: the n=2 squeezed-Fock pair plus the four
// squeezed-cat codes with the squeezing solved so the even cat sits at
// mean photon 3.83.
std::vector<std::pair<std::string, CodePair>> standard_codes(int dim);

std::vector<double> log_grid(double lo, double hi, int points);

// Throws std::invalid_argument on config validation failures.
SweepResult run_sweep(const SweepConfig& config);

void write_sweep_csv(const SweepResult& result, std::ostream& out);
std::string sweep_json(const SweepConfig& config, const SweepResult& result);
std::string sweep_svg(const SweepResult& result, const std::string& measure);

}  // namespace bqec

#endif
