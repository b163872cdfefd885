#ifndef BQEC_STATES_HPP
#define BQEC_STATES_HPP

#include <map>
#include <string>

#include "bqec/hilbert.hpp"

namespace bqec {

enum class Parity { even, odd };
enum class Orientation { parallel, perpendicular };
enum class CodeFamily { sf, ssc_parallel, ssc_perp, custom };

// Squeezed Schroedinger-cat parameters.  Codewords are the even/odd
// combinations of D(+alpha) S(r)|0> and D(-alpha) S(r)|0>; the parallel
// class has r < 0 (blobs spaced and elongated along the same quadrature),
// the perpendicular class r > 0.
struct SscParams {
    double alpha = 0.0;   // > 0, real displacement amplitude
    double r = 0.0;       // squeezing parameter, sign encodes orientation
    Parity parity = Parity::even;
    Orientation orientation = Orientation::perpendicular;
};

struct CodePair {
    Vec zero_logical;
    Vec one_logical;
    CodeFamily family = CodeFamily::custom;
    std::map<std::string, double> params;

    int dim() const { return int(zero_logical.size()); }
};

// Tail-mass construction guard.  States whose top `tail_window` Fock levels
// carry more probability than this are rejected as under-truncated.
inline constexpr double kTailConstructionTol = 1e-4;
inline constexpr int kTailWindow = 10;

double tail_mass(const Vec& state, int window = kTailWindow);

Vec fock(int n, int dim);

// S(r) = exp((r/2)(a^2 - a^dag^2)); r > 0 narrows the x quadrature.
Mat squeeze_operator(double r, int dim);

// Normalized S(r)|n>.
Vec squeezed_fock(double r, int n, int dim);

// D(alpha) = exp(alpha a^dag - conj(alpha) a).
Mat displacement(Complex alpha, int dim);

// Normalized (D(alpha) +/- D(-alpha)) S(r)|0>.
Vec squeezed_cat(const SscParams& p, int dim);

double mean_photon(const Vec& state);

Complex overlap(const Vec& a, const Vec& b);

// Closed-form <-r,n|r,n> for n in {0,1,2}.
double sf_overlap_analytic(int n, double r);

// Position wavefunction of S(r)|n>, real for real r.
double sf_wavefunction(double x, double r, int n);

// Root of sf_overlap_analytic(2, r) on (0,1): arccosh(5)/4.
double solve_sf_codeword_r();

// Squeezing that puts the even cat's mean photon number at target_n.
// Bisection over r in [0.05, 1.6] (perpendicular) or [-1.6, -0.05]
// (parallel); throws std::runtime_error when no sign change brackets a root.
double solve_ssc_squeezing(double alpha, double target_n, Orientation branch,
                           int dim = 120);

CodePair make_sf_code(int dim);
CodePair make_ssc_code(double alpha, double r, int dim);
CodePair make_custom_code(const Vec& zero, const Vec& one);

}  // namespace bqec

#endif
