#ifndef BQEC_CHANNELS_HPP
#define BQEC_CHANNELS_HPP

#include <cstdint>
#include <vector>

#include "bqec/hilbert.hpp"

namespace bqec {

enum class ErrorFamily { loss, dephasing, composite, custom };
enum class KrausOrder { full, first_order };

// Validity windows from the small-rate expansion: beyond these the
// first-order sets stop being approximately trace preserving.
inline constexpr double kLossValidityMax = 1e-2;
inline constexpr double kDephasingValidityMax = 1e-3;

struct KrausSet {
    std::vector<Mat> ops;
    ErrorFamily family = ErrorFamily::custom;
    double gamma = 0.0;
    KrausOrder order = KrausOrder::full;
    bool validity_warning = false;  // gamma outside the expansion window

    int dim() const { return ops.empty() ? 0 : int(ops.front().rows()); }
    int size() const { return int(ops.size()); }
};

// All operators present, square, and of one shared dimension.
void require_uniform_dim(const KrausSet& kraus);

// gamma_1 = 1 - exp(-kappa t) for loss, gamma_2 = kappa t for dephasing.
double gamma_from_rate(double kappa, double t, ErrorFamily family);

// sqrt(gamma^j / j!) (1-gamma)^(n/2) a^j, built entrywise on Fock indices.
Mat loss_kraus(double gamma1, int j, int dim);

// sqrt(gamma^j / j!) exp(-gamma n^2 / 2) n^j; diagonal in the Fock basis.
Mat dephasing_kraus(double gamma2, int j, int dim);

// Operators K_0 .. K_J of the given family.
KrausSet full_kraus_set(ErrorFamily family, double gamma, int J, int dim);

// Two-operator expansions: loss {I - (g/2) n, sqrt(g) a},
// dephasing {I - (g/2) n^2, sqrt(g) n}.  Sets validity_warning outside the
// documented gamma windows instead of failing.
KrausSet first_order_set(ErrorFamily family, double gamma, int dim);

// sum_j K_j rho K_j^dag; no renormalization.
Mat apply_channel(const KrausSet& kraus, const Mat& rho);

// <s| sum K^dag K |s> - 1, signed.
double tp_residual(const KrausSet& kraus, const Vec& s);

// Scalar rescale of a Kraus set so that the code-averaged completeness sum
// is exactly 2: sum_mu <mu|sum K^dag K|mu> = 2.  Fidelity metrics for the
// truncated (non-trace-preserving) sets use this normalization.
KrausSet trace_normalized_on(const KrausSet& kraus, const Vec& c0, const Vec& c1);

// || N1(N2(rho)) - N2(N1(rho)) ||_F with full sets truncated at J terms.
double commutation_distance(double gamma1, double gamma2, const Mat& rho,
                            int J, int dim);

// Deterministic random density matrix (Hermitian, PSD, unit trace).
Mat random_density(int dim, std::uint64_t seed);

}  // namespace bqec

#endif
