#include "bqec/channels.hpp"

#include <cmath>
#include <random>

namespace bqec {

void require_uniform_dim(const KrausSet& kraus) {
    if (kraus.ops.empty()) throw std::invalid_argument("Kraus set is empty");
    const auto rows = kraus.ops.front().rows();
    for (const auto& k : kraus.ops)
        if (k.rows() != rows || k.cols() != rows)
            throw std::invalid_argument("Kraus set operators must share one square dimension");
}

double gamma_from_rate(double kappa, double t, ErrorFamily family) {
    if (kappa < 0 || t < 0)
        throw std::invalid_argument("gamma_from_rate: negative rate or time");
    switch (family) {
        case ErrorFamily::loss:
            return 1.0 - std::exp(-kappa * t);
        case ErrorFamily::dephasing:
            return kappa * t;
        default:
            throw std::invalid_argument("gamma_from_rate: loss or dephasing only");
    }
}

namespace {

double log_factorial(int j) {
    double acc = 0.0;
    for (int k = 2; k <= j; ++k) acc += std::log(double(k));
    return acc;
}

}  // namespace

Mat loss_kraus(double gamma1, int j, int dim) {
    require_dim(dim);
    if (gamma1 < 0.0 || gamma1 >= 1.0)
        throw std::invalid_argument("loss_kraus: gamma1 must lie in [0,1)");
    if (j < 0) throw std::invalid_argument("loss_kraus: j must be >= 0");
    Mat k = Mat::Zero(dim, dim);
    if (gamma1 == 0.0) {
        if (j == 0) return Mat::Identity(dim, dim);
        return k;  // sqrt(0^j / j!) = 0
    }
    // (K_j)_{m, m+j} = sqrt(gamma^j/j!) (1-gamma)^{m/2} sqrt((m+j)!/m!)
    for (int m = 0; m + j < dim; ++m) {
        double log_amp = 0.5 * j * std::log(gamma1) - 0.5 * log_factorial(j) +
                         0.5 * m * std::log1p(-gamma1);
        for (int s = m + 1; s <= m + j; ++s) log_amp += 0.5 * std::log(double(s));
        k(m, m + j) = std::exp(log_amp);
    }
    return k;
}

Mat dephasing_kraus(double gamma2, int j, int dim) {
    require_dim(dim);
    if (gamma2 < 0.0)
        throw std::invalid_argument("dephasing_kraus: gamma2 must be >= 0");
    if (j < 0) throw std::invalid_argument("dephasing_kraus: j must be >= 0");
    Mat k = Mat::Zero(dim, dim);
    for (int n = 0; n < dim; ++n) {
        if (gamma2 == 0.0) {
            k(n, n) = (j == 0) ? 1.0 : 0.0;
            continue;
        }
        if (j > 0 && n == 0) continue;  // n^j = 0
        double log_amp = 0.5 * j * std::log(gamma2) - 0.5 * log_factorial(j) -
                         0.5 * gamma2 * double(n) * double(n);
        if (j > 0) log_amp += j * std::log(double(n));
        k(n, n) = std::exp(log_amp);
    }
    return k;
}

KrausSet full_kraus_set(ErrorFamily family, double gamma, int J, int dim) {
    if (J < 0) throw std::invalid_argument("full_kraus_set: J must be >= 0");
    KrausSet set;
    set.family = family;
    set.gamma = gamma;
    set.order = KrausOrder::full;
    set.ops.reserve(J + 1);
    for (int j = 0; j <= J; ++j) {
        set.ops.push_back(family == ErrorFamily::loss ? loss_kraus(gamma, j, dim)
                                                      : dephasing_kraus(gamma, j, dim));
    }
    return set;
}

KrausSet first_order_set(ErrorFamily family, double gamma, int dim) {
    if (gamma < 0) throw std::invalid_argument("first_order_set: gamma must be >= 0");
    const Mat id = Mat::Identity(dim, dim);
    const Mat n = number_op(dim);
    KrausSet set;
    set.family = family;
    set.gamma = gamma;
    set.order = KrausOrder::first_order;
    if (family == ErrorFamily::loss) {
        set.ops = {id - 0.5 * gamma * n, std::sqrt(gamma) * annihilation(dim)};
        set.validity_warning = gamma > kLossValidityMax;
    } else if (family == ErrorFamily::dephasing) {
        set.ops = {id - 0.5 * gamma * (n * n), std::sqrt(gamma) * n};
        set.validity_warning = gamma > kDephasingValidityMax;
    } else {
        throw std::invalid_argument("first_order_set: loss or dephasing only");
    }
    return set;
}

Mat apply_channel(const KrausSet& kraus, const Mat& rho) {
    require_uniform_dim(kraus);
    if (rho.rows() != kraus.dim() || rho.cols() != kraus.dim())
        throw std::invalid_argument("apply_channel: dimension mismatch");
    Mat out = Mat::Zero(rho.rows(), rho.cols());
    for (const auto& k : kraus.ops) out += k * rho * k.adjoint();
    return out;
}

double tp_residual(const KrausSet& kraus, const Vec& s) {
    require_uniform_dim(kraus);
    if (kraus.dim() != s.size())
        throw std::invalid_argument("tp_residual: dimension mismatch");
    double acc = 0.0;
    for (const auto& k : kraus.ops) acc += (k * s).squaredNorm();
    return acc - 1.0;
}

KrausSet trace_normalized_on(const KrausSet& kraus, const Vec& c0, const Vec& c1) {
    const double total = 2.0 + tp_residual(kraus, c0) + tp_residual(kraus, c1);
    if (total <= 0)
        throw std::runtime_error("trace_normalized_on: degenerate completeness sum");
    const double scale = std::sqrt(2.0 / total);
    KrausSet out = kraus;
    for (auto& k : out.ops) k *= scale;
    return out;
}

double commutation_distance(double gamma1, double gamma2, const Mat& rho,
                            int J, int dim) {
    const KrausSet loss = full_kraus_set(ErrorFamily::loss, gamma1, J, dim);
    const KrausSet deph = full_kraus_set(ErrorFamily::dephasing, gamma2, J, dim);
    const Mat ab = apply_channel(loss, apply_channel(deph, rho));
    const Mat ba = apply_channel(deph, apply_channel(loss, rho));
    return (ab - ba).norm();
}

Mat random_density(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat a(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
    Mat rho = a * a.adjoint();
    rho /= rho.trace().real();
    return rho;
}

}  // namespace bqec
