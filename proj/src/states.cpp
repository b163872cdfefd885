#include "bqec/states.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

namespace bqec {

namespace {

// S(r) = exp(r G) and D(alpha real) = exp(alpha G') with fixed generators;
// one Hermitian eigendecomposition per dimension covers every parameter
// value.  exp(r G) = V exp(-i r diag) V^dag with i G Hermitian.
struct GeneratorCache {
    Mat vectors;
    Eigen::VectorXd frequencies;  // eigenvalues of i G

    Mat exponential(double scale) const {
        Vec phases(frequencies.size());
        for (int k = 0; k < frequencies.size(); ++k)
            phases(k) = std::exp(Complex(0, -scale * frequencies(k)));
        return vectors * phases.asDiagonal() * vectors.adjoint();
    }
};

const GeneratorCache& cached_generator(int dim, bool squeeze_kind) {
    static std::mutex mutex;
    static std::unordered_map<long, GeneratorCache> cache;
    const long key = 2L * dim + (squeeze_kind ? 1 : 0);
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    const Mat a = annihilation(dim);
    const Mat gen = squeeze_kind ? Mat(0.5 * (a * a - (a * a).adjoint()))
                                 : Mat(a.adjoint() - a);
    Eigen::SelfAdjointEigenSolver<Mat> es(Complex(0, 1) * gen);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("generator eigendecomposition failed");
    GeneratorCache entry{es.eigenvectors(), es.eigenvalues()};
    return cache.emplace(key, std::move(entry)).first->second;
}

Vec checked_normalized(Vec v, const char* what) {
    const double n = v.norm();
    if (n < 1e-14) throw std::runtime_error(std::string(what) + ": zero-norm state");
    v /= n;
    const double tail = tail_mass(v);
    if (tail > kTailConstructionTol)
        throw std::runtime_error(std::string(what) + ": truncation tail mass " +
                                 std::to_string(tail) + " exceeds " +
                                 std::to_string(kTailConstructionTol) +
                                 "; increase the Fock cutoff");
    return v;
}

}  // namespace

double tail_mass(const Vec& state, int window) {
    const int dim = int(state.size());
    const int start = std::max(0, dim - window);
    double mass = 0.0;
    for (int n = start; n < dim; ++n) mass += std::norm(state(n));
    return mass;
}

Vec fock(int n, int dim) {
    require_dim(dim);
    if (n < 0 || n >= dim)
        throw std::invalid_argument("fock: level " + std::to_string(n) +
                                    " outside truncated space");
    Vec v = Vec::Zero(dim);
    v(n) = 1.0;
    return v;
}

Mat squeeze_operator(double r, int dim) {
    require_dim(dim);
    if (std::abs(r) > 3.0)
        throw std::invalid_argument("squeeze_operator: |r| > 3 is unsafe at the "
                                    "supported cutoffs");
    return cached_generator(dim, true).exponential(r);
}

Vec squeezed_fock(double r, int n, int dim) {
    require_dim(dim);
    if (n < 0 || n >= dim / 4)
        throw std::invalid_argument("squeezed_fock: n must satisfy 0 <= n < dim/4");
    Vec v = squeeze_operator(r, dim) * fock(n, dim);
    return checked_normalized(std::move(v), "squeezed_fock");
}

Mat displacement(Complex alpha, int dim) {
    require_dim(dim);
    if (std::abs(alpha) > 4.0)
        throw std::invalid_argument("displacement: |alpha| > 4 is unsafe at the "
                                    "supported cutoffs");
    if (alpha.imag() == 0.0) return cached_generator(dim, false).exponential(alpha.real());
    const Mat a = annihilation(dim);
    const Mat gen = alpha * a.adjoint() - std::conj(alpha) * a;
    return matrix_exponential(gen);
}

Vec squeezed_cat(const SscParams& p, int dim) {
    require_dim(dim);
    if (p.alpha <= 0.0)
        throw std::invalid_argument("squeezed_cat: alpha must be positive");
    const Vec sv = squeeze_operator(p.r, dim) * fock(0, dim);
    const Vec plus = displacement(p.alpha, dim) * sv;
    const Vec minus = displacement(-p.alpha, dim) * sv;
    Vec v = (p.parity == Parity::even) ? Vec(plus + minus) : Vec(plus - minus);
    return checked_normalized(std::move(v), "squeezed_cat");
}

double mean_photon(const Vec& state) {
    double acc = 0.0;
    for (int n = 0; n < state.size(); ++n) acc += double(n) * std::norm(state(n));
    return acc;
}

Complex overlap(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("overlap: dimension mismatch");
    return a.dot(b);
}

double sf_overlap_analytic(int n, double r) {
    switch (n) {
        case 0:
            return std::sqrt(2.0) * std::exp(r) / std::sqrt(1.0 + std::exp(4.0 * r));
        case 1:
            return 1.0 / std::pow(std::cosh(2.0 * r), 1.5);
        case 2:
            return -std::sqrt(2.0) * std::exp(5.0 * r) * (std::cosh(4.0 * r) - 5.0) /
                   std::pow(1.0 + std::exp(4.0 * r), 2.5);
        default:
            throw std::invalid_argument("sf_overlap_analytic: closed forms exist for n in {0,1,2}");
    }
}

double sf_wavefunction(double x, double r, int n) {
    if (n < 0) throw std::invalid_argument("sf_wavefunction: n must be >= 0");
    const double xi = std::exp(r) * x;
    // Hermite H_n by three-term recurrence
    double hprev = 1.0, h = 2.0 * xi;
    if (n == 0) h = hprev;
    for (int k = 2; k <= n; ++k) {
        const double hnext = 2.0 * xi * h - 2.0 * (k - 1) * hprev;
        hprev = h;
        h = hnext;
    }
    double log_norm = 0.0;  // log sqrt(2^n n! sqrt(pi) e^{-r})
    for (int k = 1; k <= n; ++k) log_norm += std::log(2.0 * k);
    log_norm = 0.5 * (log_norm + 0.5 * std::log(M_PI) - r);
    return std::exp(-0.5 * xi * xi - log_norm) * h;
}

namespace {

template <typename F>
double bisect(F f, double lo, double hi, double xtol) {
    double flo = f(lo);
    for (int it = 0; it < 200 && hi - lo > xtol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        if ((flo <= 0) == (fmid <= 0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double solve_sf_codeword_r() {
    auto f = [](double r) { return sf_overlap_analytic(2, r); };
    return bisect(f, 1e-6, 1.0 - 1e-6, 1e-12);
}

double solve_ssc_squeezing(double alpha, double target_n, Orientation branch,
                           int dim) {
    if (alpha <= 0.0) throw std::invalid_argument("solve_ssc_squeezing: alpha must be positive");
    const double sign = (branch == Orientation::parallel) ? -1.0 : 1.0;
    auto f = [&](double mag) {
        SscParams p{alpha, sign * mag, Parity::even, branch};
        return mean_photon(squeezed_cat(p, dim)) - target_n;
    };
    // scan a 0.05 grid for a bracket, then bisect
    const double lo = 0.05, hi = 1.6;
    double prev = f(lo);
    for (double mag = lo + 0.05; mag <= hi + 1e-12; mag += 0.05) {
        const double cur = f(mag);
        if ((prev <= 0) != (cur <= 0))
            return sign * bisect(f, mag - 0.05, mag, 1e-10);
        prev = cur;
    }
    throw std::runtime_error("solve_ssc_squeezing: no sign change in bracket scan; "
                             "target mean photon unreachable on this branch");
}

namespace {

CodePair finish_code(CodePair code, double ortho_tol) {
    const double ov = std::abs(overlap(code.zero_logical, code.one_logical));
    if (ov > ortho_tol)
        throw std::runtime_error("code construction: codeword overlap " +
                                 std::to_string(ov) + " violates orthogonality");
    return code;
}

}  // namespace

CodePair make_sf_code(int dim) {
    const double rstar = solve_sf_codeword_r();
    CodePair code;
    code.zero_logical = squeezed_fock(rstar, 2, dim);
    code.one_logical = squeezed_fock(-rstar, 2, dim);
    code.family = CodeFamily::sf;
    code.params = {{"r", rstar}, {"n", 2.0}};
    return finish_code(std::move(code), 1e-8);
}

CodePair make_ssc_code(double alpha, double r, int dim) {
    CodePair code;
    const Orientation orient =
        (r < 0) ? Orientation::parallel : Orientation::perpendicular;
    code.zero_logical = squeezed_cat({alpha, r, Parity::even, orient}, dim);
    code.one_logical = squeezed_cat({alpha, r, Parity::odd, orient}, dim);
    code.family = (r < 0) ? CodeFamily::ssc_parallel : CodeFamily::ssc_perp;
    code.params = {{"alpha", alpha}, {"r", r}};
    return finish_code(std::move(code), 1e-8);
}

CodePair make_custom_code(const Vec& zero, const Vec& one) {
    if (zero.size() != one.size())
        throw std::invalid_argument("make_custom_code: dimension mismatch");
    CodePair code;
    code.zero_logical = zero / zero.norm();
    code.one_logical = one / one.norm();
    code.family = CodeFamily::custom;
    return finish_code(std::move(code), 1e-8);
}

}  // namespace bqec
