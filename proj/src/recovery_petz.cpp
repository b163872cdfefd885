#include "bqec/recovery_petz.hpp"

#include <cmath>

namespace bqec {

BlockedMatrix petz_m_matrix(const CodePair& code, const KrausSet& kraus) {
    require_uniform_dim(kraus);
    if (kraus.dim() != code.dim())
        throw std::invalid_argument("petz_m_matrix: dimension mismatch");
    const int r = kraus.size();
    const Vec* cw[2] = {&code.zero_logical, &code.one_logical};
    std::vector<Vec> damaged(size_t(2) * r);
    for (int mu = 0; mu < 2; ++mu)
        for (int l = 0; l < r; ++l)
            damaged[size_t(mu * r + l)] = kraus.ops[size_t(l)] * (*cw[mu]);
    BlockedMatrix M(2, r);
    for (int i = 0; i < 2 * r; ++i)
        for (int j = 0; j < 2 * r; ++j)
            M.entries(i, j) = damaged[size_t(i)].dot(damaged[size_t(j)]);
    return M;
}

PetzResult petz_fidelity(const CodePair& code, const KrausSet& kraus) {
    const int r = kraus.size();
    if (r == 0) throw std::invalid_argument("petz_fidelity: empty Kraus set");

    PetzResult result;
    result.M = petz_m_matrix(code, kraus);

    result.m_matrix << overlap(code.zero_logical, code.zero_logical),
        overlap(code.zero_logical, code.one_logical),
        overlap(code.one_logical, code.zero_logical),
        overlap(code.one_logical, code.one_logical);
    const double det = std::abs(result.m_matrix.determinant());
    if (det < 1e-12)
        throw std::runtime_error("petz_fidelity: codeword Gram matrix is singular");

    const double trace_m = result.M.entries.trace().real();
    result.trace_normalization = 0.5 * trace_m;
    Mat Mn = result.M.entries * (2.0 / trace_m);

    const Eigen::Matrix2cd minv = result.m_matrix.inverse();
    Mat lifted = Mat::Zero(2 * r, 2 * r);
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu)
            lifted.block(mu * r, nu * r, r, r) =
                minv(mu, nu) * Mat::Identity(r, r);
    Mat prod = lifted * Mn;
    result.asymmetry_norm = (prod - prod.adjoint()).norm();
    prod = 0.5 * (prod + prod.adjoint());

    const Mat root = hermitian_sqrt(prod);
    BlockedMatrix rooted(2, r);
    rooted.entries = root;
    const Mat traced = partial_trace_outer(rooted);

    double f = 0.25 * traced.squaredNorm();
    if (f < 0.0) f = 0.0;
    if (f > 1.0 + 1e-9)
        throw std::runtime_error("petz_fidelity: fidelity " + std::to_string(f) +
                                 " escaped [0, 1]");
    result.fidelity = std::min(f, 1.0);
    result.bounds = {result.fidelity, 0.5 * (1.0 + result.fidelity)};
    return result;
}

std::vector<Mat> petz_kraus(const CodePair& code, const KrausSet& kraus,
                            double rel_tol) {
    if (kraus.dim() != code.dim())
        throw std::invalid_argument("petz_kraus: dimension mismatch");
    const Mat projector =
        code.zero_logical * code.zero_logical.adjoint() +
        code.one_logical * code.one_logical.adjoint();
    Mat n_of_p = Mat::Zero(code.dim(), code.dim());
    for (const auto& k : kraus.ops) {
        const Vec v0 = k * code.zero_logical;
        const Vec v1 = k * code.one_logical;
        n_of_p += v0 * v0.adjoint() + v1 * v1.adjoint();
    }
    const Mat inv_root = hermitian_pinv_sqrt(n_of_p, rel_tol);
    std::vector<Mat> recovery;
    recovery.reserve(kraus.ops.size());
    for (const auto& k : kraus.ops)
        recovery.push_back(projector * k.adjoint() * inv_root);
    return recovery;
}

}  // namespace bqec
