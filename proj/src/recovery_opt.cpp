#include "bqec/recovery_opt.hpp"

#include <cmath>

namespace bqec {

ErrorSubspaces error_subspaces(const CodePair& code, const KrausSet& kraus,
                               double drop_tol) {
    require_uniform_dim(kraus);
    if (kraus.dim() != code.dim())
        throw std::invalid_argument("error_subspaces: dimension mismatch");
    std::vector<Vec> damaged;
    damaged.reserve(size_t(2) * kraus.size());
    for (const auto& k : kraus.ops) {
        damaged.push_back(k * code.zero_logical);
        damaged.push_back(k * code.one_logical);
    }
    const GramSchmidtResult gs = gram_schmidt(damaged, drop_tol);
    if (gs.vectors.empty())
        throw std::runtime_error("error_subspaces: every damaged codeword was dropped; "
                                 "degenerate channel");

    ErrorSubspaces subs;
    subs.bases.resize(size_t(kraus.size()));
    size_t drop_cursor = 0;
    size_t keep_cursor = 0;
    for (int idx = 0; idx < 2 * kraus.size(); ++idx) {
        const int j = idx / 2, branch = idx % 2;
        const bool was_dropped = drop_cursor < gs.dropped.size() &&
                                 gs.dropped[drop_cursor] == idx;
        if (was_dropped) {
            ++drop_cursor;
            subs.dropped.emplace_back(j, branch);
        } else {
            auto& pair = subs.bases[size_t(j)];
            (branch == 0 ? pair.plus : pair.minus) = gs.vectors[keep_cursor++];
        }
    }
    return subs;
}

std::vector<Mat> b_operators(const CodePair& code, const ErrorSubspaces& subs) {
    const Vec& c0 = code.zero_logical;
    const Vec& c1 = code.one_logical;
    const Complex I(0, 1);
    std::vector<Mat> ops;
    for (const auto& pair : subs.bases) {
        if (pair.plus && pair.minus) {
            const Mat zp = c0 * pair.plus->adjoint();
            const Mat zm = c0 * pair.minus->adjoint();
            const Mat op = c1 * pair.plus->adjoint();
            const Mat om = c1 * pair.minus->adjoint();
            ops.push_back(zp + om);
            ops.push_back(zm + op);
            ops.push_back(I * zm - I * op);
            ops.push_back(zp - om);
        } else if (pair.plus || pair.minus) {
            const Vec& psi = pair.plus ? *pair.plus : *pair.minus;
            ops.push_back(c0 * psi.adjoint());
            ops.push_back(c1 * psi.adjoint());
        }
    }
    if (ops.empty())
        throw std::runtime_error("b_operators: no surviving error subspaces");
    return ops;
}

Mat process_matrix(const std::vector<Mat>& b_ops, const KrausSet& kraus,
                   const CodePair& code) {
    if (kraus.dim() != code.dim())
        throw std::invalid_argument("process_matrix: dimension mismatch");
    const int nb = int(b_ops.size());
    Mat w = Mat::Zero(nb, nb);
    for (const auto& k : kraus.ops) {
        Vec traces(nb);
        for (int i = 0; i < nb; ++i) traces(i) = (b_ops[size_t(i)] * k).trace();
        w += traces * traces.adjoint();
    }
    return w;
}

namespace {

// Orthonormal basis of the joint error-subspace span, recovered from
// sum_I B_I^dag B_I (eigenvalues 4 for full pairs, 2 for half pairs).
std::vector<Vec> span_basis(const std::vector<Mat>& b_ops) {
    const int dim = int(b_ops.front().rows());
    Mat gram = Mat::Zero(dim, dim);
    for (const auto& b : b_ops) gram += b.adjoint() * b;
    Eigen::SelfAdjointEigenSolver<Mat> es(gram);
    const double lam_max = es.eigenvalues().maxCoeff();
    std::vector<Vec> basis;
    for (int i = 0; i < dim; ++i)
        if (es.eigenvalues()(i) > 1e-8 * lam_max)
            basis.push_back(es.eigenvectors().col(i));
    return basis;
}

}  // namespace

RecoveryChoi solve_recovery_sdp(const Mat& w, const std::vector<Mat>& b_ops,
                                double tol) {
    const int nb = int(b_ops.size());
    if (w.rows() != nb || w.cols() != nb)
        throw std::invalid_argument("solve_recovery_sdp: W size does not match B basis");
    if (!is_hermitian(w))
        throw std::invalid_argument("solve_recovery_sdp: W must be Hermitian");

    const std::vector<Vec> basis = span_basis(b_ops);
    const int ns = int(basis.size());

    // G^{(kl)}_{IJ} = <phi_k| B_I^dag B_J |phi_l>
    std::vector<std::vector<Vec>> b_phi(static_cast<size_t>(nb),
                                        std::vector<Vec>(static_cast<size_t>(ns)));
    for (int i = 0; i < nb; ++i)
        for (int k = 0; k < ns; ++k) b_phi[size_t(i)][size_t(k)] = b_ops[size_t(i)] * basis[size_t(k)];

    // fidelity is the elementwise sum (1/4) sum_IJ X_IJ W_IJ = (1/4) Tr(X conj(W))
    SdpProblem problem;
    problem.objective = -0.25 * w.conjugate();
    for (int k = 0; k < ns; ++k) {
        for (int l = k; l < ns; ++l) {
            Mat g(nb, nb);
            for (int i = 0; i < nb; ++i)
                for (int j = 0; j < nb; ++j)
                    g(i, j) = b_phi[size_t(i)][size_t(k)].dot(b_phi[size_t(j)][size_t(l)]);
            const Mat gt = g.transpose();
            if (k == l) {
                problem.constraints.push_back(0.5 * (gt + gt.adjoint()));
                continue;
            }
            problem.constraints.push_back(0.5 * (gt + gt.adjoint()));
            problem.constraints.push_back(Complex(0, -0.5) * (gt - gt.adjoint()));
        }
    }
    const int m = int(problem.constraints.size());
    problem.rhs = Eigen::VectorXd::Zero(m);
    {
        int idx = 0;
        for (int k = 0; k < ns; ++k)
            for (int l = k; l < ns; ++l) {
                if (k == l) problem.rhs(idx) = 1.0;
                idx += (k == l) ? 1 : 2;
            }
    }
    // Feasible interior start: weight 1/4 on full-pair operators (they sum to
    // 4 P_j), 1/2 on half-pair operators (they sum to 2 |psi><psi|).
    Eigen::VectorXd diag(nb);
    for (int i = 0; i < nb; ++i)
        diag(i) = (std::abs(b_ops[size_t(i)].squaredNorm() - 2.0) < 0.5) ? 0.25 : 0.5;
    problem.initial_x = diag.cast<Complex>().asDiagonal();

    const double gap_tol = std::min(tol * 1e-2, 1e-9);
    const SdpSolution sol = solve_sdp(problem, gap_tol);

    RecoveryChoi choi;
    choi.x = sol.x;
    choi.fidelity = 0.25 * (sol.x.array() * w.array()).sum().real();
    choi.duality_gap = sol.duality_gap;
    choi.iterations = sol.iterations;

    Mat tp = Mat::Zero(b_ops.front().rows(), b_ops.front().cols());
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            tp += sol.x(i, j) * b_ops[size_t(i)].adjoint() * b_ops[size_t(j)];
    Mat p_span = Mat::Zero(tp.rows(), tp.cols());
    for (const auto& phi : basis) p_span += phi * phi.adjoint();
    choi.tp_residual = (tp - p_span).norm();
    if (choi.tp_residual > 1e-6)
        throw std::runtime_error("solve_recovery_sdp: trace-preservation residual " +
                                 std::to_string(choi.tp_residual) + " above 1e-6");
    return choi;
}

std::vector<Mat> extract_recovery_kraus(const RecoveryChoi& choi,
                                        const std::vector<Mat>& b_ops) {
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (choi.x + choi.x.adjoint()));
    const double lam_max = std::max(es.eigenvalues().maxCoeff(), 0.0);
    std::vector<Mat> recovery;
    for (int r = 0; r < es.eigenvalues().size(); ++r) {
        const double lam = es.eigenvalues()(r);
        if (lam <= 1e-10 * lam_max) continue;
        Mat op = Mat::Zero(b_ops.front().rows(), b_ops.front().cols());
        for (size_t i = 0; i < b_ops.size(); ++i)
            op += es.eigenvectors()(int(i), r) * b_ops[i];
        recovery.push_back(std::sqrt(lam) * op);
    }
    return recovery;
}

double channel_fidelity(const std::vector<Mat>& recovery, const KrausSet& kraus,
                        const CodePair& code) {
    Mat enc(code.dim(), 2);
    enc.col(0) = code.zero_logical;
    enc.col(1) = code.one_logical;
    double f = 0.0;
    for (const auto& r : recovery)
        for (const auto& k : kraus.ops)
            f += std::norm((enc.adjoint() * r * k * enc).trace());
    return 0.25 * f;
}

OptimalRecovery optimal_recovery(const CodePair& code, const KrausSet& kraus,
                                 double tol) {
    OptimalRecovery out;
    out.normalized = trace_normalized_on(kraus, code.zero_logical, code.one_logical);
    const ErrorSubspaces subs = error_subspaces(code, out.normalized);
    out.b_ops = b_operators(code, subs);
    const Mat w = process_matrix(out.b_ops, out.normalized, code);
    out.choi = solve_recovery_sdp(w, out.b_ops, tol);
    return out;
}

}  // namespace bqec
