#include "bqec/sdp.hpp"

#include <cmath>
#include <sstream>

namespace bqec {

namespace {

Mat hermitize(const Mat& m) { return 0.5 * (m + m.adjoint()); }

// Inverse principal square root of a Hermitian PD matrix.
void pd_roots(const Mat& m, Mat& root, Mat& inv_root) {
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(m));
    const auto& w = es.eigenvalues();
    if (w.minCoeff() <= 0)
        throw std::runtime_error("sdp: iterate lost positive definiteness");
    Eigen::VectorXd sq(w.size()), isq(w.size());
    for (int i = 0; i < w.size(); ++i) {
        sq(i) = std::sqrt(w(i));
        isq(i) = 1.0 / sq(i);
    }
    root = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint();
    inv_root = es.eigenvectors() * isq.asDiagonal() * es.eigenvectors().adjoint();
}

// Largest step alpha with P + alpha * D >= 0, for Hermitian PD P.
double max_step(const Mat& p, const Mat& d) {
    Mat root, inv_root;
    pd_roots(p, root, inv_root);
    Eigen::SelfAdjointEigenSolver<Mat> es(hermitize(inv_root * d * inv_root));
    const double lam_min = es.eigenvalues().minCoeff();
    if (lam_min >= -1e-14) return 1e30;  // direction keeps the cone
    return -1.0 / lam_min;
}

double real_inner(const Mat& a, const Mat& b) { return (a.adjoint() * b).trace().real(); }

}  // namespace

SdpSolution solve_sdp(const SdpProblem& problem, double gap_tol, int max_iterations) {
    const int n = int(problem.objective.rows());
    const int m = int(problem.constraints.size());
    if (problem.rhs.size() != m)
        throw std::invalid_argument("sdp: rhs size does not match constraint count");
    if (!is_hermitian(problem.objective))
        throw std::invalid_argument("sdp: objective must be Hermitian");
    for (const auto& a : problem.constraints)
        if (a.rows() != n || a.cols() != n || !is_hermitian(a))
            throw std::invalid_argument("sdp: constraints must be Hermitian of matching size");

    const Mat& C = problem.objective;
    const Eigen::VectorXd& b = problem.rhs;

    Mat X = problem.initial_x.size() > 0
                ? hermitize(problem.initial_x)
                : Mat(Mat::Identity(n, n) * std::max(1.0, b.lpNorm<Eigen::Infinity>()));
    Mat S = Mat::Identity(n, n) * std::max(1.0, C.norm());
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

    const double feas_tol = 1e-10;
    const double tau = 0.98;

    SdpSolution sol;
    for (int iter = 0; iter < max_iterations; ++iter) {
        Eigen::VectorXd r_p(m);
        for (int a = 0; a < m; ++a) r_p(a) = b(a) - real_inner(problem.constraints[size_t(a)], X);
        Mat asum = Mat::Zero(n, n);
        for (int a = 0; a < m; ++a) asum += y(a) * problem.constraints[size_t(a)];
        const Mat R_d = C - S - asum;
        const double mu = real_inner(X, S) / n;

        const double pobj = real_inner(C, X);
        const double dobj = b.dot(y);
        const double gap = std::abs(pobj - dobj);
        sol.x = X;
        sol.y = y;
        sol.primal_objective = pobj;
        sol.dual_objective = dobj;
        sol.duality_gap = gap;
        sol.primal_residual = r_p.norm();
        sol.dual_residual = R_d.norm();
        sol.iterations = iter;
        if (sol.primal_residual <= feas_tol * (1 + b.norm()) &&
            sol.dual_residual <= feas_tol * (1 + C.norm()) && gap <= gap_tol)
            return sol;

        // Nesterov-Todd scaling point W = S^-1/2 (S^1/2 X S^1/2)^1/2 S^-1/2
        Mat s_root, s_inv_root;
        pd_roots(S, s_root, s_inv_root);
        Mat mid_root, mid_inv_root;
        pd_roots(s_root * X * s_root, mid_root, mid_inv_root);
        const Mat W = hermitize(s_inv_root * mid_root * s_inv_root);

        // Schur complement M_ab = Tr(A_a W A_b W)
        std::vector<Mat> waw(static_cast<size_t>(m));
        for (int a = 0; a < m; ++a) waw[size_t(a)] = W * problem.constraints[size_t(a)] * W;
        Eigen::MatrixXd schur(m, m);
        for (int a = 0; a < m; ++a)
            for (int bb = 0; bb <= a; ++bb) {
                const double v = real_inner(problem.constraints[size_t(a)], waw[size_t(bb)]);
                schur(a, bb) = v;
                schur(bb, a) = v;
            }
        Eigen::LDLT<Eigen::MatrixXd> ldlt(schur);
        if (ldlt.info() != Eigen::Success) {
            schur.diagonal().array() += 1e-13 * (1.0 + schur.trace() / m);
            ldlt.compute(schur);
            if (ldlt.info() != Eigen::Success)
                throw std::runtime_error("sdp: singular Schur complement");
        }

        Eigen::SelfAdjointEigenSolver<Mat> es_s(S);
        Mat s_inv = es_s.eigenvectors() *
                    es_s.eigenvalues().cwiseInverse().asDiagonal().toDenseMatrix().cast<Complex>() *
                    es_s.eigenvectors().adjoint();

        auto direction = [&](double sigma, Mat& dx, Mat& ds, Eigen::VectorXd& dy) {
            const Mat r_c = hermitize(sigma * mu * s_inv - X);
            Eigen::VectorXd rhs(m);
            for (int a = 0; a < m; ++a)
                rhs(a) = r_p(a) - real_inner(problem.constraints[size_t(a)], r_c) +
                         real_inner(problem.constraints[size_t(a)], W * R_d * W);
            dy = ldlt.solve(rhs);
            Mat dual_comb = Mat::Zero(n, n);
            for (int a = 0; a < m; ++a) dual_comb += dy(a) * problem.constraints[size_t(a)];
            ds = hermitize(R_d - dual_comb);
            dx = hermitize(r_c - W * ds * W);
        };

        // predictor (affine) to pick the centering weight
        Mat dx_aff, ds_aff;
        Eigen::VectorXd dy_aff;
        direction(0.0, dx_aff, ds_aff, dy_aff);
        const double ap_aff = std::min(1.0, tau * max_step(X, dx_aff));
        const double ad_aff = std::min(1.0, tau * max_step(S, ds_aff));
        const double mu_aff =
            real_inner(X + ap_aff * dx_aff, S + ad_aff * ds_aff) / n;
        double sigma = std::pow(std::max(mu_aff, 0.0) / mu, 3.0);
        sigma = std::min(1.0, std::max(sigma, 1e-8));

        Mat dx, ds;
        Eigen::VectorXd dy;
        direction(sigma, dx, ds, dy);
        const double ap = std::min(1.0, tau * max_step(X, dx));
        const double ad = std::min(1.0, tau * max_step(S, ds));
        X = hermitize(X + ap * dx);
        S = hermitize(S + ad * ds);
        y += ad * dy;
    }

    std::ostringstream msg;
    msg << "sdp: no convergence after " << max_iterations
        << " iterations (gap=" << sol.duality_gap
        << ", primal residual=" << sol.primal_residual
        << ", dual residual=" << sol.dual_residual << ")";
    throw std::runtime_error(msg.str());
}

}  // namespace bqec
