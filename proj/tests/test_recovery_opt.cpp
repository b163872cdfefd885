#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bqec/recovery_opt.hpp"
#include "bqec/recovery_petz.hpp"
#include "bqec/sweep.hpp"
#include "test_util.hpp"

using namespace bqec;

namespace {

KrausSet identity_set(int dim) {
    KrausSet k;
    k.ops = {Mat::Identity(dim, dim)};
    return k;
}

// qubit phase flip embedded in a 4-level space
KrausSet phase_flip(double p) {
    Mat sz = Mat::Identity(4, 4);
    sz(1, 1) = -1.0;
    sz(3, 3) = -1.0;
    KrausSet k;
    k.ops = {std::sqrt(1 - p) * Mat::Identity(4, 4), std::sqrt(p) * sz};
    return k;
}

}  // namespace

TEST_CASE("error subspaces") {
    const int dim = 60;
    const CodePair code = make_custom_code(fock(0, dim), fock(1, dim));

    const ErrorSubspaces ident = error_subspaces(code, identity_set(dim));
    REQUIRE(ident.bases.size() == 1);
    REQUIRE(ident.bases[0].plus.has_value());
    REQUIRE(ident.bases[0].minus.has_value());
    CHECK((*ident.bases[0].plus - code.zero_logical).norm() < 1e-13);
    CHECK((*ident.bases[0].minus - code.one_logical).norm() < 1e-13);
    CHECK(ident.dropped.empty());

    // duplicate Kraus operator: the second pair is fully dropped
    KrausSet dup;
    dup.ops = {Mat::Identity(dim, dim), Mat::Identity(dim, dim)};
    const ErrorSubspaces dropped = error_subspaces(code, dup);
    CHECK_FALSE(dropped.bases[1].plus.has_value());
    CHECK_FALSE(dropped.bases[1].minus.has_value());
    REQUIRE(dropped.dropped.size() == 2);

    // first-order loss on the squeezed-Fock code: four orthonormal vectors
    const CodePair sf = make_sf_code(120);
    const ErrorSubspaces sub =
        error_subspaces(sf, first_order_set(ErrorFamily::loss, 1e-3, 120));
    std::vector<Vec> all;
    for (const auto& pair : sub.bases) {
        if (pair.plus) all.push_back(*pair.plus);
        if (pair.minus) all.push_back(*pair.minus);
    }
    REQUIRE(all.size() == 4);
    for (size_t i = 0; i < all.size(); ++i)
        for (size_t j = 0; j < all.size(); ++j)
            CHECK(std::abs(all[i].dot(all[j]) - (i == j ? 1.0 : 0.0)) < 1e-10);

    KrausSet zero;
    zero.ops = {Mat::Zero(dim, dim)};
    CHECK_THROWS_AS(error_subspaces(code, zero), std::runtime_error);
}

TEST_CASE("projection-operator basis") {
    const int dim = 60;
    const CodePair code = make_custom_code(fock(0, dim), fock(1, dim));
    const auto b = b_operators(code, error_subspaces(code, identity_set(dim)));
    REQUIRE(b.size() == 4);

    const Mat projector = code.zero_logical * code.zero_logical.adjoint() +
                          code.one_logical * code.one_logical.adjoint();
    CHECK((b[0] - projector).norm() < 1e-13);
    const Mat sigma_z = code.zero_logical * code.zero_logical.adjoint() -
                        code.one_logical * code.one_logical.adjoint();
    CHECK((b[3] - sigma_z).norm() < 1e-13);

    // orthogonality within a block: Tr(B_I^dag B_J) = 2 delta_IJ
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j) {
            const Complex ip = (b[i].adjoint() * b[j]).trace();
            CHECK(std::abs(ip - (i == j ? Complex(2, 0) : Complex(0, 0))) < 1e-12);
        }

    // B2^dag B2 projects onto the error subspace pair
    const CodePair sf = make_sf_code(120);
    const auto subs = error_subspaces(sf, first_order_set(ErrorFamily::loss, 1e-3, 120));
    const auto bsf = b_operators(sf, subs);
    for (size_t j = 0; j < subs.bases.size(); ++j) {
        const Mat pj = *subs.bases[j].plus * subs.bases[j].plus->adjoint() +
                       *subs.bases[j].minus * subs.bases[j].minus->adjoint();
        CHECK((bsf[4 * j + 1].adjoint() * bsf[4 * j + 1] - pj).norm() < 1e-10);
    }
}

TEST_CASE("process matrix") {
    const int dim = 60;
    const CodePair code = make_custom_code(fock(0, dim), fock(1, dim));
    const KrausSet ident = identity_set(dim);
    const auto b = b_operators(code, error_subspaces(code, ident));
    const Mat w = process_matrix(b, ident, code);

    CHECK(is_hermitian(w));
    Eigen::SelfAdjointEigenSolver<Mat> es(w);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
    int rank = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > 1e-10 * es.eigenvalues().maxCoeff()) ++rank;
    CHECK(rank == 1);

    const CodePair sf = make_sf_code(120);
    const KrausSet loss = first_order_set(ErrorFamily::loss, 1e-3, 120);
    const auto bsf = b_operators(sf, error_subspaces(sf, loss));
    const Mat wsf = process_matrix(bsf, loss, sf);
    CHECK(is_hermitian(wsf));
    Eigen::SelfAdjointEigenSolver<Mat> es2(wsf);
    CHECK(es2.eigenvalues().minCoeff() > -1e-10 * es2.eigenvalues().maxCoeff());
}

TEST_CASE("identity channel recovers perfectly") {
    const int dim = 40;
    const CodePair code = make_custom_code(fock(0, dim), fock(1, dim));
    const OptimalRecovery opt = optimal_recovery(code, identity_set(dim));
    CHECK(std::abs(opt.choi.fidelity - 1.0) < 1e-7);
    CHECK(opt.choi.duality_gap <= 1e-7);
    CHECK(opt.choi.tp_residual <= 1e-6);
}

TEST_CASE("phase-flip toy channel matches a brute-force recovery search") {
    // F(U) = (1/4)[(1-p)|Tr U|^2 + p |Tr(U sz)|^2] over unitary recoveries
    const double p = 0.1;
    const CodePair code = make_custom_code(fock(0, 4), fock(1, 4));
    const OptimalRecovery opt = optimal_recovery(code, phase_flip(p));

    double best = 0.0;
    const int steps = 64;
    for (int it = 0; it < steps; ++it) {
        const double t = M_PI * it / steps;
        for (int ax = 0; ax < steps; ++ax) {
            const double th = M_PI * ax / steps;
            for (int ph = 0; ph < steps; ++ph) {
                const double phi = 2 * M_PI * ph / steps;
                // U = cos t I - i sin t (n . sigma) on the code space
                const Complex tr_u = 2.0 * std::cos(t);
                const Complex tr_usz =
                    -2.0 * Complex(0, 1) * std::sin(t) * std::cos(th);
                (void)phi;
                const double f =
                    0.25 * ((1 - p) * std::norm(tr_u) + p * std::norm(tr_usz));
                best = std::max(best, f);
            }
        }
    }
    CHECK(std::abs(opt.choi.fidelity - best) < 1e-4);
    CHECK(std::abs(opt.choi.fidelity - 0.9) < 1e-6);
}

TEST_CASE("Petz sandwich and duality gap on reference instances") {
    const int dim = 120;
    const auto codes = standard_codes(dim);
    for (ErrorFamily fam : {ErrorFamily::loss, ErrorFamily::dephasing}) {
        for (double g : {1e-5, 1e-4}) {
            const KrausSet raw = first_order_set(fam, g, dim);
            for (const auto& [label, code] : codes) {
                const double f_petz = petz_fidelity(code, raw).fidelity;
                const OptimalRecovery opt = optimal_recovery(code, raw);
                CHECK(opt.choi.duality_gap <= 1e-7);
                CHECK(opt.choi.fidelity >= f_petz - 1e-6);
                CHECK(opt.choi.fidelity <= 0.5 * (1 + f_petz) + 1e-6);
            }
        }
    }
}

TEST_CASE("Kraus extraction") {
    const int dim = 40;
    const CodePair code = make_custom_code(fock(0, dim), fock(1, dim));
    const auto b = b_operators(code, error_subspaces(code, identity_set(dim)));

    // rank-1 Choi matrix gives a single operator
    RecoveryChoi rank1;
    rank1.x = Mat::Zero(4, 4);
    rank1.x(0, 0) = 1.0;
    const auto single = extract_recovery_kraus(rank1, b);
    REQUIRE(single.size() == 1);
    CHECK((single[0] - b[0]).norm() < 1e-13);

    // eigendecomposition reconstructs X
    const CodePair sf = make_sf_code(120);
    const KrausSet loss = first_order_set(ErrorFamily::loss, 1e-4, 120);
    const OptimalRecovery opt = optimal_recovery(sf, loss);
    const auto recovery = extract_recovery_kraus(opt.choi, opt.b_ops);

    // sum_r R_r^dag R_r equals the span projector
    Mat sum = Mat::Zero(120, 120);
    for (const auto& r : recovery) sum += r.adjoint() * r;
    Mat p_span = Mat::Zero(120, 120);
    {
        Mat gram = Mat::Zero(120, 120);
        for (const auto& bo : opt.b_ops) gram += bo.adjoint() * bo;
        Eigen::SelfAdjointEigenSolver<Mat> es(gram);
        for (int i = 0; i < 120; ++i)
            if (es.eigenvalues()(i) > 1e-8 * es.eigenvalues().maxCoeff())
                p_span += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
    }
    CHECK((sum - p_span).norm() < 1e-6);

    // recomputed channel fidelity matches the SDP objective
    const double f = channel_fidelity(recovery, opt.normalized, sf);
    CHECK(std::abs(f - opt.choi.fidelity) < 1e-6);
}

TEST_CASE("channel fidelity") {
    const int dim = 30;
    const CodePair code = make_custom_code(fock(0, dim), fock(1, dim));
    const Mat projector = code.zero_logical * code.zero_logical.adjoint() +
                          code.one_logical * code.one_logical.adjoint();
    CHECK(std::abs(channel_fidelity({projector}, identity_set(dim), code) - 1.0) < 1e-13);
}

TEST_CASE("channel fidelity agrees with the Choi-matrix entanglement form") {
    const int dim = 24;
    auto gen = test::rng(91);
    const auto gs = gram_schmidt({test::random_vector(dim, gen), test::random_vector(dim, gen)});
    const CodePair code = make_custom_code(gs.vectors[0], gs.vectors[1]);

    KrausSet channel;
    channel.ops = {std::sqrt(0.85) * Mat::Identity(dim, dim),
                   std::sqrt(0.15) * test::random_matrix(dim, gen, 0.3)};
    const auto recovery = petz_kraus(code, channel);

    // logical-frame Choi matrix of recovery . channel:
    // X[(mu,rho),(nu,sigma)] = <rho_L| Q(|mu_L><nu_L|) |sigma_L>
    const Vec* cw[2] = {&code.zero_logical, &code.one_logical};
    Complex fe = 0.0;
    for (int mu = 0; mu < 2; ++mu)
        for (int nu = 0; nu < 2; ++nu) {
            Mat q = Mat::Zero(dim, dim);
            for (const auto& r : recovery)
                for (const auto& k : channel.ops) {
                    const Vec in = k * (*cw[mu]);
                    const Vec out = r * in;
                    const Vec in2 = k * (*cw[nu]);
                    const Vec out2 = r * in2;
                    q += out * out2.adjoint();
                }
            fe += cw[mu]->dot(q * (*cw[nu]));  // diagonal block [mu mu],[nu nu]
        }
    const double direct = channel_fidelity(recovery, channel, code);
    CHECK(std::abs(0.25 * fe.real() - direct) < 1e-8);
}

TEST_CASE("optimal fidelity is monotone and exact at zero rate") {
    const int dim = 120;
    const CodePair sf = make_sf_code(dim);
    double prev = 2.0;
    for (double g : {0.0, 1e-6, 1e-5, 1e-4}) {
        const double f =
            optimal_recovery(sf, first_order_set(ErrorFamily::dephasing, g, dim)).choi.fidelity;
        if (g == 0.0) CHECK(std::abs(f - 1.0) < 1e-7);
        CHECK(f <= prev + 1e-7);
        prev = f;
    }
}

TEST_CASE("solver failure reports residuals") {
    SdpProblem tiny;
    tiny.objective = -Mat::Identity(3, 3);
    tiny.constraints = {Mat::Identity(3, 3)};
    tiny.rhs = Eigen::VectorXd::Ones(1);
    CHECK_THROWS_WITH_AS(solve_sdp(tiny, 1e-12, 1), doctest::Contains("no convergence"),
                         std::runtime_error);
    const SdpSolution sol = solve_sdp(tiny, 1e-9);
    CHECK(std::abs(sol.primal_objective + 1.0) < 1e-8);  // min Tr(-X) s.t. Tr X = 1
}
