#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bqec/hilbert.hpp"
#include "test_util.hpp"

using namespace bqec;

TEST_CASE("annihilation operator entries") {
    const Mat a2 = annihilation(2);
    CHECK(a2(0, 1) == Complex(1, 0));
    CHECK(a2(0, 0) == Complex(0, 0));
    CHECK(a2(1, 0) == Complex(0, 0));
    CHECK(a2(1, 1) == Complex(0, 0));

    const Mat a3 = annihilation(3);
    CHECK(std::abs(a3(1, 2) - std::sqrt(2.0)) < 1e-15);

    CHECK_THROWS_AS(annihilation(1), std::invalid_argument);
}

TEST_CASE("truncated commutator [a, a^dag]") {
    const int dim = 5;
    const Mat a = annihilation(dim);
    const Mat comm = a * a.adjoint() - a.adjoint() * a;
    for (int i = 0; i < dim - 1; ++i) CHECK(std::abs(comm(i, i) - 1.0) < 1e-14);
    CHECK(std::abs(comm(dim - 1, dim - 1) + double(dim - 1)) < 1e-14);
    CHECK((comm - comm.diagonal().asDiagonal().toDenseMatrix()).norm() < 1e-14);
}

TEST_CASE("number operator") {
    const Mat n = number_op(3);
    CHECK(n(0, 0) == Complex(0, 0));
    CHECK(n(1, 1) == Complex(1, 0));
    CHECK(n(2, 2) == Complex(2, 0));

    for (int dim : {2, 5, 17}) {
        const Mat a = annihilation(dim);
        CHECK((number_op(dim) - a.adjoint() * a).norm() < 1e-13);
        CHECK(std::abs(number_op(dim).trace().real() - dim * (dim - 1) / 2.0) < 1e-12);
    }
}

TEST_CASE("matrix exponential basics") {
    CHECK((matrix_exponential(Mat::Zero(4, 4)) - Mat::Identity(4, 4)).norm() < 1e-14);

    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    const Mat ed = matrix_exponential(d);
    CHECK(std::abs(ed(0, 0) - std::exp(1.0)) < 1e-13);
    CHECK(std::abs(ed(1, 1) - std::exp(2.0)) < 1e-12);
    CHECK(std::abs(ed(0, 1)) < 1e-14);
}

TEST_CASE("matrix exponential inverse property") {
    auto gen = test::rng(7);
    for (int trial = 0; trial < 6; ++trial) {
        const int dim = 4 + 5 * trial;
        Mat m = test::random_matrix(dim, gen);
        m *= 5.0 / std::max(1.0, m.norm());  // ||M|| <= 5
        const Mat prod = matrix_exponential(m) * matrix_exponential(Mat(-m));
        CHECK((prod - Mat::Identity(dim, dim)).norm() < 1e-10);
    }
}

TEST_CASE("matrix exponential of anti-Hermitian input is unitary") {
    auto gen = test::rng(11);
    for (int dim : {6, 40, 120}) {
        const Mat h = test::random_hermitian(dim, gen);
        const Mat u = matrix_exponential(Complex(0, 1) * h);
        CHECK((u.adjoint() * u - Mat::Identity(dim, dim)).norm() < 1e-10);
    }
}

TEST_CASE("hermitian_pinv_sqrt") {
    CHECK((hermitian_pinv_sqrt(Mat::Identity(3, 3)) - Mat::Identity(3, 3)).norm() < 1e-13);

    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 4.0;
    const Mat r = hermitian_pinv_sqrt(d);
    CHECK(std::abs(r(0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(r(1, 1)) < 1e-14);

    auto gen = test::rng(23);
    for (int trial = 0; trial < 5; ++trial) {
        const Mat m = test::random_psd(8, gen);
        const Mat p = hermitian_pinv_sqrt(m);
        CHECK((m * p * p * m - m).norm() < 1e-8 * std::max(1.0, m.norm()));
    }

    Mat neg = Mat::Identity(2, 2);
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(hermitian_pinv_sqrt(neg), std::runtime_error);
    CHECK_THROWS_AS(hermitian_pinv_sqrt(annihilation(3)), std::invalid_argument);
}

TEST_CASE("hermitian_sqrt") {
    CHECK((hermitian_sqrt(Mat::Identity(3, 3)) - Mat::Identity(3, 3)).norm() < 1e-13);

    Mat d = Mat::Zero(2, 2);
    d(0, 0) = 9.0;
    d(1, 1) = 1.0;
    const Mat r = hermitian_sqrt(d);
    CHECK(std::abs(r(0, 0) - 3.0) < 1e-14);
    CHECK(std::abs(r(1, 1) - 1.0) < 1e-14);

    auto gen = test::rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        Mat m = test::random_psd(10, gen, 3.0);  // lambda_max up to ~1e3
        const Mat s = hermitian_sqrt(m);
        CHECK((s * s - m).norm() < 1e-9 * std::max(1.0, m.norm()));
    }
}

TEST_CASE("partial trace over the outer index") {
    auto gen = test::rng(41);

    // A = I(2) (x) B -> 2 B
    const Mat b = test::random_matrix(3, gen);
    BlockedMatrix a(2, 3);
    a.entries.block(0, 0, 3, 3) = b;
    a.entries.block(3, 3, 3, 3) = b;
    CHECK((partial_trace_outer(a) - 2.0 * b).norm() < 1e-14);

    BlockedMatrix single(1, 4);
    single.entries = test::random_matrix(4, gen);
    CHECK((partial_trace_outer(single) - single.entries).norm() < 1e-15);

    BlockedMatrix big(3, 5);
    big.entries = test::random_matrix(15, gen);
    CHECK(std::abs(partial_trace_outer(big).trace() - big.entries.trace()) < 1e-12);

    BlockedMatrix bad(2, 3);
    bad.entries = Mat::Zero(5, 5);
    CHECK_THROWS_AS(partial_trace_outer(bad), std::invalid_argument);
}

TEST_CASE("gram_schmidt basics") {
    Vec e0 = Vec::Zero(3), e1 = Vec::Zero(3);
    e0(0) = 1;
    e1(1) = 1;

    const auto res = gram_schmidt({e0, Vec(e0 + e1)});
    REQUIRE(res.vectors.size() == 2);
    CHECK(res.dropped.empty());
    CHECK((res.vectors[0] - e0).norm() < 1e-14);
    CHECK((res.vectors[1] - e1).norm() < 1e-12);

    const auto dup = gram_schmidt({e0, e0});
    REQUIRE(dup.vectors.size() == 1);
    REQUIRE(dup.dropped.size() == 1);
    CHECK(dup.dropped[0] == 1);
}

TEST_CASE("gram_schmidt orthonormality on random vectors") {
    auto gen = test::rng(53);
    std::vector<Vec> vs;
    for (int i = 0; i < 10; ++i) vs.push_back(test::random_vector(50, gen));
    const auto res = gram_schmidt(vs);
    REQUIRE(res.vectors.size() == 10);
    for (size_t i = 0; i < res.vectors.size(); ++i)
        for (size_t j = 0; j < res.vectors.size(); ++j) {
            const Complex ip = res.vectors[i].dot(res.vectors[j]);
            const double expected = (i == j) ? 1.0 : 0.0;
            CHECK(std::abs(ip - expected) < 1e-12);
        }
}
