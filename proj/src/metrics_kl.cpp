#include "bqec/metrics_kl.hpp"

namespace bqec {

std::vector<Mat> elementary_error_set(int max_loss, int max_deph, int dim) {
    if (max_loss < 0 || max_deph < 0)
        throw std::invalid_argument("elementary_error_set: powers must be >= 0");
    std::vector<Mat> errors;
    errors.push_back(Mat::Identity(dim, dim));
    const Mat a = annihilation(dim);
    Mat ap = Mat::Identity(dim, dim);
    for (int p = 1; p <= max_loss; ++p) {
        ap = ap * a;
        errors.push_back(ap);
    }
    const Mat n = number_op(dim);
    Mat np = Mat::Identity(dim, dim);
    for (int p = 1; p <= max_deph; ++p) {
        np = np * n;
        errors.push_back(np);
    }
    return errors;
}

KlTensor kl_tensor(const CodePair& code, const std::vector<Mat>& errors) {
    const int ne = int(errors.size());
    for (const auto& e : errors)
        if (e.rows() != code.dim() || e.cols() != code.dim())
            throw std::invalid_argument("kl_tensor: dimension mismatch");
    KlTensor t;
    t.num_errors = ne;
    t.f.assign(size_t(4) * ne * ne, Complex(0, 0));
    const Vec* cw[2] = {&code.zero_logical, &code.one_logical};
    for (int a = 0; a < ne; ++a) {
        for (int b = 0; b < ne; ++b) {
            const Mat prod = errors[size_t(a)].adjoint() * errors[size_t(b)];
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    t.at(i, j, a, b) = cw[i]->dot(prod * (*cw[j]));
        }
    }
    return t;
}

namespace {

double kl_cost_from_tensor(const KlTensor& t) {
    double cost = 0.0;
    for (int a = 0; a < t.num_errors; ++a)
        for (int b = 0; b < t.num_errors; ++b)
            cost += std::norm(t.at(0, 0, a, b) - t.at(1, 1, a, b)) +
                    std::norm(t.at(0, 1, a, b));
    return cost;
}

}  // namespace

double kl_cost_elementary(const CodePair& code, const std::vector<Mat>& errors) {
    return kl_cost_from_tensor(kl_tensor(code, errors));
}

double kl_cost_kraus(const CodePair& code, const KrausSet& kraus) {
    require_uniform_dim(kraus);
    if (kraus.dim() != code.dim())
        throw std::invalid_argument("kl_cost_kraus: dimension mismatch");
    double cost = 0.0;
    const Vec& c0 = code.zero_logical;
    const Vec& c1 = code.one_logical;
    for (const auto& ki : kraus.ops) {
        for (const auto& kj : kraus.ops) {
            const Mat prod = ki.adjoint() * kj;
            const Complex f00 = c0.dot(prod * c0);
            const Complex f11 = c1.dot(prod * c1);
            const Complex f01 = c0.dot(prod * c1);
            cost += std::norm(f00 - f11) + std::norm(f01);
        }
    }
    return cost;
}

}  // namespace bqec
