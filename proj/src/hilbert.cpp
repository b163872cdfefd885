#include "bqec/hilbert.hpp"

#include <cmath>

namespace bqec {

Mat annihilation(int dim) {
    require_dim(dim);
    Mat a = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

Mat number_op(int dim) {
    require_dim(dim);
    Mat n = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) n(k, k) = double(k);
    return n;
}

namespace {

bool is_anti_hermitian(const Mat& m, double tol = 1e-12) {
    return (m + m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

// Pade [13/13] approximant with scaling and squaring (Higham's fixed-order
// variant; adequate for the dense, moderately sized operators used here).
Mat expm_pade(const Mat& m) {
    static const double b[] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const int n = int(m.rows());
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
    int squarings = 0;
    const double theta13 = 5.371920351148152;
    if (norm > theta13) {
        squarings = int(std::ceil(std::log2(norm / theta13)));
        if (squarings < 0) squarings = 0;
    }
    const Mat a = m / std::pow(2.0, squarings);
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a4 * a2;
    const Mat id = Mat::Identity(n, n);
    Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) +
                 b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * id);
    Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) +
            b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
    Eigen::PartialPivLU<Mat> lu(v - u);
    Mat r = lu.solve(v + u);
    if (!r.allFinite())
        throw std::runtime_error("matrix_exponential: Pade solve produced non-finite entries");
    for (int s = 0; s < squarings; ++s) r = r * r;
    return r;
}

}  // namespace

Mat matrix_exponential(const Mat& m) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("matrix_exponential: square matrix required");
    if (!m.allFinite())
        throw std::invalid_argument("matrix_exponential: non-finite input");
    if (is_anti_hermitian(m)) {
        // exp(m) = V exp(-i diag) V^dag with H = i m Hermitian
        Eigen::SelfAdjointEigenSolver<Mat> es(Complex(0, 1) * m);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("matrix_exponential: eigendecomposition failed");
        Vec phases(m.rows());
        for (int k = 0; k < m.rows(); ++k)
            phases(k) = std::exp(Complex(0, -es.eigenvalues()(k)));
        return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    }
    return expm_pade(m);
}

namespace {

Mat hermitian_eigen_map(const Mat& m, double rel_tol, bool invert) {
    if (m.rows() != m.cols())
        throw std::invalid_argument("hermitian matrix function: square matrix required");
    const double scale = std::max(1.0, m.norm());
    if ((m - m.adjoint()).norm() > 1e-10 * scale)
        throw std::invalid_argument("hermitian matrix function: input not Hermitian");
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (m + m.adjoint()));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian matrix function: eigendecomposition failed");
    const auto& w = es.eigenvalues();
    const double wmax = std::max(w.maxCoeff(), 0.0);
    Eigen::VectorXd mapped(w.size());
    for (int k = 0; k < w.size(); ++k) {
        double lam = w(k);
        if (lam < -1e-8 * std::max(wmax, 1.0))
            throw std::runtime_error("hermitian matrix function: input not PSD (eigenvalue " +
                                     std::to_string(lam) + ")");
        if (lam < 0) lam = 0;  // clip the -1e-10*wmax .. 0 band
        if (invert) {
            mapped(k) = (lam <= rel_tol * wmax) ? 0.0 : 1.0 / std::sqrt(lam);
        } else {
            mapped(k) = std::sqrt(lam);
        }
    }
    Mat out = es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
    return 0.5 * (out + out.adjoint());
}

}  // namespace

Mat hermitian_sqrt(const Mat& m) { return hermitian_eigen_map(m, 0.0, false); }

Mat hermitian_pinv_sqrt(const Mat& m, double rel_tol) {
    return hermitian_eigen_map(m, rel_tol, true);
}

Mat partial_trace_outer(const BlockedMatrix& a) {
    const int od = a.outer_dim, id = a.inner_dim;
    if (od <= 0 || id <= 0 || a.entries.rows() != od * id || a.entries.cols() != od * id)
        throw std::invalid_argument("partial_trace_outer: inconsistent block shape");
    Mat out = Mat::Zero(id, id);
    for (int mu = 0; mu < od; ++mu)
        out += a.entries.block(mu * id, mu * id, id, id);
    return out;
}

GramSchmidtResult gram_schmidt(const std::vector<Vec>& vectors, double drop_tol) {
    GramSchmidtResult result;
    Eigen::Index dim = -1;
    for (const auto& v : vectors) {
        if (dim < 0) dim = v.size();
        if (v.size() != dim)
            throw std::invalid_argument("gram_schmidt: vectors must share one dimension");
    }
    for (size_t i = 0; i < vectors.size(); ++i) {
        Vec w = vectors[i];
        const double n0 = w.norm();
        if (n0 < 1e-14) {
            result.dropped.push_back(int(i));
            continue;
        }
        w /= n0;
        for (const auto& u : result.vectors) w -= u.dot(w) * u;
        // second pass for numerical orthogonality
        for (const auto& u : result.vectors) w -= u.dot(w) * u;
        const double n1 = w.norm();
        if (n1 < drop_tol) {
            result.dropped.push_back(int(i));
        } else {
            result.vectors.push_back(w / n1);
        }
    }
    return result;
}

}  // namespace bqec
