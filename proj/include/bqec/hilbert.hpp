#ifndef BQEC_HILBERT_HPP
#define BQEC_HILBERT_HPP

#include <complex>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace bqec {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Matrix indexed by a composite index [mu, l] with mu the outer (slow) index:
// flat = mu * inner_dim + l.  Used for codeword-by-Kraus Gram matrices.
struct BlockedMatrix {
    int outer_dim = 0;
    int inner_dim = 0;
    Mat entries;

    BlockedMatrix() = default;
    BlockedMatrix(int outer, int inner)
        : outer_dim(outer), inner_dim(inner),
          entries(Mat::Zero(outer * inner, outer * inner)) {}

    Complex& at(int mu, int l, int nu, int n) {
        return entries(mu * inner_dim + l, nu * inner_dim + n);
    }
    Complex at(int mu, int l, int nu, int n) const {
        return entries(mu * inner_dim + l, nu * inner_dim + n);
    }
};

struct GramSchmidtResult {
    std::vector<Vec> vectors;         // orthonormal, in input order
    std::vector<int> dropped;         // input indices removed as dependent
};

// Truncated annihilation operator: (n-1, n) = sqrt(n).
Mat annihilation(int dim);

// Photon number operator diag(0, 1, ..., dim-1).
Mat number_op(int dim);

// Dense matrix exponential.  Anti-Hermitian input goes through a Hermitian
// eigendecomposition of i*M (result unitary to machine precision); anything
// else uses Pade scaling-and-squaring.
Mat matrix_exponential(const Mat& m);

// Eigendecomposition-based square root of a Hermitian PSD matrix.
// Eigenvalues in [-1e-10 * lambda_max, 0) are clipped to zero; significantly
// negative spectra raise std::runtime_error.
Mat hermitian_sqrt(const Mat& m);

// Moore-Penrose inverse square root: eigenvalues <= rel_tol * lambda_max map
// to zero, the rest to lambda^(-1/2).
Mat hermitian_pinv_sqrt(const Mat& m, double rel_tol = 1e-12);

// (Tr_L A)_{l,k} = sum_mu A_{[mu,l],[mu,k]}; trace-preserving.
Mat partial_trace_outer(const BlockedMatrix& a);

// Modified Gram-Schmidt over complex vectors.  Inputs are normalized first;
// vectors whose post-projection norm falls below drop_tol are dropped and
// reported, never an error.
GramSchmidtResult gram_schmidt(const std::vector<Vec>& vectors,
                               double drop_tol = 1e-8);

inline double frobenius_norm(const Mat& m) { return m.norm(); }

inline bool is_hermitian(const Mat& m, double tol = 1e-10) {
    return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

inline void require_dim(int dim) {
    if (dim < 2) throw std::invalid_argument("truncation dimension must be >= 2");
}

}  // namespace bqec

#endif
