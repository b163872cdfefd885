#ifndef BQEC_SDP_HPP
#define BQEC_SDP_HPP

#include <vector>

#include "bqec/hilbert.hpp"

namespace bqec {

// Standard-form semidefinite program over complex Hermitian matrices:
//   minimize    Tr(C X)
//   subject to  Tr(A_a X) = b_a   (a = 1..m, b real)
//               X >= 0
// All of C and A_a must be Hermitian.
struct SdpProblem {
    Mat objective;                 // C
    std::vector<Mat> constraints;  // A_a
    Eigen::VectorXd rhs;           // b
    Mat initial_x;                 // optional strictly feasible start (empty = default)
};

struct SdpSolution {
    Mat x;
    Eigen::VectorXd y;
    double primal_objective = 0.0;
    double dual_objective = 0.0;
    double duality_gap = 0.0;       // |primal - dual|
    double primal_residual = 0.0;   // ||b - A(X)||_2
    double dual_residual = 0.0;     // ||C - S - A*(y)||_F
    int iterations = 0;
};

// Primal-dual path-following interior point method with Nesterov-Todd
// scaling.  Intended for the small dense instances arising from recovery
// optimization (n <= ~32, m <= ~128).  Throws std::runtime_error with the
// final residuals if the requested gap is not reached.
SdpSolution solve_sdp(const SdpProblem& problem, double gap_tol = 1e-9,
                      int max_iterations = 300);

}  // namespace bqec

#endif
