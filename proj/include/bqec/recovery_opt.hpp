#ifndef BQEC_RECOVERY_OPT_HPP
#define BQEC_RECOVERY_OPT_HPP

#include <optional>
#include <utility>
#include <vector>

#include "bqec/channels.hpp"
#include "bqec/sdp.hpp"
#include "bqec/states.hpp"

namespace bqec {

// Orthonormalized images of the codewords under each Kraus operator.
// bases[j] holds the Gram-Schmidt survivors of (K_j|0_L>, K_j|1_L>);
// dropped records (j, branch) entries removed as linearly dependent
// (branch 0 = plus/zero codeword, 1 = minus/one codeword).
struct ErrorSubspaces {
    struct Pair {
        std::optional<Vec> plus;
        std::optional<Vec> minus;
    };
    std::vector<Pair> bases;
    std::vector<std::pair<int, int>> dropped;
};

struct RecoveryChoi {
    Mat x;                    // Choi matrix over the B-operator index
    double fidelity = 0.0;    // (1/4) Tr(X W)
    double duality_gap = 0.0;
    double tp_residual = 0.0; // ||sum X_IJ B_I^dag B_J - P_span||_F
    int iterations = 0;
};

ErrorSubspaces error_subspaces(const CodePair& code, const KrausSet& kraus,
                               double drop_tol = 1e-8);

// Projection-operator basis.  A surviving pair contributes the four
// Pauli-patterned operators
//   |0><psi+| + |1><psi-|,  |0><psi-| + |1><psi+|,
//   i|0><psi-| - i|1><psi+|,  |0><psi+| - |1><psi-|
// in that order; a half-dropped pair contributes the two independent
// operators |0><psi| and |1><psi| instead.
std::vector<Mat> b_operators(const CodePair& code, const ErrorSubspaces& subs);

// W_IJ = sum_l Tr(B_I K_l) conj(Tr(B_J K_l)); Hermitian PSD.
Mat process_matrix(const std::vector<Mat>& b_ops, const KrausSet& kraus,
                   const CodePair& code);

// Maximize (1/4) Tr(X W) subject to sum_IJ X_IJ B_I^dag B_J = P_span and
// X >= 0, where P_span projects onto the span of the error-subspace vectors
// (recovered from the B operators themselves).
RecoveryChoi solve_recovery_sdp(const Mat& w, const std::vector<Mat>& b_ops,
                                double tol = 1e-7);

// One Kraus operator per Choi eigenvalue above 1e-10 * lambda_max:
// R_r = sqrt(d_r) sum_I V_Ir B_I.
std::vector<Mat> extract_recovery_kraus(const RecoveryChoi& choi,
                                        const std::vector<Mat>& b_ops);

// F = (1/4) sum_{r,j} |Tr(V^dag R_r K_j V)|^2 with V the encoding isometry.
double channel_fidelity(const std::vector<Mat>& recovery, const KrausSet& kraus,
                        const CodePair& code);

struct OptimalRecovery {
    RecoveryChoi choi;
    std::vector<Mat> b_ops;
    KrausSet normalized;  // trace-normalized Kraus set used throughout
};

// Full pipeline on the code-trace-normalized Kraus set.
OptimalRecovery optimal_recovery(const CodePair& code, const KrausSet& kraus,
                                 double tol = 1e-7);

}  // namespace bqec

#endif
