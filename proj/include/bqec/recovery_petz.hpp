#ifndef BQEC_RECOVERY_PETZ_HPP
#define BQEC_RECOVERY_PETZ_HPP

#include <optional>
#include <vector>

#include "bqec/channels.hpp"
#include "bqec/states.hpp"

namespace bqec {

struct PetzResult {
    double fidelity = 0.0;
    Eigen::Matrix2cd m_matrix;          // codeword Gram matrix
    BlockedMatrix M;                    // <mu|K_l^dag K_n|nu>, mu outer
    std::optional<std::vector<Mat>> kraus;
    std::pair<double, double> bounds;   // (F_petz, (1+F_petz)/2)
    double asymmetry_norm = 0.0;        // ||A - A^dag|| before symmetrization
    double trace_normalization = 1.0;   // Tr(M)/2 of the raw set
};

// M_{[mu,l],[nu,n]} = <mu_L| K_l^dag K_n |nu_L>.
BlockedMatrix petz_m_matrix(const CodePair& code, const KrausSet& kraus);

// F = (1/4) || Tr_L sqrt((m^-1 (x) I_r) M) ||_F^2.  The Kraus set is scalar
// rescaled so Tr M = 2 first (the truncated expansions are not exactly trace
// preserving); the applied factor is reported in trace_normalization.
PetzResult petz_fidelity(const CodePair& code, const KrausSet& kraus);

// R_r = P_L K_r^dag N(P_L)^{-1/2} with N(P_L) = sum_{m,mu} K_m |mu><mu| K_m^dag.
// Invariant under scalar rescaling of the Kraus set.
std::vector<Mat> petz_kraus(const CodePair& code, const KrausSet& kraus,
                            double rel_tol = 1e-12);

}  // namespace bqec

#endif
