#ifndef BQEC_METRICS_KL_HPP
#define BQEC_METRICS_KL_HPP

#include <vector>

#include "bqec/channels.hpp"
#include "bqec/states.hpp"

namespace bqec {

// Knill-Laflamme tensor f_{ijab} = <i_L| E_a^dag E_b |j_L>.
struct KlTensor {
    int num_errors = 0;
    std::vector<Complex> f;  // index ((i*2+j)*E + a)*E + b

    Complex at(int i, int j, int a, int b) const {
        return f[size_t(((i * 2 + j) * num_errors + a) * num_errors + b)];
    }
    Complex& at(int i, int j, int a, int b) {
        return f[size_t(((i * 2 + j) * num_errors + a) * num_errors + b)];
    }
};

// {I, a, a^2, ..., a^max_loss, n, n^2, ..., n^max_deph} in that canonical
// order (identity first, loss powers ascending, then dephasing powers).
std::vector<Mat> elementary_error_set(int max_loss, int max_deph, int dim);

KlTensor kl_tensor(const CodePair& code, const std::vector<Mat>& errors);

// C_KL = sum_{a,b} |f_00ab - f_11ab|^2 + |f_01ab|^2; zero iff the KL
// conditions hold for the set.
double kl_cost_elementary(const CodePair& code, const std::vector<Mat>& errors);

// Same functional over Kraus-operator products K_i^dag K_j, all ordered
// pairs including i = j.
double kl_cost_kraus(const CodePair& code, const KrausSet& kraus);

}  // namespace bqec

#endif
