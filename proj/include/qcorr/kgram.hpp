#pragma once

#include <vector>

#include "qcorr/hmm.hpp"
#include "qcorr/rng.hpp"

namespace qcorr::hmm {

/// k-gram model: p(x_l | x_{l-1} .. x_{l-k+1}) for l >= k-1, with explicit
/// boundary conditionals for the first k-1 positions. Contexts are packed
/// base-L, oldest symbol most significant.
struct KGram {
    int k = 0;
    int L = 0;
    // boundary[t] has L^t contexts; describes p(x_t | x_0 .. x_{t-1}).
    std::vector<std::vector<std::vector<double>>> boundary;
    // stationary conditional over L^{k-1} contexts.
    std::vector<std::vector<double>> stationary;

    void validate(double tol = 1e-12) const;
};

KGram random_kgram(int k, int L, RandomSource& rng);

/// Uniform tables: every conditional is 1/L.
KGram uniform_kgram(int k, int L);

/// Exact sequence probability; requires len(seq) >= k.
double kgram_prob(const KGram& model, const std::vector<int>& seq);

/// Exact embedding into a stationary HMM with h = L^{k-1} hidden states
/// (the hidden state is the window of the previous k-1 symbols; emission
/// reads the oldest window component deterministically).
Hmm kgram_to_hmm(const KGram& model);

}  // namespace qcorr::hmm
