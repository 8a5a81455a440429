#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/rng.hpp"

namespace qcorr::data {
struct Dataset;
}

namespace qcorr::hmm {

/// Translationally invariant hidden Markov model with row-stochastic
/// parameter tables: trans[i][j] = P(next=j | cur=i), emis[i][m] =
/// P(symbol=m | state=i).
struct Hmm {
    int h = 0;
    int M = 0;
    std::vector<double> prior;               // h
    std::vector<std::vector<double>> trans;  // h x h
    std::vector<std::vector<double>> emis;   // h x M

    void validate(double tol = 1e-12) const;

    std::string to_json() const;
    static Hmm from_json(const std::string& text);
};

/// Random model with Dirichlet(1) rows; the classical-baseline initializer.
Hmm random_hmm(int h, int M, RandomSource& rng);

/// log p(seq) in nats via the scaled forward algorithm.
/// Returns -inf when the model assigns the sequence probability zero.
double forward_loglik(const Hmm& model, const std::vector<int>& seq);

/// One tied-count EM update over the whole batch (expected counts summed
/// across time positions, matching the stationary model).
Hmm baum_welch_step(const Hmm& model, const data::Dataset& batch);

/// Fixed-epoch Baum-Welch; history[e] is the total data log-likelihood
/// after epoch e's update.
std::pair<Hmm, std::vector<double>> train_hmm(const Hmm& init, const data::Dataset& dataset,
                                              int epochs);

/// Ancestral sample of length n.
std::vector<int> sample_hmm(const Hmm& model, int n, RandomSource& rng);

/// Input-driven HMM ("translation form"): emit y from p(y | state, x), then
/// move with the transition matrix selected by the (x, y) pair.
struct IoHmm {
    int h = 0;
    int X = 0;
    int Y = 0;
    std::vector<double> prior;                                         // h
    std::vector<std::vector<std::vector<double>>> out_prob;            // h x X x Y
    std::vector<std::vector<std::vector<std::vector<double>>>> trans;  // X x Y x h x h

    void validate(double tol = 1e-12) const;
};

/// p(outputs | inputs) by forward recursion over hidden paths.
double io_hmm_prob(const IoHmm& model, const std::vector<int>& inputs,
                   const std::vector<int>& outputs);

/// The six-state machine tracking the cluster-chain carrier qubit through
/// basis-rotated measurement and collapse followed by the Hadamard teleport
/// step. Hidden states are the single-qubit stabilizer states in the order
/// |0>, |1>, |+>, |->, |+i>, |-i>; inputs are the X (0) and Y (1) bases;
/// outputs are the measurement results. Output tables are Born-rule rows.
IoHmm cluster_io_hmm();

/// State labels matching cluster_io_hmm's hidden-state order.
const std::vector<std::string>& carrier_state_labels();

}  // namespace qcorr::hmm
