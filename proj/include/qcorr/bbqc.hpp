#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qcorr/linalg.hpp"
#include "qcorr/rng.hpp"

namespace qcorr::data {
struct Dataset;
}

namespace qcorr::bbqc {

using linalg::ComplexMatrix;
using linalg::ComplexVector;

/// Basis-enhanced 2-gram model: a unitary-sliced, left-canonical, and
/// translationally invariant matrix product state. U_p prepares the prior
/// on the k-dimensional bond register (boundary vector = first column);
/// U_t acts on visible (x) bond with the visible input fixed to symbol 0,
/// so the slice A^m is the (m k + i, j) block of U_t for j < k. The final
/// bond register is traced out, which makes the distribution normalize
/// exactly.
struct BbqcModel {
    int k = 0;
    int M = 0;
    ComplexMatrix U_p;  // k x k
    ComplexMatrix U_t;  // kM x kM

    ComplexVector boundary() const { return U_p.col(0); }
    /// A^m as a view on U_t: rows [m k, m k + k), columns [0, k).
    ComplexMatrix slice(int m) const { return U_t.block(m * k, 0, k, k); }

    void validate(double tol = linalg::kUnitaryTol) const;

    std::string to_json() const;
    static BbqcModel from_json(const std::string& text);
};

BbqcModel random_bbqc(int k, int M, RandomSource& rng);

/// Momentum accumulators for Riemannian descent on the two unitaries.
struct OptState {
    ComplexMatrix v_Up;
    ComplexMatrix v_Ut;
    double alpha = 0.0;
    double beta = 0.0;

    static OptState zero(const BbqcModel& model, double alpha, double beta);
};

struct TrainConfig {
    double alpha = 1e-2;
    double beta = 0.5;
    int epochs = 1;
    int batch_size = 8;
    std::uint64_t seed = 0;
    int polish_interval = 100;  // QR re-orthonormalization cadence, in steps
};

/// Exact sequence probability via density-matrix propagation
/// rho_t = A^{m_t} rho_{t-1} A^{m_t}^dag, rho_0 = b b^dag. O(n k^3).
double prob(const BbqcModel& model, const std::vector<int>& seq);

/// log prob with per-step renormalization; returns -inf on exact zeros.
double log_prob(const BbqcModel& model, const std::vector<int>& seq);

/// Wirtinger gradient of L = -(1/K) sum log p(seq) with respect to the
/// conjugated unitaries. The U_t gradient lives in the first k columns
/// (the visible-in-0 restriction); all other columns are zero. The U_p
/// gradient lives in the first column.
std::pair<ComplexMatrix, ComplexMatrix> grad_loss(const BbqcModel& model,
                                                  const data::Dataset& batch);
std::pair<ComplexMatrix, ComplexMatrix> grad_loss(const BbqcModel& model,
                                                  const data::Dataset& dataset,
                                                  const std::vector<std::size_t>& indices);

/// Unconstrained gradient of the normalization Z = sum_seq S(seq) at
/// sequence length n. On the unitary manifold Z == 1, so the Riemannian
/// projection of this gradient vanishes identically; kept as a debug path
/// for validating the contraction pattern off-manifold.
std::pair<ComplexMatrix, ComplexMatrix> grad_z(const BbqcModel& model, int n);

/// Momentum update v <- beta v + alpha g followed by the parallel-transport
/// step U <- exp(-(U v^dag - v U^dag)) U for both unitaries.
std::pair<BbqcModel, OptState> riemann_step(const BbqcModel& model, const ComplexMatrix& g_Up,
                                            const ComplexMatrix& g_Ut, const OptState& state);

/// Shuffled mini-batch Riemannian descent; history holds the per-symbol
/// stochastic KL estimate on the full training set after each epoch.
std::pair<BbqcModel, std::vector<double>> train_bbqc(const BbqcModel& init,
                                                     const data::Dataset& dataset,
                                                     const TrainConfig& config);

/// Ancestral sample: left-canonical form makes prefix conditionals exact.
std::vector<int> sample_bbqc(const BbqcModel& model, int n, RandomSource& rng);

/// Mean per-symbol negative log-likelihood over a dataset, in nats.
double nll_per_symbol(const BbqcModel& model, const data::Dataset& dataset);

}  // namespace qcorr::bbqc
