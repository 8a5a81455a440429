#include "qcorr/bbqc.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "qcorr/data.hpp"

namespace qcorr::bbqc {

namespace {

using linalg::Complex;

void check_symbols(const std::vector<int>& seq, int M) {
    for (int s : seq) {
        if (s < 0 || s >= M) throw std::invalid_argument("bbqc: symbol out of range [0, M)");
    }
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ComplexMatrix matrix_from_json(const nlohmann::json& rows) {
    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    if (nr == 0) throw std::invalid_argument("bbqc: empty matrix in checkpoint");
    const Eigen::Index nc = static_cast<Eigen::Index>(rows.at(0).size());
    ComplexMatrix m(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r) {
        const auto& row = rows.at(r);
        if (static_cast<Eigen::Index>(row.size()) != nc) {
            throw std::invalid_argument("bbqc: ragged matrix in checkpoint");
        }
        for (Eigen::Index c = 0; c < nc; ++c) {
            m(r, c) = Complex(row.at(c).at(0).get<double>(), row.at(c).at(1).get<double>());
        }
    }
    return m;
}

}  // namespace

void BbqcModel::validate(double tol) const {
    if (k <= 0 || M <= 0) throw std::invalid_argument("BbqcModel: k and M must be positive");
    if (U_p.rows() != k || U_p.cols() != k) throw std::invalid_argument("BbqcModel: U_p shape");
    if (U_t.rows() != static_cast<Eigen::Index>(k) * M || U_t.cols() != U_t.rows()) {
        throw std::invalid_argument("BbqcModel: U_t shape");
    }
    if (!linalg::is_unitary(U_p, tol)) throw std::invalid_argument("BbqcModel: U_p not unitary");
    if (!linalg::is_unitary(U_t, tol)) throw std::invalid_argument("BbqcModel: U_t not unitary");
}

std::string BbqcModel::to_json() const {
    nlohmann::json j;
    j["k"] = k;
    j["M"] = M;
    j["U_p"] = matrix_to_json(U_p);
    j["U_t"] = matrix_to_json(U_t);
    return j.dump();
}

BbqcModel BbqcModel::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BbqcModel m;
    m.k = j.at("k").get<int>();
    m.M = j.at("M").get<int>();
    m.U_p = matrix_from_json(j.at("U_p"));
    m.U_t = matrix_from_json(j.at("U_t"));
    m.validate(1e-8);
    return m;
}

BbqcModel random_bbqc(int k, int M, RandomSource& rng) {
    if (k <= 0 || M <= 0) throw std::invalid_argument("random_bbqc: k and M must be positive");
    BbqcModel m;
    m.k = k;
    m.M = M;
    m.U_p = linalg::haar_random_unitary(k, rng);
    m.U_t = linalg::haar_random_unitary(k * M, rng);
    return m;
}

OptState OptState::zero(const BbqcModel& model, double alpha, double beta) {
    OptState s;
    s.v_Up = ComplexMatrix::Zero(model.k, model.k);
    s.v_Ut = ComplexMatrix::Zero(model.k * model.M, model.k * model.M);
    s.alpha = alpha;
    s.beta = beta;
    return s;
}

double prob(const BbqcModel& model, const std::vector<int>& seq) {
    check_symbols(seq, model.M);
    const ComplexVector b = model.boundary();
    ComplexMatrix rho = b * b.adjoint();
    for (int m : seq) {
        const ComplexMatrix a = model.slice(m);
        rho = a * rho * a.adjoint();
    }
    return rho.trace().real();
}

double log_prob(const BbqcModel& model, const std::vector<int>& seq) {
    check_symbols(seq, model.M);
    const ComplexVector b = model.boundary();
    ComplexMatrix rho = b * b.adjoint();
    double total = 0.0;
    for (int m : seq) {
        const ComplexMatrix a = model.slice(m);
        rho = a * rho * a.adjoint();
        const double step = rho.trace().real();
        if (step <= 0.0) return -std::numeric_limits<double>::infinity();
        total += std::log(step);
        rho /= step;
    }
    return total;
}

namespace {

// Per-sequence contribution to the gradient of -log p, accumulated into
// g_b (k) and g_slices (M blocks of k x k). Left vectors are kept
// normalized and right environments trace-normalized, so the ratio
// F_t u u_prev^dag / (u^dag F_t u) is exact at any sequence length.
void accumulate_grad(const BbqcModel& model, const std::vector<int>& seq, ComplexVector& g_b,
                     std::vector<ComplexMatrix>& g_slices) {
    check_symbols(seq, model.M);
    const int k = model.k;
    const std::size_t T = seq.size();

    std::vector<ComplexVector> phi(T + 1);
    phi[0] = model.boundary();
    for (std::size_t t = 0; t < T; ++t) {
        ComplexVector next = model.slice(seq[t]) * phi[t];
        const double norm = next.norm();
        if (norm <= 0.0) {
            throw std::runtime_error("grad_loss: sequence has zero probability under model");
        }
        phi[t + 1] = next / norm;
    }

    ComplexMatrix env = ComplexMatrix::Identity(k, k);
    for (std::size_t t = T; t-- > 0;) {
        const ComplexMatrix a = model.slice(seq[t]);
        const ComplexVector u = a * phi[t];
        const ComplexVector fu = env * u;
        const double den = u.dot(fu).real();  // u^dag env u
        if (den <= 0.0) {
            throw std::runtime_error("grad_loss: vanishing contraction in gradient");
        }
        g_slices[seq[t]].noalias() -= (fu * phi[t].adjoint()) / den;
        env = a.adjoint() * env * a;
        const double tr = env.trace().real();
        if (tr <= 0.0) {
            throw std::runtime_error("grad_loss: vanishing environment in gradient");
        }
        env /= tr;
    }

    const ComplexVector b = model.boundary();
    const ComplexVector fb = env * b;
    const double den = b.dot(fb).real();
    if (den <= 0.0) throw std::runtime_error("grad_loss: vanishing boundary contraction");
    g_b -= fb / den;
}

}  // namespace

std::pair<ComplexMatrix, ComplexMatrix> grad_loss(const BbqcModel& model,
                                                  const data::Dataset& dataset,
                                                  const std::vector<std::size_t>& indices) {
    if (indices.empty()) throw std::invalid_argument("grad_loss: empty batch");
    const int k = model.k;
    const int M = model.M;

    ComplexVector g_b = ComplexVector::Zero(k);
    std::vector<ComplexMatrix> g_slices(M, ComplexMatrix::Zero(k, k));
    for (std::size_t idx : indices) {
        accumulate_grad(model, dataset.sequences.at(idx), g_b, g_slices);
    }

    const double inv = 1.0 / static_cast<double>(indices.size());
    ComplexMatrix g_Up = ComplexMatrix::Zero(k, k);
    g_Up.col(0) = g_b * inv;
    ComplexMatrix g_Ut = ComplexMatrix::Zero(k * M, k * M);
    for (int m = 0; m < M; ++m) {
        g_Ut.block(m * k, 0, k, k) = g_slices[m] * inv;
    }
    return {g_Up, g_Ut};
}

std::pair<ComplexMatrix, ComplexMatrix> grad_loss(const BbqcModel& model,
                                                  const data::Dataset& batch) {
    std::vector<std::size_t> all(batch.sequences.size());
    std::iota(all.begin(), all.end(), 0);
    return grad_loss(model, batch, all);
}

std::pair<ComplexMatrix, ComplexMatrix> grad_z(const BbqcModel& model, int n) {
    if (n < 1) throw std::invalid_argument("grad_z: n must be >= 1");
    const int k = model.k;
    const int M = model.M;

    // forward channel states rho_t = E^t(b b^dag), E(rho) = sum_m A rho A^dag
    std::vector<ComplexMatrix> rho(n);
    const ComplexVector b = model.boundary();
    rho[0] = b * b.adjoint();
    for (int t = 1; t < n; ++t) {
        rho[t] = ComplexMatrix::Zero(k, k);
        for (int m = 0; m < M; ++m) {
            const ComplexMatrix a = model.slice(m);
            rho[t] += a * rho[t - 1] * a.adjoint();
        }
    }
    // backward environments F_t = (E^dag)^{n-t}(I)
    ComplexMatrix env = ComplexMatrix::Identity(k, k);
    std::vector<ComplexMatrix> g_slices(M, ComplexMatrix::Zero(k, k));
    for (int t = n; t-- > 0;) {
        for (int m = 0; m < M; ++m) {
            const ComplexMatrix a = model.slice(m);
            g_slices[m] += env * a * rho[t];
        }
        ComplexMatrix next = ComplexMatrix::Zero(k, k);
        for (int m = 0; m < M; ++m) {
            const ComplexMatrix a = model.slice(m);
            next += a.adjoint() * env * a;
        }
        env = next;
    }

    ComplexMatrix g_Up = ComplexMatrix::Zero(k, k);
    g_Up.col(0) = env * b;
    ComplexMatrix g_Ut = ComplexMatrix::Zero(k * M, k * M);
    for (int m = 0; m < M; ++m) g_Ut.block(m * k, 0, k, k) = g_slices[m];
    return {g_Up, g_Ut};
}

namespace {

// Parallel-transported descent step: along exp(t W) U with
// W = U v^dag - v U^dag the loss derivative is -||W||^2, so the exponent
// carries a plus sign for v accumulated from ascent-direction gradients.
ComplexMatrix transported_update(const ComplexMatrix& u, const ComplexMatrix& v) {
    const ComplexMatrix skew = u * v.adjoint() - v * u.adjoint();
    return linalg::expm_skew(skew) * u;
}

void check_finite(const ComplexMatrix& g, const char* what) {
    if (!g.allFinite()) {
        throw std::invalid_argument(std::string("riemann_step: non-finite gradient for ") + what);
    }
}

}  // namespace

std::pair<BbqcModel, OptState> riemann_step(const BbqcModel& model, const ComplexMatrix& g_Up,
                                            const ComplexMatrix& g_Ut, const OptState& state) {
    if (g_Up.rows() != model.k || g_Up.cols() != model.k || g_Ut.rows() != model.U_t.rows() ||
        g_Ut.cols() != model.U_t.cols()) {
        throw std::invalid_argument("riemann_step: gradient shapes do not match model");
    }
    check_finite(g_Up, "U_p");
    check_finite(g_Ut, "U_t");

    OptState next = state;
    next.v_Up = state.beta * state.v_Up + state.alpha * g_Up;
    next.v_Ut = state.beta * state.v_Ut + state.alpha * g_Ut;

    BbqcModel updated = model;
    updated.U_p = transported_update(model.U_p, next.v_Up);
    updated.U_t = transported_update(model.U_t, next.v_Ut);
    return {updated, next};
}

std::pair<BbqcModel, std::vector<double>> train_bbqc(const BbqcModel& init,
                                                     const data::Dataset& dataset,
                                                     const TrainConfig& config) {
    if (config.alpha < 0.0 || config.beta < 0.0 || config.epochs < 1 || config.batch_size < 1) {
        throw std::invalid_argument("train_bbqc: config values must be positive");
    }
    BbqcModel model = init;
    OptState state = OptState::zero(model, config.alpha, config.beta);
    std::vector<double> history;
    history.reserve(config.epochs);

    long step = 0;
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        const auto batches = data::minibatch_indices(dataset.sequences.size(), config.batch_size,
                                                     config.seed, epoch);
        for (const auto& batch : batches) {
            auto [g_Up, g_Ut] = grad_loss(model, dataset, batch);
            std::tie(model, state) = riemann_step(model, g_Up, g_Ut, state);
            ++step;
            if (config.polish_interval > 0 && step % config.polish_interval == 0) {
                model.U_p = linalg::qr_polish(model.U_p);
                model.U_t = linalg::qr_polish(model.U_t);
            }
        }
        history.push_back(nll_per_symbol(model, dataset));
    }
    return {model, history};
}

std::vector<int> sample_bbqc(const BbqcModel& model, int n, RandomSource& rng) {
    if (n < 1) throw std::invalid_argument("sample_bbqc: n must be >= 1");
    std::vector<int> seq(n);
    ComplexVector phi = model.boundary();
    std::vector<double> weights(model.M);
    std::vector<ComplexVector> branches(model.M);
    for (int t = 0; t < n; ++t) {
        for (int m = 0; m < model.M; ++m) {
            branches[m] = model.slice(m) * phi;
            weights[m] = branches[m].squaredNorm();
        }
        const int m = static_cast<int>(rng.categorical(weights));
        seq[t] = m;
        phi = branches[m] / branches[m].norm();
    }
    return seq;
}

double nll_per_symbol(const BbqcModel& model, const data::Dataset& dataset) {
    if (dataset.sequences.empty()) throw std::invalid_argument("nll_per_symbol: empty dataset");
    double total = 0.0;
    std::size_t symbols = 0;
    for (const auto& seq : dataset.sequences) {
        total -= log_prob(model, seq);
        symbols += seq.size();
    }
    return total / static_cast<double>(symbols);
}

}  // namespace qcorr::bbqc
