#include "qcorr/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "qcorr/data.hpp"

namespace qcorr::hmm {

namespace {

void check_stochastic_row(const std::vector<double>& row, double tol, const char* what) {
    double sum = 0.0;
    for (double v : row) {
        if (v < 0.0) throw std::invalid_argument(std::string(what) + ": negative entry");
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw std::invalid_argument(std::string(what) + ": row does not sum to 1");
    }
}

void check_symbols(const std::vector<int>& seq, int M) {
    for (int s : seq) {
        if (s < 0 || s >= M) throw std::invalid_argument("symbol out of range [0, M)");
    }
}

}  // namespace

void Hmm::validate(double tol) const {
    if (h <= 0 || M <= 0) throw std::invalid_argument("Hmm: h and M must be positive");
    if (static_cast<int>(prior.size()) != h) throw std::invalid_argument("Hmm: prior size");
    if (static_cast<int>(trans.size()) != h || static_cast<int>(emis.size()) != h) {
        throw std::invalid_argument("Hmm: table sizes");
    }
    check_stochastic_row(prior, tol, "Hmm prior");
    for (const auto& row : trans) {
        if (static_cast<int>(row.size()) != h) throw std::invalid_argument("Hmm: trans shape");
        check_stochastic_row(row, tol, "Hmm trans");
    }
    for (const auto& row : emis) {
        if (static_cast<int>(row.size()) != M) throw std::invalid_argument("Hmm: emis shape");
        check_stochastic_row(row, tol, "Hmm emis");
    }
}

std::string Hmm::to_json() const {
    nlohmann::json j;
    j["h"] = h;
    j["M"] = M;
    j["prior"] = prior;
    j["trans"] = trans;
    j["emis"] = emis;
    return j.dump(2);
}

Hmm Hmm::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    Hmm m;
    m.h = j.at("h").get<int>();
    m.M = j.at("M").get<int>();
    m.prior = j.at("prior").get<std::vector<double>>();
    m.trans = j.at("trans").get<std::vector<std::vector<double>>>();
    m.emis = j.at("emis").get<std::vector<std::vector<double>>>();
    m.validate(1e-9);
    return m;
}

Hmm random_hmm(int h, int M, RandomSource& rng) {
    if (h <= 0 || M <= 0) throw std::invalid_argument("random_hmm: h and M must be positive");
    Hmm m;
    m.h = h;
    m.M = M;
    m.prior = rng.dirichlet(h, 1.0);
    m.trans.reserve(h);
    m.emis.reserve(h);
    for (int i = 0; i < h; ++i) m.trans.push_back(rng.dirichlet(h, 1.0));
    for (int i = 0; i < h; ++i) m.emis.push_back(rng.dirichlet(M, 1.0));
    return m;
}

double forward_loglik(const Hmm& model, const std::vector<int>& seq) {
    check_symbols(seq, model.M);
    if (seq.empty()) return 0.0;
    const int h = model.h;
    std::vector<double> alpha(h), next(h);
    double loglik = 0.0;
    for (int i = 0; i < h; ++i) alpha[i] = model.prior[i] * model.emis[i][seq[0]];
    for (std::size_t t = 0;; ++t) {
        double scale = 0.0;
        for (double v : alpha) scale += v;
        if (scale <= 0.0) return -std::numeric_limits<double>::infinity();
        loglik += std::log(scale);
        if (t + 1 == seq.size()) break;
        for (double& v : alpha) v /= scale;
        const int sym = seq[t + 1];
        for (int j = 0; j < h; ++j) {
            double acc = 0.0;
            for (int i = 0; i < h; ++i) acc += alpha[i] * model.trans[i][j];
            next[j] = acc * model.emis[j][sym];
        }
        alpha.swap(next);
    }
    return loglik;
}

Hmm baum_welch_step(const Hmm& model, const data::Dataset& batch) {
    if (batch.sequences.empty()) throw std::invalid_argument("baum_welch_step: empty batch");
    if (batch.M != model.M) throw std::invalid_argument("baum_welch_step: alphabet mismatch");
    const int h = model.h;
    const int M = model.M;

    std::vector<double> prior_acc(h, 0.0);
    std::vector<std::vector<double>> trans_acc(h, std::vector<double>(h, 0.0));
    std::vector<std::vector<double>> emis_acc(h, std::vector<double>(M, 0.0));

    std::vector<std::vector<double>> alpha, beta;
    std::vector<double> scales;

    for (const auto& seq : batch.sequences) {
        check_symbols(seq, M);
        const std::size_t T = seq.size();
        if (T == 0) continue;
        alpha.assign(T, std::vector<double>(h, 0.0));
        beta.assign(T, std::vector<double>(h, 0.0));
        scales.assign(T, 0.0);

        for (int i = 0; i < h; ++i) alpha[0][i] = model.prior[i] * model.emis[i][seq[0]];
        for (std::size_t t = 0; t < T; ++t) {
            if (t > 0) {
                const int sym = seq[t];
                for (int j = 0; j < h; ++j) {
                    double acc = 0.0;
                    for (int i = 0; i < h; ++i) acc += alpha[t - 1][i] * model.trans[i][j];
                    alpha[t][j] = acc * model.emis[j][sym];
                }
            }
            double s = 0.0;
            for (double v : alpha[t]) s += v;
            if (s <= 0.0) {
                throw std::runtime_error("baum_welch_step: sequence has zero probability under model");
            }
            scales[t] = s;
            for (double& v : alpha[t]) v /= s;
        }

        for (int i = 0; i < h; ++i) beta[T - 1][i] = 1.0;
        for (std::size_t t = T - 1; t-- > 0;) {
            const int sym = seq[t + 1];
            for (int i = 0; i < h; ++i) {
                double acc = 0.0;
                for (int j = 0; j < h; ++j) {
                    acc += model.trans[i][j] * model.emis[j][sym] * beta[t + 1][j];
                }
                beta[t][i] = acc / scales[t + 1];
            }
        }

        // gamma and xi accumulation; counts are tied across time positions
        for (int i = 0; i < h; ++i) prior_acc[i] += alpha[0][i] * beta[0][i];
        for (std::size_t t = 0; t < T; ++t) {
            const int sym = seq[t];
            for (int i = 0; i < h; ++i) emis_acc[i][sym] += alpha[t][i] * beta[t][i];
        }
        for (std::size_t t = 0; t + 1 < T; ++t) {
            const int sym = seq[t + 1];
            for (int i = 0; i < h; ++i) {
                const double a = alpha[t][i];
                if (a == 0.0) continue;
                for (int j = 0; j < h; ++j) {
                    trans_acc[i][j] +=
                        a * model.trans[i][j] * model.emis[j][sym] * beta[t + 1][j] / scales[t + 1];
                }
            }
        }
    }

    Hmm updated = model;
    double psum = 0.0;
    for (double v : prior_acc) psum += v;
    if (psum > 0.0) {
        for (int i = 0; i < h; ++i) updated.prior[i] = prior_acc[i] / psum;
    }
    for (int i = 0; i < h; ++i) {
        double tsum = 0.0, esum = 0.0;
        for (double v : trans_acc[i]) tsum += v;
        for (double v : emis_acc[i]) esum += v;
        // rows of states never visited keep their old parameters
        if (tsum > 0.0) {
            for (int j = 0; j < h; ++j) updated.trans[i][j] = trans_acc[i][j] / tsum;
        }
        if (esum > 0.0) {
            for (int m = 0; m < M; ++m) updated.emis[i][m] = emis_acc[i][m] / esum;
        }
    }
    return updated;
}

std::pair<Hmm, std::vector<double>> train_hmm(const Hmm& init, const data::Dataset& dataset,
                                              int epochs) {
    if (epochs < 1) throw std::invalid_argument("train_hmm: epochs must be >= 1");
    Hmm model = init;
    std::vector<double> history;
    history.reserve(epochs);
    for (int e = 0; e < epochs; ++e) {
        model = baum_welch_step(model, dataset);
        double total = 0.0;
        for (const auto& seq : dataset.sequences) total += forward_loglik(model, seq);
        history.push_back(total);
    }
    return {model, history};
}

std::vector<int> sample_hmm(const Hmm& model, int n, RandomSource& rng) {
    if (n < 1) throw std::invalid_argument("sample_hmm: n must be >= 1");
    std::vector<int> seq(n);
    std::size_t state = rng.categorical(model.prior);
    for (int t = 0; t < n; ++t) {
        seq[t] = static_cast<int>(rng.categorical(model.emis[state]));
        if (t + 1 < n) state = rng.categorical(model.trans[state]);
    }
    return seq;
}

void IoHmm::validate(double tol) const {
    if (h <= 0 || X <= 0 || Y <= 0) throw std::invalid_argument("IoHmm: sizes must be positive");
    check_stochastic_row(prior, tol, "IoHmm prior");
    if (static_cast<int>(out_prob.size()) != h) throw std::invalid_argument("IoHmm: out_prob shape");
    for (const auto& per_state : out_prob) {
        if (static_cast<int>(per_state.size()) != X) throw std::invalid_argument("IoHmm: out_prob shape");
        for (const auto& row : per_state) check_stochastic_row(row, tol, "IoHmm out_prob");
    }
    if (static_cast<int>(trans.size()) != X) throw std::invalid_argument("IoHmm: trans shape");
    for (const auto& per_x : trans) {
        if (static_cast<int>(per_x.size()) != Y) throw std::invalid_argument("IoHmm: trans shape");
        for (const auto& mat : per_x) {
            if (static_cast<int>(mat.size()) != h) throw std::invalid_argument("IoHmm: trans shape");
            for (const auto& row : mat) check_stochastic_row(row, tol, "IoHmm trans");
        }
    }
}

double io_hmm_prob(const IoHmm& model, const std::vector<int>& inputs,
                   const std::vector<int>& outputs) {
    if (inputs.size() != outputs.size()) {
        throw std::invalid_argument("io_hmm_prob: input/output length mismatch");
    }
    check_symbols(inputs, model.X);
    check_symbols(outputs, model.Y);
    std::vector<double> w = model.prior;
    std::vector<double> next(model.h);
    for (std::size_t t = 0; t < inputs.size(); ++t) {
        const int x = inputs[t];
        const int y = outputs[t];
        const auto& gamma = model.trans[x][y];
        std::fill(next.begin(), next.end(), 0.0);
        for (int i = 0; i < model.h; ++i) {
            const double mass = w[i] * model.out_prob[i][x][y];
            if (mass == 0.0) continue;
            for (int j = 0; j < model.h; ++j) next[j] += mass * gamma[i][j];
        }
        w.swap(next);
    }
    double p = 0.0;
    for (double v : w) p += v;
    return p;
}

const std::vector<std::string>& carrier_state_labels() {
    static const std::vector<std::string> labels = {"|0>", "|1>", "|+>", "|->", "|+i>", "|-i>"};
    return labels;
}

IoHmm cluster_io_hmm() {
    // Hidden states: 0 |0>, 1 |1>, 2 |+>, 3 |->, 4 |+i>, 5 |-i>.
    // Input 0 measures X (outcome 0 <-> |+>), input 1 measures Y
    // (outcome 0 <-> |+i>). The measured qubit collapses onto the observed
    // eigenstate and the teleportation step applies H before the next site,
    // so the successor state depends only on the input/output pair:
    //   x = X: |+> -> |0>, |-> -> |1>
    //   x = Y: |+i> -> |-i>, |-i> -> |+i>   (H exchanges the Y eigenstates)
    IoHmm m;
    m.h = 6;
    m.X = 2;
    m.Y = 2;
    m.prior.assign(6, 0.0);
    m.prior[2] = 1.0;  // carrier enters as |+>

    // Born rule for X and Y measurements on the six states.
    const double half = 0.5;
    m.out_prob.assign(6, std::vector<std::vector<double>>(2, std::vector<double>(2, half)));
    m.out_prob[2][0] = {1.0, 0.0};  // |+> measured in X
    m.out_prob[3][0] = {0.0, 1.0};  // |-> measured in X
    m.out_prob[4][1] = {1.0, 0.0};  // |+i> measured in Y
    m.out_prob[5][1] = {0.0, 1.0};  // |-i> measured in Y

    const int successor[2][2] = {{0, 1}, {5, 4}};
    m.trans.assign(2, std::vector<std::vector<std::vector<double>>>(
                          2, std::vector<std::vector<double>>(6, std::vector<double>(6, 0.0))));
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            for (int i = 0; i < 6; ++i) m.trans[x][y][i][successor[x][y]] = 1.0;
        }
    }
    m.validate();
    return m;
}

}  // namespace qcorr::hmm
