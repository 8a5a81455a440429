#include "qcorr/kgram.hpp"

#include <cmath>
#include <stdexcept>

namespace qcorr::hmm {

namespace {

void check_row(const std::vector<double>& row, double tol) {
    double sum = 0.0;
    for (double v : row) {
        if (v < 0.0) throw std::invalid_argument("KGram: negative probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > tol) throw std::invalid_argument("KGram: conditional does not sum to 1");
}

std::size_t pow_checked(std::size_t base, int exp, std::size_t limit) {
    std::size_t v = 1;
    for (int i = 0; i < exp; ++i) {
        if (v > limit / base) throw std::invalid_argument("KGram: state count overflow");
        v *= base;
    }
    return v;
}

}  // namespace

void KGram::validate(double tol) const {
    if (k < 1 || L < 1) throw std::invalid_argument("KGram: k and L must be positive");
    if (static_cast<int>(boundary.size()) != k - 1) throw std::invalid_argument("KGram: boundary size");
    std::size_t contexts = 1;
    for (int t = 0; t < k - 1; ++t) {
        if (boundary[t].size() != contexts) throw std::invalid_argument("KGram: boundary shape");
        for (const auto& row : boundary[t]) {
            if (static_cast<int>(row.size()) != L) throw std::invalid_argument("KGram: boundary shape");
            check_row(row, tol);
        }
        contexts *= L;
    }
    if (stationary.size() != contexts) throw std::invalid_argument("KGram: stationary shape");
    for (const auto& row : stationary) {
        if (static_cast<int>(row.size()) != L) throw std::invalid_argument("KGram: stationary shape");
        check_row(row, tol);
    }
}

KGram random_kgram(int k, int L, RandomSource& rng) {
    if (k < 1 || L < 1) throw std::invalid_argument("random_kgram: k and L must be positive");
    KGram g;
    g.k = k;
    g.L = L;
    std::size_t contexts = 1;
    for (int t = 0; t < k - 1; ++t) {
        std::vector<std::vector<double>> table;
        table.reserve(contexts);
        for (std::size_t c = 0; c < contexts; ++c) table.push_back(rng.dirichlet(L, 1.0));
        g.boundary.push_back(std::move(table));
        contexts = pow_checked(L, t + 1, 1u << 24);
    }
    contexts = pow_checked(L, k - 1, 1u << 24);
    g.stationary.reserve(contexts);
    for (std::size_t c = 0; c < contexts; ++c) g.stationary.push_back(rng.dirichlet(L, 1.0));
    return g;
}

KGram uniform_kgram(int k, int L) {
    KGram g;
    g.k = k;
    g.L = L;
    const std::vector<double> row(L, 1.0 / L);
    std::size_t contexts = 1;
    for (int t = 0; t < k - 1; ++t) {
        g.boundary.emplace_back(contexts, row);
        contexts *= L;
    }
    g.stationary.assign(contexts, row);
    return g;
}

double kgram_prob(const KGram& model, const std::vector<int>& seq) {
    if (static_cast<int>(seq.size()) < model.k) {
        throw std::invalid_argument("kgram_prob: sequence shorter than k");
    }
    for (int s : seq) {
        if (s < 0 || s >= model.L) throw std::invalid_argument("kgram_prob: symbol out of range");
    }
    double p = 1.0;
    std::size_t ctx = 0;
    for (int t = 0; t < static_cast<int>(seq.size()); ++t) {
        if (t < model.k - 1) {
            p *= model.boundary[t][ctx][seq[t]];
            ctx = ctx * model.L + seq[t];
        } else {
            p *= model.stationary[ctx][seq[t]];
            if (model.k >= 2) {
                // slide the window: drop the oldest symbol, append the new one
                std::size_t high = 1;
                for (int i = 0; i < model.k - 2; ++i) high *= model.L;
                ctx = (ctx % high) * model.L + seq[t];
            }
        }
    }
    return p;
}

Hmm kgram_to_hmm(const KGram& model) {
    model.validate(1e-9);
    const int L = model.L;
    const int k = model.k;
    if (k == 1) {
        Hmm m;
        m.h = 1;
        m.M = L;
        m.prior = {1.0};
        m.trans = {{1.0}};
        m.emis = {model.stationary[0]};
        return m;
    }
    const std::size_t h = pow_checked(L, k - 1, 1u << 22);

    Hmm m;
    m.h = static_cast<int>(h);
    m.M = L;
    m.prior.assign(h, 0.0);
    m.trans.assign(h, std::vector<double>(h, 0.0));
    m.emis.assign(h, std::vector<double>(L, 0.0));

    // prior: joint probability of the first k-1 symbols
    std::size_t high = h / L;  // L^{k-2}
    for (std::size_t w = 0; w < h; ++w) {
        double p = 1.0;
        std::size_t ctx = 0;
        std::size_t rest = w;
        std::size_t place = high;
        for (int t = 0; t < k - 1; ++t) {
            const int sym = static_cast<int>(rest / place);
            rest %= place;
            if (place > 1) place /= L;
            p *= model.boundary[t][ctx][sym];
            ctx = ctx * L + sym;
        }
        m.prior[w] = p;
    }

    // emission reads the oldest window symbol; transition appends per the
    // stationary conditional on the full window
    for (std::size_t w = 0; w < h; ++w) {
        const int oldest = static_cast<int>(w / high);
        m.emis[w][oldest] = 1.0;
        const std::size_t shifted = (w % high) * L;
        for (int sym = 0; sym < L; ++sym) {
            m.trans[w][shifted + sym] = model.stationary[w][sym];
        }
    }
    m.validate(1e-9);
    return m;
}

}  // namespace qcorr::hmm
