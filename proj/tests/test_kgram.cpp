#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcorr/kgram.hpp"

using namespace qcorr;

TEST_CASE("kgram_prob uniform tables and normalization") {
    const hmm::KGram u = hmm::uniform_kgram(2, 2);
    CHECK(hmm::kgram_prob(u, {0, 1, 1, 0}) == doctest::Approx(1.0 / 16.0));

    RandomSource rng(5);
    const hmm::KGram g = hmm::random_kgram(3, 2, rng);
    double total = 0.0;
    for (const auto& seq : oracle::all_sequences(2, 8)) total += hmm::kgram_prob(g, seq);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(hmm::kgram_prob(g, {0, 1}), std::invalid_argument);
}

TEST_CASE("kgram_to_hmm direct identification at k=2") {
    RandomSource rng(7);
    const hmm::KGram g = hmm::random_kgram(2, 3, rng);
    const hmm::Hmm m = hmm::kgram_to_hmm(g);
    CHECK(m.h == 3);
    for (int a = 0; a < 3; ++a) {
        for (int b = 0; b < 3; ++b) {
            // transition a -> (window b) carries the 2-gram conditional
            CHECK(m.trans[a][b] == doctest::Approx(g.stationary[a][b]));
        }
        CHECK(m.prior[a] == doctest::Approx(g.boundary[0][0][a]));
    }
}

TEST_CASE("kgram_to_hmm preserves the distribution exactly") {
    RandomSource rng(11);
    for (int k = 2; k <= 4; ++k) {
        const hmm::KGram g = hmm::random_kgram(k, 2, rng);
        const hmm::Hmm m = hmm::kgram_to_hmm(g);
        for (int n : {k, 5, 8}) {
            if (n < k) continue;
            double total = 0.0;
            for (const auto& seq : oracle::all_sequences(2, n)) {
                const double pk = hmm::kgram_prob(g, seq);
                const double ph = std::exp(hmm::forward_loglik(m, seq));
                CHECK(std::abs(pk - ph) < 1e-12);
                total += pk;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("uniform kgram maps to the uniform sequence distribution") {
    const hmm::KGram u = hmm::uniform_kgram(3, 2);
    const hmm::Hmm m = hmm::kgram_to_hmm(u);
    for (const auto& seq : oracle::all_sequences(2, 5)) {
        CHECK(std::exp(hmm::forward_loglik(m, seq)) == doctest::Approx(1.0 / 32.0).epsilon(1e-12));
    }
}

TEST_CASE("kgram_to_hmm rejects unrepresentable state counts") {
    RandomSource rng(13);
    CHECK_THROWS_AS(hmm::random_kgram(40, 4, rng), std::invalid_argument);
}
