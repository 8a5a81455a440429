#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcorr/data.hpp"
#include "qcorr/eval.hpp"
#include "qcorr/hmm.hpp"

using namespace qcorr;

TEST_CASE("stochastic_kl closed forms and flags") {
    data::Dataset d;
    d.name = "x";
    d.M = 2;
    d.n = 4;
    d.sequences = {{0, 1, 0, 1}, {1, 1, 1, 0}};

    auto uniform = [](const std::vector<int>& seq) {
        return -static_cast<double>(seq.size()) * std::log(2.0);
    };
    const auto kl = eval::stochastic_kl(uniform, d);
    CHECK(kl.per_symbol_nats == doctest::Approx(std::log(2.0)));
    CHECK_FALSE(kl.infinite);

    // a model that is the empirical delta on a single-sequence dataset has
    // zero self NLL
    data::Dataset single;
    single.M = 2;
    single.n = 4;
    single.sequences = {{0, 1, 0, 1}};
    auto delta = [&](const std::vector<int>& seq) {
        return seq == single.sequences[0] ? 0.0 : -1e10;
    };
    CHECK(eval::stochastic_kl(delta, single).per_symbol_nats == doctest::Approx(0.0));

    auto dead = [](const std::vector<int>&) {
        return -std::numeric_limits<double>::infinity();
    };
    const auto flagged = eval::stochastic_kl(dead, d);
    CHECK(flagged.infinite);
    CHECK(flagged.flagged_index == 0);
    CHECK(std::isinf(flagged.per_symbol_nats));
}

TEST_CASE("stochastic_kl matches exact enumeration for an HMM") {
    RandomSource rng(5);
    const hmm::Hmm model = hmm::random_hmm(2, 2, rng);
    const hmm::Hmm source = hmm::random_hmm(3, 2, rng);

    data::Dataset d;
    d.M = 2;
    d.n = 8;
    for (const auto& seq : oracle::all_sequences(2, 8)) d.sequences.push_back(seq);

    // weight每 sequence equally: the estimator averages -log p over the
    // dataset, so the exact counterpart uses the uniform empirical law
    auto loglik = [&](const std::vector<int>& seq) { return hmm::forward_loglik(model, seq); };
    const auto est = eval::stochastic_kl(loglik, d);
    double exact = 0.0;
    for (const auto& seq : d.sequences) {
        exact -= hmm::forward_loglik(model, seq) / static_cast<double>(d.sequences.size());
    }
    CHECK(est.total_nats == doctest::Approx(exact).epsilon(1e-12));
    (void)source;
}

TEST_CASE("stochastic_kl converges to the generator entropy rate") {
    RandomSource rng(13);
    const hmm::Hmm gen = hmm::random_hmm(2, 2, rng);
    const int n = 8;
    const std::size_t K = 100000;
    const auto sample = data::synth_from_model(gen, K, n, 99);

    auto loglik = [&](const std::vector<int>& seq) { return hmm::forward_loglik(gen, seq); };
    const auto est = eval::stochastic_kl(loglik, sample);

    // exact per-symbol entropy by enumerating all 2^8 sequences
    double exact = 0.0;
    for (const auto& seq : oracle::all_sequences(2, n)) {
        const double p = std::exp(hmm::forward_loglik(gen, seq));
        if (p > 0.0) exact -= p * std::log(p);
    }
    exact /= n;

    // standard error of the per-symbol estimator from the sample variance
    double mean = 0.0, m2 = 0.0;
    std::size_t count = 0;
    for (const auto& seq : sample.sequences) {
        const double x = -hmm::forward_loglik(gen, seq) / n;
        ++count;
        const double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }
    const double se = std::sqrt(m2 / (count - 1) / count);
    CHECK(std::abs(est.per_symbol_nats - exact) < 3.0 * se);
}

TEST_CASE("exact divergence metrics") {
    eval::Distribution p{{1.0, 0.0}};
    eval::Distribution q{{0.5, 0.5}};
    p.validate();
    q.validate();
    CHECK(eval::kl_exact(p, p) == doctest::Approx(0.0));
    CHECK(eval::l1_distance(p, p) == doctest::Approx(0.0));
    CHECK(eval::multiplicative_gamma(p, p) == doctest::Approx(0.0));

    CHECK(eval::kl_exact(p, q) == doctest::Approx(std::log(2.0)));
    CHECK(eval::l1_distance(p, q) == doctest::Approx(1.0));
    CHECK(eval::multiplicative_gamma(p, q) == doctest::Approx(1.0));
    CHECK(std::isinf(eval::kl_exact(q, p)));

    // Pinsker: KL >= l1^2 / 2 on random pairs
    RandomSource rng(7);
    for (int trial = 0; trial < 10000; ++trial) {
        eval::Distribution a{rng.dirichlet(4, 0.7)};
        eval::Distribution b{rng.dirichlet(4, 0.7)};
        const double kl = eval::kl_exact(a, b);
        const double l1 = eval::l1_distance(a, b);
        CHECK(kl >= l1 * l1 / 2.0 - 1e-12);
    }
}

TEST_CASE("multiplicative error bounds both KL divergences") {
    RandomSource rng(11);
    // construct p = q (1 + gamma u) with |u| <= 1, renormalized by pairing
    for (int trial = 0; trial < 200; ++trial) {
        const double gamma = 0.001 + 0.1 * rng.uniform();
        std::vector<double> qv = rng.dirichlet(6, 2.0);
        std::vector<double> pv = qv;
        for (std::size_t i = 0; i + 1 < qv.size(); i += 2) {
            const double shift = gamma * std::min(qv[i], qv[i + 1]) * (2.0 * rng.uniform() - 1.0);
            pv[i] += shift;
            pv[i + 1] -= shift;
        }
        eval::Distribution p{pv}, q{qv};
        p.validate(1e-9);
        const double g = std::max(eval::multiplicative_gamma(p, q),
                                  eval::multiplicative_gamma(q, p));
        REQUIRE(g < 0.5);
        CHECK(eval::kl_exact(p, q) <= g + 1e-12);
        CHECK(eval::kl_exact(q, p) <= g + 1e-12);
        const auto verdict = eval::mult_error_implies_kl(p, q);
        REQUIRE(verdict.has_value());
        CHECK(*verdict);
    }

    eval::Distribution p{{1.0, 0.0}};
    eval::Distribution q{{0.0, 1.0}};
    CHECK_FALSE(eval::mult_error_implies_kl(p, q).has_value());  // inapplicable
    eval::Distribution r{{0.5, 0.5}};
    const auto same = eval::mult_error_implies_kl(r, r);
    REQUIRE(same.has_value());
    CHECK(*same);
}

TEST_CASE("chi2_sf closed forms and quadrature oracle") {
    CHECK(eval::chi2_sf(0.0, 3) == doctest::Approx(1.0));
    // df = 2: survival is exp(-x/2)
    CHECK(eval::chi2_sf(2.0 * std::log(2.0), 2) == doctest::Approx(0.5).epsilon(1e-12));
    for (double x : {0.5, 1.0, 3.0, 10.0}) {
        CHECK(eval::chi2_sf(x, 2) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-12));
    }
    // df = 7 textbook point, against numerical integration
    CHECK(eval::chi2_sf(14.067, 7) == doctest::Approx(0.0500).epsilon(2e-2));
    CHECK(eval::chi2_sf(14.067, 7) ==
          doctest::Approx(oracle::chi2_sf_quadrature(14.067, 7)).epsilon(1e-8));

    // monotone decreasing in x
    double prev = 1.0;
    for (double x = 0.1; x < 50.0; x += 0.7) {
        const double v = eval::chi2_sf(x, 5);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(eval::chi2_sf(-1.0, 2), std::invalid_argument);
}

TEST_CASE("degrees of freedom conventions") {
    CHECK(eval::dof_hmm(1, 5) == 4);
    CHECK(eval::dof_hmm(4, 2) == 19);
    CHECK(eval::dof_bbqc(1, 3) == 5);  // 2M - 1 with a trivial prior
    CHECK(eval::dof_bbqc(2, 2) == 14);
    CHECK(eval::dof_bbqc(2, 2, eval::DofConvention::GaugeFixed) == 10);
}

TEST_CASE("lr_test closed forms and the five-sigma point") {
    const auto equal = eval::lr_test(-100.0, -100.0, 10, 5);
    CHECK(equal.statistic == doctest::Approx(0.0));
    CHECK(equal.p_value == doctest::Approx(1.0));
    CHECK(equal.sigma == doctest::Approx(0.0));

    const auto clamped = eval::lr_test(-105.0, -100.0, 10, 5);
    CHECK(clamped.statistic == doctest::Approx(0.0));
    CHECK(clamped.sigma == doctest::Approx(0.0));

    // p = 2.8665e-7 corresponds to 5 sigma one-sided
    CHECK(eval::normal_sf_inv(2.8665e-7) == doctest::Approx(5.0).epsilon(2e-4));
    CHECK(eval::normal_sf(5.0) == doctest::Approx(2.8665e-7).epsilon(1e-3));

    CHECK_THROWS_AS(eval::lr_test(0.0, 0.0, 5, 5), std::invalid_argument);
}

TEST_CASE("kl_threshold_for_sigma inverts the test") {
    CHECK(eval::kl_threshold_for_sigma(10, 0.0, 100, 16) == doctest::Approx(0.0));

    const double t1 = eval::kl_threshold_for_sigma(10, 5.0, 100, 16);
    const double t2 = eval::kl_threshold_for_sigma(10, 5.0, 200, 16);
    CHECK(t1 == doctest::Approx(2.0 * t2).epsilon(1e-12));

    // round trip: feeding the threshold back through lr_test returns sigma
    for (int df : {1, 9, 100, 500}) {
        const std::size_t K = 200;
        const int n = 23;
        const double threshold = eval::kl_threshold_for_sigma(df, 5.0, K, n);
        const double delta_ll = threshold * K * n;
        const auto result = eval::lr_test(delta_ll, 0.0, df + 1, 1);
        CHECK(result.df == df);
        CHECK(result.sigma == doctest::Approx(5.0).epsilon(1e-3));
    }
}
