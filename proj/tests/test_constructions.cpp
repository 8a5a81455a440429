#include <doctest.h>

#include <cmath>
#include <complex>

#include "qcorr/constructions.hpp"
#include "qcorr/hmm.hpp"
#include "qcorr/statevector.hpp"

using namespace qcorr;
using qlab::PauliString;

TEST_CASE("ghz_constraint table matches direct complex arithmetic") {
    CHECK(qlab::ghz_constraint({0, 0, 0}, {0, 0, 0}));
    CHECK_FALSE(qlab::ghz_constraint({0, 1, 1}, {0, 0, 0}));  // i^2 = -1

    for (int bm = 0; bm < 8; ++bm) {
        for (int sm = 0; sm < 8; ++sm) {
            const std::array<int, 3> b = {(bm >> 0) & 1, (bm >> 1) & 1, (bm >> 2) & 1};
            const std::array<int, 3> s = {(sm >> 0) & 1, (sm >> 1) & 1, (sm >> 2) & 1};
            const std::complex<double> i(0.0, 1.0);
            std::complex<double> value = 1.0;
            for (int t = 0; t < b[0] + b[1] + b[2]; ++t) value *= i;
            value *= ((s[0] + s[1] + s[2]) % 2 == 0) ? 1.0 : -1.0;
            CHECK(qlab::ghz_constraint(b, s) == (std::abs(value - 1.0) < 1e-12));
        }
    }
}

TEST_CASE("lhv brute force achieves exactly 3 of 4 contexts") {
    const auto result = qlab::lhv_bruteforce();
    CHECK(result.max_contexts == 3);
    CHECK(result.achievers >= 1);
    // removing the sign structure makes all 4 contexts satisfiable
    CHECK(qlab::lhv_bruteforce_unsigned().max_contexts == 4);
}

TEST_CASE("cluster_distribution satisfies the GHZ support law") {
    struct Config {
        int pairs;
        std::array<int, 3> signals;
    };
    const std::vector<Config> configs = {
        {3, {0, 1, 2}}, {5, {0, 1, 4}}, {5, {0, 3, 4}}, {7, {0, 3, 6}}, {13, {0, 5, 12}},
    };
    for (const auto& cfg : configs) {
        const auto dist = qlab::cluster_distribution(cfg.pairs, cfg.signals, 0);
        for (int bs = 0; bs < 8; ++bs) {
            const std::array<int, 3> b = {(bs >> 0) & 1, (bs >> 1) & 1, (bs >> 2) & 1};
            if ((b[0] ^ b[1] ^ b[2]) != 0) continue;
            for (int ss = 0; ss < 8; ++ss) {
                const std::array<int, 3> s = {(ss >> 0) & 1, (ss >> 1) & 1, (ss >> 2) & 1};
                const double q = dist.conditional[bs * 8 + ss];
                if (qlab::ghz_constraint(b, s)) {
                    CHECK(q > 1e-12);
                } else {
                    CHECK(q <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("cluster_distribution conditional equals the GHZ closed form") {
    // q(b, s) proportional to |1 + i^{sum b} (-1)^{sum s}|^2 across the
    // postselected signal triple
    const auto dist = qlab::cluster_distribution(7, {0, 3, 6}, 0);
    for (int bs = 0; bs < 8; ++bs) {
        const std::array<int, 3> b = {(bs >> 0) & 1, (bs >> 1) & 1, (bs >> 2) & 1};
        for (int ss = 0; ss < 8; ++ss) {
            const std::array<int, 3> s = {(ss >> 0) & 1, (ss >> 1) & 1, (ss >> 2) & 1};
            const std::complex<double> i(0.0, 1.0);
            std::complex<double> w = 1.0;
            for (int t = 0; t < b[0] + b[1] + b[2]; ++t) w *= i;
            w *= ((s[0] + s[1] + s[2]) % 2 == 0) ? 1.0 : -1.0;
            const double expected = std::norm(1.0 + w) / 128.0;
            CHECK(dist.conditional[bs * 8 + ss] == doctest::Approx(expected).epsilon(1e-10));
        }
    }
}

TEST_CASE("cluster_distribution rejects malformed configurations") {
    CHECK_THROWS_AS(qlab::cluster_distribution(4, {0, 1, 3}, 0), std::invalid_argument);  // odd gap
    CHECK_THROWS_AS(qlab::cluster_distribution(15, {0, 7, 14}, 0), std::invalid_argument);
    CHECK_THROWS_AS(qlab::cluster_distribution(5, {1, 2, 4}, 0), std::invalid_argument);
}

TEST_CASE("cluster_distribution conditional agrees with the joint table") {
    const auto dist = qlab::cluster_distribution(5, {0, 1, 4}, 0);
    REQUIRE_FALSE(dist.joint.empty());
    const std::size_t dim = 32;
    std::vector<double> from_joint(64, 0.0);
    double total = 0.0;
    // ancillas at positions 2, 3: basis X (bit 0), outcome 0
    for (int bs = 0; bs < 8; ++bs) {
        std::size_t b = 0;
        for (int j = 0; j < 3; ++j) {
            if ((bs >> j) & 1) b |= (std::size_t{1} << dist.signals[j]);
        }
        for (int ss = 0; ss < 8; ++ss) {
            std::size_t s = 0;
            for (int j = 0; j < 3; ++j) {
                if ((ss >> j) & 1) s |= (std::size_t{1} << dist.signals[j]);
            }
            const double p = dist.joint[b * dim + s];
            from_joint[bs * 8 + ss] = p;
            total += p;
        }
    }
    for (int i = 0; i < 64; ++i) {
        CHECK(dist.conditional[i] == doctest::Approx(from_joint[i] / total).epsilon(1e-12));
    }

    // beyond 10 pairs only the conditional is materialized
    const auto big = qlab::cluster_distribution(11, {0, 5, 10}, 0);
    CHECK(big.joint.empty());
    double sum = 0.0;
    for (double v : big.conditional) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("two-qubit cluster stabilizer correlation") {
    // |+>|+> with CZ: X1 Z2 is a +1 stabilizer, so measuring X on qubit 0
    // and Z on qubit 1 gives perfectly correlated outcomes.
    qlab::StateVector sv(2);
    sv.h(0);
    sv.h(1);
    sv.cz(0, 1);
    CHECK(sv.pauli_expectation(PauliString::from_label("XZ")) == doctest::Approx(1.0));
    // all-X measurement on the same state is uniform (X1 X2 is not in the
    // stabilizer group)
    CHECK(sv.pauli_expectation(PauliString::from_label("XX")) == doctest::Approx(0.0));
}

TEST_CASE("s3 walk matches the closed form") {
    CHECK(qlab::s3_walk_prob(0) == doctest::Approx(1.0));
    CHECK(qlab::s3_walk_prob(1) == doctest::Approx(0.5));
    for (int k = 0; k <= 12; ++k) {
        CHECK(std::abs(qlab::s3_walk_prob(k) - qlab::s3_walk_closed_form(k)) < 1e-12);
    }
    // the excess over 1/3 decays by exactly 4x per step
    for (int k = 1; k <= 10; ++k) {
        const double a = qlab::s3_walk_prob(k) - 1.0 / 3.0;
        const double b = qlab::s3_walk_prob(k + 1) - 1.0 / 3.0;
        CHECK(a / b == doctest::Approx(4.0).epsilon(1e-10));
    }
}

namespace {

qlab::MagicSquare reference_square() {
    using P = PauliString;
    // A = Z1, a = Z2, B = X2, b = X1 with the Table-I layout
    return {{{P::from_label("ZI"), P::from_label("IZ"), P::from_label("ZZ")},
             {P::from_label("IX"), P::from_label("XI"), P::from_label("XX")},
             {P::from_label("ZX"), P::from_label("XZ"), P::from_label("YY")}}};
}

}  // namespace

TEST_CASE("magic_square_check accepts the canonical square") {
    CHECK(qlab::magic_square_check(reference_square()));

    // dense verification: row products +I, first two columns +I, third -I
    const auto grid = reference_square();
    const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(4, 4);
    for (int r = 0; r < 3; ++r) {
        const Eigen::MatrixXcd prod =
            grid[r][0].dense() * grid[r][1].dense() * grid[r][2].dense();
        CHECK((prod - identity).cwiseAbs().maxCoeff() < 1e-12);
    }
    for (int c = 0; c < 2; ++c) {
        const Eigen::MatrixXcd prod =
            grid[0][c].dense() * grid[1][c].dense() * grid[2][c].dense();
        CHECK((prod - identity).cwiseAbs().maxCoeff() < 1e-12);
    }
    const Eigen::MatrixXcd third =
        grid[0][2].dense() * grid[1][2].dense() * grid[2][2].dense();
    CHECK((third + identity).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("magic_square_check rejects squares without the sign structure") {
    qlab::MagicSquare identity_grid;
    for (auto& row : identity_grid) {
        for (auto& p : row) p = PauliString::identity(2);
    }
    CHECK_FALSE(qlab::magic_square_check(identity_grid));

    // commuting rows built from a single stabilizer group never produce
    // the -I column
    qlab::StabTableau plus = qlab::StabTableau::computational({0, 0});
    RandomSource rng(5);
    const auto group = plus.stabilizer_group();
    qlab::MagicSquare grid;
    for (int r = 0; r < 3; ++r) {
        const auto& p = group[1 + rng.uniform_index(3)];
        const auto& q = group[1 + rng.uniform_index(3)];
        grid[r] = {p, q, qlab::pauli_mul(p, q)};
    }
    CHECK_FALSE(qlab::magic_square_check(grid));
}

TEST_CASE("find_magic_square locates the canonical triple") {
    const qlab::StabTableau s1 = qlab::StabTableau::computational({0, 0});
    const qlab::StabTableau s2 = qlab::StabTableau::from_generators(
        {PauliString::from_label("XI"), PauliString::from_label("IX")});
    const qlab::StabTableau s3 = qlab::StabTableau::from_generators(
        {PauliString::from_label("XZ"), PauliString::from_label("ZX")});
    const auto square = qlab::find_magic_square(s1, s2, s3);
    REQUIRE(square.has_value());
    CHECK(qlab::magic_square_check(*square));

    // same state three times admits no magic square
    CHECK_FALSE(qlab::find_magic_square(s1, s1, s1).has_value());
}

TEST_CASE("find_magic_square on graph-state pairs differing by one edge") {
    // computational state + two graph states, the second with one extra
    // edge between the first two vertices
    for (int n : {2, 3}) {
        std::vector<std::pair<int, int>> base_edges;
        if (n == 3) base_edges.push_back({1, 2});
        std::vector<std::pair<int, int>> extra_edges = base_edges;
        extra_edges.push_back({0, 1});

        const qlab::StabTableau comp = qlab::StabTableau::computational(std::vector<int>(n, 0));
        const qlab::StabTableau g1 = qlab::StabTableau::graph_state(n, base_edges);
        const qlab::StabTableau g2 = qlab::StabTableau::graph_state(n, extra_edges);
        const auto square = qlab::find_magic_square(comp, g1, g2);
        REQUIRE(square.has_value());
        CHECK(qlab::magic_square_check(*square));
    }
}

TEST_CASE("stabilizer state counts for 1 to 3 qubits") {
    CHECK(qlab::enumerate_stabilizer_states(1).count == 6);
    CHECK(qlab::enumerate_stabilizer_states(2).count == 60);
    CHECK(qlab::enumerate_stabilizer_states(3).count == 1080);
    CHECK_THROWS_AS(qlab::enumerate_stabilizer_states(4), std::invalid_argument);

    // canonical generator sets are valid states
    const auto enumeration = qlab::enumerate_stabilizer_states(2);
    CHECK(enumeration.states.size() == 60);
    for (std::size_t i = 0; i < enumeration.states.size(); i += 7) {
        CHECK_NOTHROW(qlab::StabTableau::from_generators(enumeration.states[i]));
    }
}

TEST_CASE("support lower bound") {
    CHECK(qlab::support_lower_bound(60, 60) == 1);
    CHECK(qlab::support_lower_bound(60, 1) == 60);
    CHECK(qlab::support_lower_bound(61, 2) == 31);
    CHECK_THROWS_AS(qlab::support_lower_bound(60, 0), std::invalid_argument);

    // exponent-level check at n = 8: 2^{n^2/2} states, overlap 2^{n^2/4 + 7n/2}
    const double n = 8.0;
    const double log2_states = n * n / 2.0;
    const double log2_m = n * n / 4.0 + 7.0 * n / 2.0;
    CHECK(log2_states - log2_m == doctest::Approx(-12.0));
    CHECK(qlab::support_lower_bound_log2(log2_states, log2_m) == doctest::Approx(0.0));
}

TEST_CASE("carrier process marginals are fair coins") {
    const auto joint = qlab::carrier_process_distribution(3);
    const std::size_t dim = 8;
    double total = 0.0;
    for (double v : joint) total += v;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    // every basis string carries weight 1/8
    for (std::size_t b = 0; b < dim; ++b) {
        double mass = 0.0;
        for (std::size_t s = 0; s < dim; ++s) mass += joint[b * dim + s];
        CHECK(mass == doctest::Approx(1.0 / 8.0).epsilon(1e-12));
    }
}
