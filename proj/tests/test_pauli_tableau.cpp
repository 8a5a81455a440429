#include <doctest.h>

#include <cmath>

#include "qcorr/pauli.hpp"
#include "qcorr/rng.hpp"
#include "qcorr/statevector.hpp"
#include "qcorr/tableau.hpp"

using namespace qcorr;
using qlab::PauliString;

namespace {

PauliString random_pauli(int n, RandomSource& rng, bool hermitian_sign_only = true) {
    PauliString p = PauliString::identity(n);
    int y_count = 0;
    for (int j = 0; j < n; ++j) {
        const int code = static_cast<int>(rng.uniform_index(4));
        p.x[j] = (code == 1 || code == 3);
        p.z[j] = (code == 2 || code == 3);
        if (code == 3) ++y_count;
    }
    if (hermitian_sign_only) {
        // keep the operator Hermitian: phase in {+1, -1} after absorbing
        // the -i factors of the XZ letters
        p.phase = static_cast<std::uint8_t>((y_count + 2 * rng.uniform_index(2)) & 3);
    }
    return p;
}

}  // namespace

TEST_CASE("pauli_mul closed forms") {
    const PauliString x = PauliString::from_label("X");
    const PauliString z = PauliString::from_label("Z");
    CHECK(pauli_mul(x, x).to_string() == "+I");
    // X Z = -i Y
    CHECK(pauli_mul(x, z).to_string() == "-iY");
    CHECK(pauli_mul(z, x).to_string() == "+iY");

    const PauliString zz = PauliString::from_label("ZZ");
    const PauliString xx = PauliString::from_label("XX");
    const PauliString prod = pauli_mul(zz, xx);
    // dense oracle up to the recorded phase
    const Eigen::MatrixXcd lhs = prod.dense();
    const Eigen::MatrixXcd rhs = zz.dense() * xx.dense();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-14);

    CHECK_THROWS_AS(pauli_mul(x, zz), std::invalid_argument);
}

TEST_CASE("pauli_mul matches the dense oracle on random pairs") {
    RandomSource rng(3);
    for (int trial = 0; trial < 60; ++trial) {
        PauliString a = random_pauli(3, rng, false);
        PauliString b = random_pauli(3, rng, false);
        a.phase = static_cast<std::uint8_t>(rng.uniform_index(4));
        b.phase = static_cast<std::uint8_t>(rng.uniform_index(4));
        const Eigen::MatrixXcd lhs = pauli_mul(a, b).dense();
        const Eigen::MatrixXcd rhs = a.dense() * b.dense();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("commutes agrees with the dense commutator") {
    const PauliString x1 = PauliString::from_label("XI");
    const PauliString x2 = PauliString::from_label("IX");
    CHECK(qlab::commutes(x1, x2));
    CHECK_FALSE(qlab::commutes(PauliString::from_label("X"), PauliString::from_label("Z")));

    RandomSource rng(7);
    for (int trial = 0; trial < 80; ++trial) {
        const PauliString a = random_pauli(4, rng, false);
        const PauliString b = random_pauli(4, rng, false);
        const Eigen::MatrixXcd comm = a.dense() * b.dense() - b.dense() * a.dense();
        CHECK(qlab::commutes(a, b) == (comm.cwiseAbs().maxCoeff() < 1e-12));
    }
}

TEST_CASE("tableau measurement of eigenstates and coin flips") {
    RandomSource rng(11);
    qlab::StabTableau zero = qlab::StabTableau::computational({0});
    CHECK(zero.measure(PauliString::from_label("Z"), rng) == +1);
    auto [det, val] = zero.peek(PauliString::from_label("Z"));
    CHECK(det);
    CHECK(val == +1);

    // X on |0> is a fair coin: chi-squared sanity within 4 sigma
    int plus = 0;
    const int trials = 10000;
    for (int t = 0; t < trials; ++t) {
        qlab::StabTableau s = qlab::StabTableau::computational({0});
        if (s.measure(PauliString::from_label("X"), rng) == +1) ++plus;
    }
    CHECK(std::abs(plus - trials / 2) < 4.0 * std::sqrt(trials / 4.0));

    CHECK_THROWS_AS(zero.measure(PauliString::from_label("iX"), rng), std::invalid_argument);
}

TEST_CASE("value-semantic measurement leaves the input untouched") {
    RandomSource rng(41);
    const qlab::StabTableau zero = qlab::StabTableau::computational({0, 0});
    auto [outcome, next] = qlab::measure_pauli(zero, PauliString::from_label("XI"), rng);
    CHECK((outcome == 1 || outcome == -1));
    auto [det_before, v_before] = zero.peek(PauliString::from_label("ZI"));
    CHECK(det_before);  // original still the computational state
    CHECK(v_before == +1);
    auto [det_after, v_after] = next.peek(PauliString::from_label("ZI"));
    CHECK_FALSE(det_after);  // the measured copy collapsed
    (void)v_after;
}

TEST_CASE("repeated measurement is reproducible and collapse is real") {
    RandomSource rng(13);
    qlab::StabTableau s = qlab::StabTableau::computational({0, 0});
    const PauliString xx = PauliString::from_label("XX");
    const int first = s.measure(xx, rng);
    for (int rep = 0; rep < 5; ++rep) CHECK(s.measure(xx, rng) == first);
    // ZZ remains deterministic: |00> collapsed onto a Bell-type state
    auto [det, val] = s.peek(PauliString::from_label("ZZ"));
    CHECK(det);
    CHECK(val == +1);
}

TEST_CASE("tableau sequences match statevector projector probabilities") {
    // Random 3-qubit measurement sequences: empirical tableau frequencies
    // against the exact projector cascade.
    RandomSource master(17);
    for (int scenario = 0; scenario < 6; ++scenario) {
        std::vector<int> bits = {static_cast<int>(master.uniform_index(2)),
                                 static_cast<int>(master.uniform_index(2)),
                                 static_cast<int>(master.uniform_index(2))};
        std::vector<PauliString> sequence;
        for (int m = 0; m < 3; ++m) sequence.push_back(random_pauli(3, master));

        // exact joint outcome distribution via statevector
        std::vector<double> exact(1 << 3, 0.0);
        {
            std::vector<std::pair<qlab::StateVector, double>> branches;
            branches.emplace_back(qlab::StateVector::computational(bits), 1.0);
            std::vector<std::size_t> codes(branches.size(), 0);
            for (int m = 0; m < 3; ++m) {
                std::vector<std::pair<qlab::StateVector, double>> next;
                std::vector<std::size_t> next_codes;
                for (std::size_t br = 0; br < branches.size(); ++br) {
                    for (int outcome : {+1, -1}) {
                        const double p = branches[br].first.prob_pauli(sequence[m], outcome);
                        if (p < 1e-14) continue;
                        qlab::StateVector collapsed = branches[br].first;
                        collapsed.collapse_pauli(sequence[m], outcome);
                        next.emplace_back(std::move(collapsed), branches[br].second * p);
                        next_codes.push_back(codes[br] | (outcome < 0 ? (std::size_t{1} << m) : 0));
                    }
                }
                branches = std::move(next);
                codes = std::move(next_codes);
            }
            for (std::size_t br = 0; br < branches.size(); ++br) exact[codes[br]] += branches[br].second;
        }

        // empirical tableau frequencies
        std::vector<double> freq(1 << 3, 0.0);
        RandomSource rng(1000 + scenario);
        const int trials = 100000;
        for (int t = 0; t < trials; ++t) {
            qlab::StabTableau tab = qlab::StabTableau::computational(bits);
            std::size_t code = 0;
            for (int m = 0; m < 3; ++m) {
                if (tab.measure(sequence[m], rng) < 0) code |= (std::size_t{1} << m);
            }
            freq[code] += 1.0 / trials;
        }
        double l1 = 0.0;
        for (int c = 0; c < 8; ++c) l1 += std::abs(freq[c] - exact[c]);
        CHECK(l1 < 1e-2);
    }
}

TEST_CASE("deterministic outcomes match statevector expectations on 4 qubits") {
    RandomSource rng(23);
    // random 4-qubit graph state: every stabilizer-group element is a
    // deterministic +1; products outside the group are coin flips
    const std::vector<std::pair<int, int>> edges = {{0, 1}, {1, 2}, {2, 3}, {0, 3}};
    qlab::StabTableau tab = qlab::StabTableau::graph_state(4, edges);
    qlab::StateVector sv(4);
    for (int q = 0; q < 4; ++q) sv.h(q);
    for (const auto& [a, b] : edges) sv.cz(a, b);

    for (const auto& g : tab.stabilizer_group()) {
        if (g.is_identity_bits()) continue;
        auto [det, val] = tab.peek(g);
        CHECK(det);
        CHECK(val == +1);
        CHECK(sv.pauli_expectation(g) == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (int trial = 0; trial < 20; ++trial) {
        const PauliString p = random_pauli(4, rng);
        auto [det, val] = tab.peek(p);
        const double expectation = sv.pauli_expectation(p);
        if (det) {
            CHECK(expectation == doctest::Approx(static_cast<double>(val)).epsilon(1e-12));
        } else {
            CHECK(expectation == doctest::Approx(0.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("from_generators validates and reconstructs states") {
    // CZ|++> from its stabilizer generators
    const std::vector<PauliString> gens = {PauliString::from_label("XZ"),
                                           PauliString::from_label("ZX")};
    qlab::StabTableau s = qlab::StabTableau::from_generators(gens);
    auto [d1, v1] = s.peek(PauliString::from_label("XZ"));
    CHECK(d1);
    CHECK(v1 == +1);
    auto [d2, v2] = s.peek(PauliString::from_label("YY"));
    CHECK(d2);
    CHECK(v2 == +1);  // (XZ)(ZX) = YY for this group

    CHECK_THROWS_AS(qlab::StabTableau::from_generators(
                        {PauliString::from_label("XI"), PauliString::from_label("ZI")}),
                    std::invalid_argument);  // anticommuting
    CHECK_THROWS_AS(qlab::StabTableau::from_generators(
                        {PauliString::from_label("ZI"), PauliString::from_label("ZI")}),
                    std::invalid_argument);  // dependent
    CHECK_THROWS_AS(qlab::StabTableau::from_generators({PauliString::from_label("iZ")}),
                    std::invalid_argument);  // imaginary sign
}

TEST_CASE("stabilizer_group enumerates all signed elements") {
    qlab::StabTableau s = qlab::StabTableau::graph_state(2, {{0, 1}});
    const auto group = s.stabilizer_group();
    CHECK(group.size() == 4);
    // every element is a +1 stabilizer of the state
    for (const auto& g : group) {
        if (g.is_identity_bits()) continue;
        PauliString obs = g;
        auto [det, val] = s.peek(obs);
        CHECK(det);
        CHECK(val == +1);
    }
}
