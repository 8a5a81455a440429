#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qcorr/pauli.hpp"
#include "qcorr/statevector.hpp"
#include "qcorr/tableau.hpp"

namespace qcorr::qlab {

/// Joint and postselected statistics of the basis-enhanced 2-gram chain:
/// the GHZ-embedded cluster chain (CZ chain on |+>^n with a Hadamard on the
/// two end qubits), each site measured in the X (b=0) or Y (b=1) basis.
/// Y outcome 0 corresponds to the +i eigenstate.
struct ClusterDistribution {
    int pairs = 0;
    std::array<int, 3> signals{};  // zero-based chain positions
    /// joint[b * 2^n + s]: probability of basis string b and outcome
    /// string s (bit j = site j), with each b_j an independent fair coin.
    /// Materialized only up to 10 pairs (the table has 4^n entries);
    /// empty beyond that.
    std::vector<double> joint;
    /// conditional[(b1 b2 b3) * 8 + (s1 s2 s3)]: signal-triple distribution
    /// given every ancilla measured in X with the postselected outcome.
    /// Computed by collapsing the ancillas first, so it is available for
    /// the full 14-pair range.
    std::vector<double> conditional;
};

/// pre: 3 <= pairs <= 14; signal positions are {first, interior, last} with
/// an even number of ancillas inside each gap; ancilla_outcome is 0 or 1.
ClusterDistribution cluster_distribution(int pairs, const std::array<int, 3>& signals,
                                         int ancilla_outcome);

/// The GHZ support condition i^{b1+b2+b3} (-1)^{s1+s2+s3} = 1, with the
/// b-sum taken over the integers.
bool ghz_constraint(const std::array<int, 3>& b, const std::array<int, 3>& s);

struct LhvResult {
    int max_contexts = 0;                  // out of the 4 even-parity bases
    std::array<int, 3> best_strategy{};    // f_i encoded as f(0) | f(1)<<1
    int achievers = 0;                     // strategies reaching the maximum
};

/// Exhaustive search over deterministic local strategies s_i = f_i(b_i).
LhvResult lhv_bruteforce();
/// Same search with the sign structure removed (every context demands even
/// parity); the constant strategy then satisfies all four contexts.
LhvResult lhv_bruteforce_unsigned();

/// Random walk on S3 generated by the measurement byproduct gates of the
/// cluster chain; probability of landing on {identity, (12)} after k
/// two-measurement steps. Equals 1/3 + (2/3) 4^{-k}.
double s3_walk_prob(int k);
double s3_walk_closed_form(int k);

using MagicSquare = std::array<std::array<PauliString, 3>, 3>;

/// Mermin-Peres test: rows and columns pairwise commute, every row product
/// is +I, the first two column products are +I and the third is -I.
bool magic_square_check(const MagicSquare& grid);

/// Search for a magic square with row i drawn from state i's stabilizer
/// group (rows have the form P, Q, PQ). Exhaustive over group elements;
/// intended for n <= 4.
std::optional<MagicSquare> find_magic_square(const StabTableau& s1, const StabTableau& s2,
                                             const StabTableau& s3);

struct StabilizerEnumeration {
    std::uint64_t count = 0;
    /// canonical generator sets (+/- signs applied to an RREF basis)
    std::vector<std::vector<PauliString>> states;
};

/// All n-qubit stabilizer states via canonical tableau forms; n <= 3.
StabilizerEnumeration enumerate_stabilizer_states(int n);

/// Counting bound V >= ceil(|S| / m).
std::uint64_t support_lower_bound(std::uint64_t num_states, std::uint64_t m);
/// Exponent-level variant: log2 of the bound, clamped below at 0.
double support_lower_bound_log2(double log2_num_states, double log2_m);

/// Statevector oracle for the carrier process modeled by
/// hmm::cluster_io_hmm: the carrier enters as |+>; each site measures the
/// X (b=0) or Y (b=1) basis with Born probabilities, collapses onto the
/// observed eigenstate, and passes through the teleportation Hadamard.
/// Returns the joint over (b, s), indexed as b * 2^n + s, with the basis
/// bits b_j being independent fair coins.
std::vector<double> carrier_process_distribution(int pairs);

/// Total variation distance between two distributions of equal size.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

}  // namespace qcorr::qlab
