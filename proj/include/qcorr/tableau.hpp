#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qcorr/pauli.hpp"
#include "qcorr/rng.hpp"

namespace qcorr::qlab {

/// Stabilizer-state tableau with destabilizer rows (Aaronson-Gottesman
/// layout). Generator signs are limited to +/-1; -I is never in the group.
class StabTableau {
public:
    /// |bits> computational basis state (bit j = qubit j).
    static StabTableau computational(const std::vector<int>& bits);
    /// Graph state: |+>^n with CZ on every listed edge.
    static StabTableau graph_state(int n, const std::vector<std::pair<int, int>>& edges);
    /// Build the state stabilized by the given independent commuting
    /// +/-1-signed generators. Rejects dependent, anticommuting, or
    /// inconsistent (-I in group) inputs.
    static StabTableau from_generators(const std::vector<PauliString>& generators);

    int qubits() const { return n_; }
    const PauliString& stabilizer(int i) const { return stab_[i]; }
    const PauliString& destabilizer(int i) const { return destab_[i]; }
    std::vector<PauliString> stabilizer_group() const;  // all 2^n signed elements

    /// Measure a +/-1-signed Pauli observable. Returns the +/-1 outcome and
    /// updates the state. Phases +/-i are rejected (not Hermitian).
    int measure(const PauliString& p, RandomSource& rng);

    /// Outcome distribution without collapsing: (deterministic, value).
    /// For random outcomes value is meaningless and deterministic = false.
    std::pair<bool, int> peek(const PauliString& p) const;

    /// Conjugate the state by a Pauli operator (flips signs of
    /// anticommuting generators).
    void apply_pauli(const PauliString& p);

private:
    StabTableau(int n) : n_(n) {}
    void validate_observable(const PauliString& p) const;

    int n_ = 0;
    std::vector<PauliString> destab_;
    std::vector<PauliString> stab_;
};

/// Value-semantic measurement: the input state is left untouched.
inline std::pair<int, StabTableau> measure_pauli(const StabTableau& state, const PauliString& p,
                                                 RandomSource& rng) {
    StabTableau next = state;
    const int outcome = next.measure(p, rng);
    return {outcome, std::move(next)};
}

}  // namespace qcorr::qlab
