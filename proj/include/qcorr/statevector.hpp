#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qcorr/pauli.hpp"

namespace qcorr::qlab {

/// Dense statevector oracle for small circuits (capped at 14 qubits).
/// Qubit j is bit j of the amplitude index.
class StateVector {
public:
    static constexpr int kMaxQubits = 14;

    explicit StateVector(int n);
    static StateVector computational(const std::vector<int>& bits);

    int qubits() const { return n_; }
    const Eigen::VectorXcd& amplitudes() const { return amps_; }

    void h(int q);
    void s(int q);
    void sdg(int q);
    void x(int q);
    void z(int q);
    void cz(int a, int b);

    double norm() const { return amps_.norm(); }

    /// Probability of outcome `bit` when measuring qubit q in the
    /// computational basis; optionally collapse and renormalize.
    double prob_z(int q, int bit) const;
    void collapse_z(int q, int bit);

    /// Expectation and projection for a signed Pauli observable.
    double pauli_expectation(const PauliString& p) const;
    /// Probability of outcome +/-1 for measuring p; collapse on demand.
    double prob_pauli(const PauliString& p, int outcome) const;
    void collapse_pauli(const PauliString& p, int outcome);

    void apply_pauli(const PauliString& p);

private:
    void check_qubit(int q) const;
    Eigen::VectorXcd apply_pauli_vec(const PauliString& p, const Eigen::VectorXcd& v) const;

    int n_;
    Eigen::VectorXcd amps_;
};

}  // namespace qcorr::qlab
