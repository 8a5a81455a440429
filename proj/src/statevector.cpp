#include "qcorr/statevector.hpp"

#include <stdexcept>

namespace qcorr::qlab {

using Complex = std::complex<double>;

StateVector::StateVector(int n) : n_(n) {
    if (n < 1 || n > kMaxQubits) throw std::invalid_argument("StateVector: qubit count out of range");
    amps_ = Eigen::VectorXcd::Zero(std::size_t{1} << n);
    amps_[0] = 1.0;
}

StateVector StateVector::computational(const std::vector<int>& bits) {
    StateVector sv(static_cast<int>(bits.size()));
    std::size_t index = 0;
    for (std::size_t j = 0; j < bits.size(); ++j) {
        if (bits[j]) index |= (std::size_t{1} << j);
    }
    sv.amps_[0] = 0.0;
    sv.amps_[index] = 1.0;
    return sv;
}

void StateVector::check_qubit(int q) const {
    if (q < 0 || q >= n_) throw std::invalid_argument("StateVector: qubit index out of range");
}

void StateVector::h(int q) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    const double inv_sqrt2 = 0.70710678118654752440;
    for (std::size_t i = 0, dim = static_cast<std::size_t>(amps_.size()); i < dim; ++i) {
        if (i & bit) continue;
        const Complex a0 = amps_[i];
        const Complex a1 = amps_[i | bit];
        amps_[i] = (a0 + a1) * inv_sqrt2;
        amps_[i | bit] = (a0 - a1) * inv_sqrt2;
    }
}

void StateVector::s(int q) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    const Complex i(0.0, 1.0);
    for (std::size_t idx = 0, dim = static_cast<std::size_t>(amps_.size()); idx < dim; ++idx) {
        if (idx & bit) amps_[idx] *= i;
    }
}

void StateVector::sdg(int q) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    const Complex mi(0.0, -1.0);
    for (std::size_t idx = 0, dim = static_cast<std::size_t>(amps_.size()); idx < dim; ++idx) {
        if (idx & bit) amps_[idx] *= mi;
    }
}

void StateVector::x(int q) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0, dim = static_cast<std::size_t>(amps_.size()); i < dim; ++i) {
        if (!(i & bit)) std::swap(amps_[i], amps_[i | bit]);
    }
}

void StateVector::z(int q) {
    check_qubit(q);
    const std::size_t bit = std::size_t{1} << q;
    for (std::size_t i = 0, dim = static_cast<std::size_t>(amps_.size()); i < dim; ++i) {
        if (i & bit) amps_[i] = -amps_[i];
    }
}

void StateVector::cz(int a, int b) {
    check_qubit(a);
    check_qubit(b);
    if (a == b) throw std::invalid_argument("StateVector: cz needs distinct qubits");
    const std::size_t mask = (std::size_t{1} << a) | (std::size_t{1} << b);
    for (std::size_t i = 0, dim = static_cast<std::size_t>(amps_.size()); i < dim; ++i) {
        if ((i & mask) == mask) amps_[i] = -amps_[i];
    }
}

double StateVector::prob_z(int q, int bit) const {
    check_qubit(q);
    const std::size_t mask = std::size_t{1} << q;
    double p = 0.0;
    for (std::size_t i = 0, dim = static_cast<std::size_t>(amps_.size()); i < dim; ++i) {
        if (((i & mask) != 0) == (bit != 0)) p += std::norm(amps_[i]);
    }
    return p;
}

void StateVector::collapse_z(int q, int bit) {
    const double p = prob_z(q, bit);
    if (p <= 0.0) throw std::runtime_error("StateVector: collapse onto zero-probability branch");
    const std::size_t mask = std::size_t{1} << q;
    const double scale = 1.0 / std::sqrt(p);
    for (std::size_t i = 0, dim = static_cast<std::size_t>(amps_.size()); i < dim; ++i) {
        if (((i & mask) != 0) == (bit != 0)) {
            amps_[i] *= scale;
        } else {
            amps_[i] = 0.0;
        }
    }
}

Eigen::VectorXcd StateVector::apply_pauli_vec(const PauliString& p, const Eigen::VectorXcd& v) const {
    if (p.n != n_) throw std::invalid_argument("StateVector: Pauli size mismatch");
    Eigen::VectorXcd out(v.size());
    std::size_t xmask = 0;
    for (int j = 0; j < n_; ++j) {
        if (p.x[j]) xmask |= (std::size_t{1} << j);
    }
    static const Complex ipow[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
    for (std::size_t i = 0; i < static_cast<std::size_t>(v.size()); ++i) {
        // X^x Z^z |i> = (-1)^{z . i} |i ^ x>
        int zdot = 0;
        for (int j = 0; j < n_; ++j) {
            if (p.z[j] && (i & (std::size_t{1} << j))) zdot ^= 1;
        }
        Complex val = v[i] * ipow[p.phase & 3];
        if (zdot) val = -val;
        out[i ^ xmask] = val;
    }
    return out;
}

void StateVector::apply_pauli(const PauliString& p) { amps_ = apply_pauli_vec(p, amps_); }

double StateVector::pauli_expectation(const PauliString& p) const {
    const Eigen::VectorXcd pv = apply_pauli_vec(p, amps_);
    return amps_.dot(pv).real();
}

double StateVector::prob_pauli(const PauliString& p, int outcome) const {
    if (outcome != 1 && outcome != -1) throw std::invalid_argument("StateVector: outcome must be +/-1");
    if (!p.is_hermitian()) throw std::invalid_argument("StateVector: observable must be +/-1 signed");
    return 0.5 * (1.0 + outcome * pauli_expectation(p));
}

void StateVector::collapse_pauli(const PauliString& p, int outcome) {
    const double prob = prob_pauli(p, outcome);
    if (prob <= 1e-300) throw std::runtime_error("StateVector: collapse onto zero-probability branch");
    const Eigen::VectorXcd pv = apply_pauli_vec(p, amps_);
    amps_ = 0.5 * (amps_ + static_cast<double>(outcome) * pv);
    amps_ /= std::sqrt(prob);
}

}  // namespace qcorr::qlab
