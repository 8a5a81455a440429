#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace qcorr::qlab {

/// Signed n-qubit Pauli operator i^phase * prod_j X^{x_j} Z^{z_j}.
/// phase is an exponent of i (mod 4); Hermitian operators have phase 0 or 2
/// together with an even number of XZ (=-iY) factors.
struct PauliString {
    int n = 0;
    std::vector<std::uint8_t> x;
    std::vector<std::uint8_t> z;
    std::uint8_t phase = 0;  // exponent of i, mod 4

    static PauliString identity(int n);
    /// Parse labels like "+XZI", "-iYY", "ZZ". Length fixes n.
    static PauliString from_label(const std::string& label);

    bool is_identity_bits() const;  // x = z = 0, any phase
    int y_letter_count() const;
    /// True when the operator is +/-1 times a Pauli letter product, which
    /// in the X^x Z^z representation means phase and the Y count share
    /// parity.
    bool is_hermitian() const;
    /// +1 or -1 for Hermitian strings; throws otherwise.
    int hermitian_sign() const;
    /// The same bits with the sign forced to the requested value.
    PauliString with_sign(int sign) const;

    bool operator==(const PauliString& other) const = default;

    std::string to_string() const;
    /// Dense 2^n x 2^n matrix; oracle-sized n only.
    Eigen::MatrixXcd dense() const;
};

/// Group product a * b with exact phase bookkeeping.
PauliString pauli_mul(const PauliString& a, const PauliString& b);

/// Symplectic-form commutation test.
bool commutes(const PauliString& a, const PauliString& b);

}  // namespace qcorr::qlab
