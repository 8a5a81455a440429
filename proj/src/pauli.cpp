#include "qcorr/pauli.hpp"

#include <stdexcept>

namespace qcorr::qlab {

using Complex = std::complex<double>;

PauliString PauliString::identity(int n) {
    if (n < 1) throw std::invalid_argument("PauliString: n must be >= 1");
    PauliString p;
    p.n = n;
    p.x.assign(n, 0);
    p.z.assign(n, 0);
    return p;
}

PauliString PauliString::from_label(const std::string& label) {
    std::size_t pos = 0;
    std::uint8_t phase = 0;
    if (pos < label.size() && (label[pos] == '+' || label[pos] == '-')) {
        if (label[pos] == '-') phase = 2;
        ++pos;
    }
    if (pos < label.size() && label[pos] == 'i') {
        phase = (phase + 1) & 3;
        ++pos;
    }
    const std::string body = label.substr(pos);
    if (body.empty()) throw std::invalid_argument("PauliString: empty label");
    PauliString p = identity(static_cast<int>(body.size()));
    for (std::size_t j = 0; j < body.size(); ++j) {
        switch (body[j]) {
            case 'I': break;
            case 'X': p.x[j] = 1; break;
            case 'Z': p.z[j] = 1; break;
            case 'Y':
                // Y = i X Z
                p.x[j] = 1;
                p.z[j] = 1;
                phase = (phase + 1) & 3;
                break;
            default:
                throw std::invalid_argument("PauliString: bad letter in label");
        }
    }
    p.phase = phase;
    return p;
}

bool PauliString::is_identity_bits() const {
    for (int j = 0; j < n; ++j) {
        if (x[j] || z[j]) return false;
    }
    return true;
}

int PauliString::y_letter_count() const {
    int count = 0;
    for (int j = 0; j < n; ++j) count += (x[j] & z[j]);
    return count;
}

bool PauliString::is_hermitian() const { return ((phase - y_letter_count()) & 1) == 0; }

int PauliString::hermitian_sign() const {
    const int delta = phase - y_letter_count();
    if (delta & 1) throw std::invalid_argument("PauliString: operator is not Hermitian");
    return (((delta % 4) + 4) % 4 == 0) ? +1 : -1;
}

PauliString PauliString::with_sign(int sign) const {
    if (sign != 1 && sign != -1) throw std::invalid_argument("PauliString: sign must be +/-1");
    PauliString out = *this;
    const int base = y_letter_count() & 3;
    out.phase = static_cast<std::uint8_t>(sign == 1 ? base : (base + 2) & 3);
    return out;
}

std::string PauliString::to_string() const {
    // display convention: letters I X Y Z with a global prefix from {+, +i, -, -i}
    int y_count = 0;
    std::string body;
    body.reserve(n);
    for (int j = 0; j < n; ++j) {
        if (x[j] && z[j]) {
            body.push_back('Y');
            ++y_count;
        } else if (x[j]) {
            body.push_back('X');
        } else if (z[j]) {
            body.push_back('Z');
        } else {
            body.push_back('I');
        }
    }
    // X^1 Z^1 = -i Y, so each Y letter absorbs one factor of i
    const int display = (phase + 3 * y_count) & 3;
    static const char* prefix[4] = {"+", "+i", "-", "-i"};
    return std::string(prefix[display]) + body;
}

Eigen::MatrixXcd PauliString::dense() const {
    static const Complex i(0.0, 1.0);
    Eigen::Matrix2cd singles[4];
    singles[0] << 1, 0, 0, 1;    // I
    singles[1] << 0, 1, 1, 0;    // X
    singles[2] << 1, 0, 0, -1;   // Z
    singles[3] << 0, -1, 1, 0;   // XZ = -iY
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (int j = 0; j < n; ++j) {
        const int code = x[j] ? (z[j] ? 3 : 1) : (z[j] ? 2 : 0);
        const auto& g = singles[code];
        Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
        for (int a = 0; a < 2; ++a) {
            for (int b = 0; b < 2; ++b) {
                next.block(a * out.rows(), b * out.cols(), out.rows(), out.cols()) = g(a, b) * out;
            }
        }
        out.swap(next);
    }
    Complex scale(1.0, 0.0);
    for (int p = 0; p < (phase & 3); ++p) scale *= i;
    return scale * out;
}

PauliString pauli_mul(const PauliString& a, const PauliString& b) {
    if (a.n != b.n) throw std::invalid_argument("pauli_mul: size mismatch");
    PauliString out = PauliString::identity(a.n);
    int phase = a.phase + b.phase;
    for (int j = 0; j < a.n; ++j) {
        // commute a's Z factors past b's X factors
        phase += 2 * (a.z[j] & b.x[j]);
        out.x[j] = a.x[j] ^ b.x[j];
        out.z[j] = a.z[j] ^ b.z[j];
    }
    out.phase = static_cast<std::uint8_t>(phase & 3);
    return out;
}

bool commutes(const PauliString& a, const PauliString& b) {
    if (a.n != b.n) throw std::invalid_argument("commutes: size mismatch");
    int form = 0;
    for (int j = 0; j < a.n; ++j) {
        form ^= (a.x[j] & b.z[j]) ^ (a.z[j] & b.x[j]);
    }
    return form == 0;
}

}  // namespace qcorr::qlab
