#include "qcorr/tableau.hpp"

#include <stdexcept>

namespace qcorr::qlab {

namespace {

// GF(2) rank of the symplectic bit rows.
int binary_rank(std::vector<std::vector<std::uint8_t>> rows) {
    const std::size_t cols = rows.empty() ? 0 : rows[0].size();
    int rank = 0;
    std::size_t col = 0;
    for (; col < cols && rank < static_cast<int>(rows.size()); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r != static_cast<std::size_t>(rank) && rows[r][col]) {
                for (std::size_t c = col; c < cols; ++c) rows[r][c] ^= rows[rank][c];
            }
        }
        ++rank;
    }
    return rank;
}

std::vector<std::uint8_t> symplectic_bits(const PauliString& p) {
    std::vector<std::uint8_t> bits(p.x);
    bits.insert(bits.end(), p.z.begin(), p.z.end());
    return bits;
}

}  // namespace

StabTableau StabTableau::computational(const std::vector<int>& bits) {
    const int n = static_cast<int>(bits.size());
    if (n < 1) throw std::invalid_argument("StabTableau: need at least one qubit");
    StabTableau t(n);
    for (int i = 0; i < n; ++i) {
        PauliString d = PauliString::identity(n);
        d.x[i] = 1;
        t.destab_.push_back(d);
        PauliString s = PauliString::identity(n);
        s.z[i] = 1;
        if (bits[i]) s.phase = 2;
        t.stab_.push_back(s);
    }
    return t;
}

StabTableau StabTableau::graph_state(int n, const std::vector<std::pair<int, int>>& edges) {
    if (n < 1) throw std::invalid_argument("StabTableau: need at least one qubit");
    StabTableau t(n);
    for (int i = 0; i < n; ++i) {
        PauliString s = PauliString::identity(n);
        s.x[i] = 1;
        for (const auto& [a, b] : edges) {
            if (a == b || a < 0 || b < 0 || a >= n || b >= n) {
                throw std::invalid_argument("StabTableau: bad graph edge");
            }
            if (a == i) s.z[b] = 1;
            if (b == i) s.z[a] = 1;
        }
        t.stab_.push_back(s);
        PauliString d = PauliString::identity(n);
        d.z[i] = 1;
        t.destab_.push_back(d);
    }
    return t;
}

StabTableau StabTableau::from_generators(const std::vector<PauliString>& generators) {
    if (generators.empty()) throw std::invalid_argument("from_generators: empty set");
    const int n = generators[0].n;
    if (static_cast<int>(generators.size()) != n) {
        throw std::invalid_argument("from_generators: need exactly n generators");
    }
    std::vector<std::vector<std::uint8_t>> rows;
    for (const auto& g : generators) {
        if (g.n != n) throw std::invalid_argument("from_generators: size mismatch");
        if (!g.is_hermitian()) {
            throw std::invalid_argument("from_generators: generator signs must be +/-1");
        }
        if (g.is_identity_bits()) throw std::invalid_argument("from_generators: identity generator");
        rows.push_back(symplectic_bits(g));
    }
    for (std::size_t i = 0; i < generators.size(); ++i) {
        for (std::size_t j = i + 1; j < generators.size(); ++j) {
            if (!commutes(generators[i], generators[j])) {
                throw std::invalid_argument("from_generators: generators must commute");
            }
        }
    }
    if (binary_rank(rows) != n) {
        throw std::invalid_argument("from_generators: generators must be independent");
    }

    // Build by measurement from |0...0>. A wrong sign is repaired with a
    // Pauli that anticommutes with the current generator but commutes with
    // every previously fixed one; such a Pauli always exists for an
    // independent set and is found by GF(2) elimination.
    StabTableau t = computational(std::vector<int>(n, 0));
    RandomSource rng(0);  // outcomes are corrected below, the draw is immaterial
    for (std::size_t fixed = 0; fixed < generators.size(); ++fixed) {
        const PauliString& g = generators[fixed];
        const PauliString target = g.with_sign(+1);
        const int want = g.hermitian_sign();
        // the sign may be forced by leftover seed rows, otherwise measure
        auto [det, value] = t.peek(target);
        const int have = det ? value : t.measure(target, rng);
        if (have != want) {
            // solve sympl(C, g_j) = delta_{j,fixed} for j <= fixed
            const int width = 2 * n;
            std::vector<std::vector<std::uint8_t>> aug;
            for (std::size_t j = 0; j <= fixed; ++j) {
                std::vector<std::uint8_t> row(width + 1, 0);
                for (int q = 0; q < n; ++q) {
                    row[q] = generators[j].z[q];       // pairs with C's x bits
                    row[n + q] = generators[j].x[q];   // pairs with C's z bits
                }
                row[width] = (j == fixed) ? 1 : 0;
                aug.push_back(std::move(row));
            }
            std::vector<int> pivot_col(aug.size(), -1);
            int rank = 0;
            for (int col = 0; col < width && rank < static_cast<int>(aug.size()); ++col) {
                int pr = -1;
                for (int r = rank; r < static_cast<int>(aug.size()); ++r) {
                    if (aug[r][col]) {
                        pr = r;
                        break;
                    }
                }
                if (pr < 0) continue;
                std::swap(aug[rank], aug[pr]);
                for (int r = 0; r < static_cast<int>(aug.size()); ++r) {
                    if (r != rank && aug[r][col]) {
                        for (int c = col; c <= width; ++c) aug[r][c] ^= aug[rank][c];
                    }
                }
                pivot_col[rank] = col;
                ++rank;
            }
            PauliString correction = PauliString::identity(n);
            for (int r = 0; r < rank; ++r) {
                if (aug[r][width]) {
                    const int col = pivot_col[r];
                    if (col < n) {
                        correction.x[col] = 1;
                    } else {
                        correction.z[col - n] = 1;
                    }
                }
            }
            if (commutes(correction, target)) {
                throw std::logic_error("from_generators: sign correction not found");
            }
            t.apply_pauli(correction);
        }
    }
    return t;
}

std::vector<PauliString> StabTableau::stabilizer_group() const {
    std::vector<PauliString> group;
    group.push_back(PauliString::identity(n_));
    for (const auto& g : stab_) {
        const std::size_t size = group.size();
        for (std::size_t i = 0; i < size; ++i) {
            group.push_back(pauli_mul(group[i], g));
        }
    }
    return group;
}

void StabTableau::validate_observable(const PauliString& p) const {
    if (p.n != n_) throw std::invalid_argument("StabTableau: observable size mismatch");
    if (!p.is_hermitian()) {
        throw std::invalid_argument("StabTableau: observable phase must be +/-1");
    }
}

std::pair<bool, int> StabTableau::peek(const PauliString& p) const {
    validate_observable(p);
    for (const auto& s : stab_) {
        if (!commutes(s, p)) return {false, 0};
    }
    // deterministic: express p through the stabilizer rows via destabilizers
    PauliString acc = PauliString::identity(n_);
    for (int i = 0; i < n_; ++i) {
        if (!commutes(destab_[i], p)) acc = pauli_mul(acc, stab_[i]);
    }
    if (acc.x != p.x || acc.z != p.z) {
        throw std::logic_error("StabTableau: commuting observable outside group span");
    }
    return {true, (acc.phase == p.phase) ? +1 : -1};
}

int StabTableau::measure(const PauliString& p, RandomSource& rng) {
    validate_observable(p);
    int pivot = -1;
    for (int i = 0; i < n_; ++i) {
        if (!commutes(stab_[i], p)) {
            pivot = i;
            break;
        }
    }
    if (pivot < 0) {
        auto [det, value] = peek(p);
        (void)det;
        return value;
    }
    // random outcome: update rows that anticommute with p
    for (int i = 0; i < n_; ++i) {
        if (i != pivot && !commutes(stab_[i], p)) {
            stab_[i] = pauli_mul(stab_[i], stab_[pivot]);
        }
        if (!commutes(destab_[i], p) && i != pivot) {
            destab_[i] = pauli_mul(destab_[i], stab_[pivot]);
        }
    }
    destab_[pivot] = stab_[pivot];
    const int outcome = rng.uniform() < 0.5 ? +1 : -1;
    PauliString row = p;
    row.phase = (outcome == +1) ? p.phase : static_cast<std::uint8_t>((p.phase + 2) & 3);
    // store the row as +/-(bits) with phase encoding the sign only
    stab_[pivot] = row;
    return outcome;
}

void StabTableau::apply_pauli(const PauliString& p) {
    if (p.n != n_) throw std::invalid_argument("apply_pauli: size mismatch");
    for (auto& s : stab_) {
        if (!commutes(s, p)) s.phase = static_cast<std::uint8_t>((s.phase + 2) & 3);
    }
    for (auto& d : destab_) {
        if (!commutes(d, p)) d.phase = static_cast<std::uint8_t>((d.phase + 2) & 3);
    }
}

}  // namespace qcorr::qlab
