#include "qcorr/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <stdexcept>

namespace qcorr::qlab {

namespace {

using Complex = std::complex<double>;

// Rotate site q so that the requested basis maps onto the computational
// one: X via H, Y via S^dag then H (so |+i> lands on |0>).
void rotate_to_basis(StateVector& sv, int q, int basis) {
    if (basis == 0) {
        sv.h(q);
    } else {
        sv.sdg(q);
        sv.h(q);
    }
}

StateVector make_chain_state(int n) {
    StateVector sv(n);
    for (int q = 0; q < n; ++q) sv.h(q);
    for (int q = 0; q + 1 < n; ++q) sv.cz(q, q + 1);
    // Hadamard on both ends embeds the GHZ across {first, mid, last} once
    // the ancilla blocks are measured out.
    sv.h(0);
    sv.h(n - 1);
    return sv;
}

}  // namespace

ClusterDistribution cluster_distribution(int pairs, const std::array<int, 3>& signals,
                                         int ancilla_outcome) {
    if (pairs < 3 || pairs > StateVector::kMaxQubits) {
        throw std::invalid_argument("cluster_distribution: pairs out of range [3, 14]");
    }
    if (ancilla_outcome != 0 && ancilla_outcome != 1) {
        throw std::invalid_argument("cluster_distribution: ancilla outcome must be 0 or 1");
    }
    auto sig = signals;
    std::sort(sig.begin(), sig.end());
    if (sig[0] != 0 || sig[2] != pairs - 1 || sig[1] <= sig[0] || sig[1] >= sig[2]) {
        throw std::invalid_argument(
            "cluster_distribution: signals must be {first, interior, last} chain positions");
    }
    const int gap1 = sig[1] - sig[0] - 1;
    const int gap2 = sig[2] - sig[1] - 1;
    if (gap1 % 2 != 0 || gap2 % 2 != 0) {
        throw std::invalid_argument("cluster_distribution: ancilla gaps must be even");
    }

    const int n = pairs;
    const std::size_t dim = std::size_t{1} << n;
    const double b_weight = 1.0 / static_cast<double>(dim);

    ClusterDistribution out;
    out.pairs = n;
    out.signals = sig;
    out.conditional.assign(64, 0.0);

    std::vector<int> is_signal(n, 0);
    for (int s : sig) is_signal[s] = 1;

    const StateVector base = make_chain_state(n);

    // conditional: collapse every ancilla onto the X-basis outcome first
    // (measurements on disjoint sites commute, and the postselection weight
    // does not depend on the signal bases)
    StateVector pinned = base;
    for (int q = 0; q < n; ++q) {
        if (is_signal[q]) continue;
        rotate_to_basis(pinned, q, 0);
        if (pinned.prob_z(q, ancilla_outcome) <= 0.0) {
            throw std::runtime_error("cluster_distribution: postselected branch has zero mass");
        }
        pinned.collapse_z(q, ancilla_outcome);
    }
    for (int bs = 0; bs < 8; ++bs) {
        StateVector sv = pinned;
        for (int j = 0; j < 3; ++j) rotate_to_basis(sv, sig[j], (bs >> j) & 1);
        const auto& amps = sv.amplitudes();
        for (std::size_t idx = 0; idx < dim; ++idx) {
            const double p = std::norm(amps[idx]);
            if (p == 0.0) continue;
            int ss = 0;
            for (int j = 0; j < 3; ++j) ss |= static_cast<int>((idx >> sig[j]) & 1) << j;
            out.conditional[bs * 8 + ss] += p / 8.0;
        }
    }

    // unconditioned joint over all pairs; the 4^n table is kept only while
    // it is reasonably small
    if (n <= 10) {
        out.joint.assign(dim * dim, 0.0);
        for (std::size_t b = 0; b < dim; ++b) {
            StateVector sv = base;
            for (int q = 0; q < n; ++q) {
                rotate_to_basis(sv, q, (b >> q) & 1);
            }
            const auto& amps = sv.amplitudes();
            for (std::size_t s = 0; s < dim; ++s) {
                out.joint[b * dim + s] = b_weight * std::norm(amps[s]);
            }
        }
    }
    return out;
}

bool ghz_constraint(const std::array<int, 3>& b, const std::array<int, 3>& s) {
    const int bsum = (b[0] + b[1] + b[2]) % 4;
    const int parity = (s[0] ^ s[1] ^ s[2]) & 1;
    return (bsum == 0 && parity == 0) || (bsum == 2 && parity == 1);
}

namespace {

LhvResult lhv_search(bool signed_constraint) {
    static const std::array<std::array<int, 3>, 4> contexts = {
        {{0, 0, 0}, {0, 1, 1}, {1, 0, 1}, {1, 1, 0}}};
    LhvResult result;
    for (int f1 = 0; f1 < 4; ++f1) {
        for (int f2 = 0; f2 < 4; ++f2) {
            for (int f3 = 0; f3 < 4; ++f3) {
                const std::array<int, 3> strat = {f1, f2, f3};
                int satisfied = 0;
                for (const auto& b : contexts) {
                    const std::array<int, 3> s = {(strat[0] >> b[0]) & 1, (strat[1] >> b[1]) & 1,
                                                  (strat[2] >> b[2]) & 1};
                    const bool ok = signed_constraint
                                        ? ghz_constraint(b, s)
                                        : ((s[0] ^ s[1] ^ s[2]) == 0);
                    if (ok) ++satisfied;
                }
                if (satisfied > result.max_contexts) {
                    result.max_contexts = satisfied;
                    result.best_strategy = strat;
                    result.achievers = 1;
                } else if (satisfied == result.max_contexts) {
                    ++result.achievers;
                }
            }
        }
    }
    return result;
}

}  // namespace

LhvResult lhv_bruteforce() { return lhv_search(true); }
LhvResult lhv_bruteforce_unsigned() { return lhv_search(false); }

double s3_walk_prob(int k) {
    if (k < 0) throw std::invalid_argument("s3_walk_prob: k must be >= 0");
    // Transfer matrix of the byproduct walk; states 0 and 1 are the group
    // elements that leave the GHZ measurement basis intact.
    static const double T[6][6] = {
        {0.25, 0.25, 0.25, 0.00, 0.25, 0.00}, {0.25, 0.25, 0.25, 0.00, 0.25, 0.00},
        {0.25, 0.00, 0.25, 0.25, 0.00, 0.25}, {0.25, 0.00, 0.25, 0.25, 0.00, 0.25},
        {0.00, 0.25, 0.00, 0.25, 0.25, 0.25}, {0.00, 0.25, 0.00, 0.25, 0.25, 0.25}};
    std::array<double, 6> v = {1, 0, 0, 0, 0, 0};
    for (int step = 0; step < k; ++step) {
        std::array<double, 6> next{};
        for (int i = 0; i < 6; ++i) {
            if (v[i] == 0.0) continue;
            for (int j = 0; j < 6; ++j) next[j] += v[i] * T[i][j];
        }
        v = next;
    }
    return v[0] + v[1];
}

double s3_walk_closed_form(int k) {
    return 1.0 / 3.0 + (2.0 / 3.0) * std::pow(4.0, -k);
}

bool magic_square_check(const MagicSquare& grid) {
    const int n = grid[0][0].n;
    for (const auto& row : grid) {
        for (const auto& p : row) {
            if (p.n != n) throw std::invalid_argument("magic_square_check: size mismatch");
        }
    }
    for (int r = 0; r < 3; ++r) {
        for (int a = 0; a < 3; ++a) {
            for (int b = a + 1; b < 3; ++b) {
                if (!commutes(grid[r][a], grid[r][b])) return false;
                if (!commutes(grid[a][r], grid[b][r])) return false;
            }
        }
    }
    for (int r = 0; r < 3; ++r) {
        const PauliString prod = pauli_mul(pauli_mul(grid[r][0], grid[r][1]), grid[r][2]);
        if (!prod.is_identity_bits() || prod.phase != 0) return false;
    }
    for (int c = 0; c < 3; ++c) {
        const PauliString prod = pauli_mul(pauli_mul(grid[0][c], grid[1][c]), grid[2][c]);
        if (!prod.is_identity_bits()) return false;
        if (c < 2 && prod.phase != 0) return false;
        if (c == 2 && prod.phase != 2) return false;
    }
    return true;
}

std::optional<MagicSquare> find_magic_square(const StabTableau& s1, const StabTableau& s2,
                                             const StabTableau& s3) {
    const int n = s1.qubits();
    if (s2.qubits() != n || s3.qubits() != n) {
        throw std::invalid_argument("find_magic_square: states must share the qubit count");
    }
    if (n > 4) throw std::invalid_argument("find_magic_square: exhaustive search capped at n = 4");

    const std::array<std::vector<PauliString>, 3> groups = {
        s1.stabilizer_group(), s2.stabilizer_group(), s3.stabilizer_group()};

    // rows are (P, Q, PQ) with P, Q nontrivial distinct group elements
    std::array<std::vector<std::array<PauliString, 3>>, 3> rows;
    for (int i = 0; i < 3; ++i) {
        for (const auto& p : groups[i]) {
            if (p.is_identity_bits()) continue;
            for (const auto& q : groups[i]) {
                if (q.is_identity_bits() || (q.x == p.x && q.z == p.z)) continue;
                rows[i].push_back({p, q, pauli_mul(p, q)});
            }
        }
    }

    for (const auto& r1 : rows[0]) {
        for (const auto& r2 : rows[1]) {
            // same-column entries of rows 1 and 2 must commute; screening
            // here keeps the cubic loop tractable at n = 4
            if (!commutes(r1[0], r2[0]) || !commutes(r1[1], r2[1]) || !commutes(r1[2], r2[2])) {
                continue;
            }
            for (const auto& r3 : rows[2]) {
                MagicSquare grid = {r1, r2, r3};
                if (magic_square_check(grid)) return grid;
            }
        }
    }
    return std::nullopt;
}

namespace {

using BitRow = std::vector<std::uint8_t>;  // length 2n: x bits then z bits

bool symplectic_commutes(const BitRow& a, const BitRow& b, int n) {
    int form = 0;
    for (int j = 0; j < n; ++j) {
        form ^= (a[j] & b[n + j]) ^ (a[n + j] & b[j]);
    }
    return form == 0;
}

// Reduced row echelon form over GF(2); canonical representative of a span.
std::vector<BitRow> rref(std::vector<BitRow> rows, int width) {
    int rank = 0;
    for (int col = 0; col < width && rank < static_cast<int>(rows.size()); ++col) {
        int pivot = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r) {
            if (rows[r][col]) {
                pivot = r;
                break;
            }
        }
        if (pivot < 0) continue;
        std::swap(rows[rank], rows[pivot]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r != rank && rows[r][col]) {
                for (int c = 0; c < width; ++c) rows[r][c] ^= rows[rank][c];
            }
        }
        ++rank;
    }
    rows.resize(rank);
    std::sort(rows.begin(), rows.end());
    return rows;
}

}  // namespace

StabilizerEnumeration enumerate_stabilizer_states(int n) {
    if (n < 1 || n > 3) throw std::invalid_argument("enumerate_stabilizer_states: n must be in [1, 3]");
    const int width = 2 * n;
    const std::size_t vectors = std::size_t{1} << width;

    std::vector<BitRow> all;
    for (std::size_t v = 1; v < vectors; ++v) {
        BitRow row(width);
        for (int j = 0; j < width; ++j) row[j] = (v >> j) & 1;
        all.push_back(std::move(row));
    }

    // DFS over independent commuting sets; spans deduplicated by RREF.
    std::map<std::vector<BitRow>, bool> seen;
    std::vector<BitRow> chosen;

    auto in_span = [&](const BitRow& candidate) {
        // Gaussian elimination against the chosen rows.
        std::vector<BitRow> rows = chosen;
        rows.push_back(candidate);
        return rref(rows, width).size() == chosen.size();
    };

    std::function<void(std::size_t)> dfs = [&](std::size_t start) {
        if (static_cast<int>(chosen.size()) == n) {
            seen[rref(chosen, width)] = true;
            return;
        }
        for (std::size_t idx = start; idx < all.size(); ++idx) {
            const BitRow& cand = all[idx];
            bool ok = true;
            for (const auto& row : chosen) {
                if (!symplectic_commutes(row, cand, n)) {
                    ok = false;
                    break;
                }
            }
            if (!ok || in_span(cand)) continue;
            chosen.push_back(cand);
            dfs(idx + 1);
            chosen.pop_back();
        }
    };
    dfs(0);

    StabilizerEnumeration out;
    for (const auto& [basis, unused] : seen) {
        (void)unused;
        // every +/- sign assignment on the canonical basis is a state
        const int gens = static_cast<int>(basis.size());
        for (int signs = 0; signs < (1 << gens); ++signs) {
            std::vector<PauliString> generators;
            for (int g = 0; g < gens; ++g) {
                PauliString p = PauliString::identity(n);
                for (int j = 0; j < n; ++j) {
                    p.x[j] = basis[g][j];
                    p.z[j] = basis[g][n + j];
                }
                generators.push_back(p.with_sign(((signs >> g) & 1) ? -1 : +1));
            }
            out.states.push_back(std::move(generators));
        }
    }
    out.count = out.states.size();
    return out;
}

std::uint64_t support_lower_bound(std::uint64_t num_states, std::uint64_t m) {
    if (m == 0) throw std::invalid_argument("support_lower_bound: m must be >= 1");
    return (num_states + m - 1) / m;
}

double support_lower_bound_log2(double log2_num_states, double log2_m) {
    return std::max(0.0, log2_num_states - log2_m);
}

std::vector<double> carrier_process_distribution(int pairs) {
    if (pairs < 1 || pairs > 12) {
        throw std::invalid_argument("carrier_process_distribution: pairs out of range [1, 12]");
    }
    const std::size_t dim = std::size_t{1} << pairs;
    std::vector<double> joint(dim * dim, 0.0);
    const double b_weight = 1.0 / static_cast<double>(dim);

    // single-qubit Born amplitudes; the carrier is always one of the six
    // stabilizer states but the oracle runs on generic dense vectors
    const Complex inv_sqrt2(0.70710678118654752440, 0.0);
    const Complex i(0.0, 1.0);
    const Eigen::Vector2cd plus(inv_sqrt2, inv_sqrt2);

    struct Branch {
        Eigen::Vector2cd state;
        double weight;
        std::size_t outcomes;
    };

    Eigen::Matrix2cd hadamard;
    hadamard << inv_sqrt2, inv_sqrt2, inv_sqrt2, -inv_sqrt2;

    for (std::size_t b = 0; b < dim; ++b) {
        std::vector<Branch> branches = {{plus, 1.0, 0}};
        for (int site = 0; site < pairs; ++site) {
            const int basis = (b >> site) & 1;
            Eigen::Vector2cd vec0, vec1;
            if (basis == 0) {
                vec0 << inv_sqrt2, inv_sqrt2;    // |+>
                vec1 << inv_sqrt2, -inv_sqrt2;   // |->
            } else {
                vec0 << inv_sqrt2, i * inv_sqrt2;   // |+i>
                vec1 << inv_sqrt2, -i * inv_sqrt2;  // |-i>
            }
            std::vector<Branch> next;
            next.reserve(branches.size() * 2);
            for (const auto& br : branches) {
                for (int y = 0; y < 2; ++y) {
                    const Eigen::Vector2cd& eig = (y == 0) ? vec0 : vec1;
                    const Complex overlap = eig.dot(br.state);  // <eig|state>
                    const double p = std::norm(overlap);
                    if (p <= 1e-300) continue;
                    Branch nb;
                    nb.state = hadamard * eig;  // collapse, then teleport H
                    nb.weight = br.weight * p;
                    nb.outcomes = br.outcomes | (static_cast<std::size_t>(y) << site);
                    next.push_back(std::move(nb));
                }
            }
            branches.swap(next);
        }
        for (const auto& br : branches) {
            joint[b * dim + br.outcomes] += b_weight * br.weight;
        }
    }
    return joint;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size()) throw std::invalid_argument("total_variation: size mismatch");
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) sum += std::abs(p[i] - q[i]);
    return 0.5 * sum;
}

}  // namespace qcorr::qlab
