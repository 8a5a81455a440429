#include "qcorr/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <stdexcept>

namespace qcorr::linalg {

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double unitarity_error(const ComplexMatrix& m) {
    ComplexMatrix g = m.adjoint() * m;
    g -= ComplexMatrix::Identity(g.rows(), g.cols());
    return max_abs(g);
}

bool is_unitary(const ComplexMatrix& m, double tol) {
    return m.rows() == m.cols() && unitarity_error(m) < tol;
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("matmul: inner dimensions disagree");
    }
    return a * b;
}

std::pair<Eigen::VectorXd, ComplexMatrix> herm_eig(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("herm_eig: matrix must be square");
    if (max_abs(ComplexMatrix(h - h.adjoint())) >= 1e-8) {
        throw std::invalid_argument("herm_eig: matrix is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("herm_eig: eigensolver failed to converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

ComplexMatrix expm_skew(const ComplexMatrix& h) {
    if (h.rows() != h.cols()) throw std::invalid_argument("expm_skew: matrix must be square");
    if (max_abs(ComplexMatrix(h + h.adjoint())) >= 1e-8) {
        throw std::invalid_argument("expm_skew: matrix is not skew-Hermitian");
    }
    const Complex i(0.0, 1.0);
    // h = i * Hm with Hm Hermitian, so exp(h) = V exp(i diag) V^dag.
    auto [vals, vecs] = herm_eig(ComplexMatrix(-i * h));
    ComplexVector phases(vals.size());
    for (Eigen::Index k = 0; k < vals.size(); ++k) {
        phases[k] = std::exp(i * vals[k]);
    }
    return vecs * phases.asDiagonal() * vecs.adjoint();
}

ComplexMatrix haar_random_unitary(int dim, RandomSource& rng) {
    if (dim < 1) throw std::invalid_argument("haar_random_unitary: dim must be >= 1");
    ComplexMatrix g(dim, dim);
    const double scale = 1.0 / std::sqrt(2.0);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) {
            g(r, c) = Complex(rng.gaussian(), rng.gaussian()) * scale;
        }
    }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fix the gauge so Q is Haar rather than QR-convention dependent.
    for (int k = 0; k < dim; ++k) {
        Complex d = r(k, k);
        double a = std::abs(d);
        q.col(k) *= (a == 0.0) ? Complex(1.0, 0.0) : d / a;
    }
    return q;
}

ComplexMatrix qr_polish(const ComplexMatrix& u) {
    if (u.rows() != u.cols()) throw std::invalid_argument("qr_polish: matrix must be square");
    Eigen::HouseholderQR<ComplexMatrix> qr(u);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Keep the polished matrix close to the input, not just any unitary
    // with the same column space.
    for (int k = 0; k < u.cols(); ++k) {
        Complex d = r(k, k);
        double a = std::abs(d);
        q.col(k) *= (a == 0.0) ? Complex(1.0, 0.0) : d / a;
    }
    return q;
}

}  // namespace qcorr::linalg
