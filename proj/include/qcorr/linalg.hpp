#pragma once

#include <Eigen/Dense>
#include <complex>
#include <utility>
#include <vector>

#include "qcorr/rng.hpp"

namespace qcorr::linalg {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kUnitaryTol = 1e-10;

/// Largest entrywise absolute value.
double max_abs(const ComplexMatrix& m);

/// ||M^dag M - I||_max, the deviation from unitarity (or isometry for tall M).
double unitarity_error(const ComplexMatrix& m);

bool is_unitary(const ComplexMatrix& m, double tol = kUnitaryTol);

/// Matrix product with explicit shape validation.
ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);

/// Eigendecomposition of a Hermitian matrix; eigenvalues ascending,
/// h = V diag(lambda) V^dag.
std::pair<Eigen::VectorXd, ComplexMatrix> herm_eig(const ComplexMatrix& h);

/// exp(h) for skew-Hermitian h, via the eigendecomposition of -i h.
/// The result is unitary by construction.
ComplexMatrix expm_skew(const ComplexMatrix& h);

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the
/// R-diagonal phase correction. Deterministic for a given source state.
ComplexMatrix haar_random_unitary(int dim, RandomSource& rng);

/// Re-orthonormalize a nearly unitary matrix (QR polish); arrests the
/// slow drift accumulated over many multiplicative updates.
ComplexMatrix qr_polish(const ComplexMatrix& u);

}  // namespace qcorr::linalg
