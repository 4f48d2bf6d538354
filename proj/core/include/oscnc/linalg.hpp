// linalg.hpp — Hermitian eigendecomposition, trace norm, and PSD square root

#pragma once

#include <Eigen/Dense>

#include "oscnc/density_matrix.hpp"
#include "oscnc/errors.hpp"

namespace oscnc {

struct HermitianEigenDecomposition {
    RealVector eigenvalues;  // ascending
    Matrix eigenvectors;     // unitary, columns matching eigenvalues
};

// Requires max |A - A^dag| <= 1e-10 * max|A|. Exactly diagonal inputs take
// a sort-only fast path; everything else goes through a dense solver.
// Reconstruction error and unitarity defect are both <= 1e-10 * max|A|.
HermitianEigenDecomposition hermitian_eigendecomposition(const Matrix& A);

// Sum of |eigenvalue| = Tr sqrt(A A^dag) for Hermitian A.
double trace_norm(const Matrix& A);

// Principal square root after clipping eigenvalues in [-1e-9, 0) to zero.
// Eigenvalues below -1e-6 raise NotPsdError.
Matrix matrix_sqrt_psd(const Matrix& A);

// Tr[A B] for Hermitian A, B (a real number).
double hermitian_trace_product(const Matrix& A, const Matrix& B);

}  // namespace oscnc
