#include "oscnc/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace oscnc {

namespace {

double max_abs(const Matrix& A) { return A.cwiseAbs().maxCoeff(); }

void require_hermitian(const Matrix& A, const char* who) {
    if (A.rows() != A.cols() || A.rows() == 0) {
        throw ValidationError(std::string(who) + ": matrix must be square");
    }
    const double scale = std::max(max_abs(A), 1e-300);
    double defect = 0.0;
    for (int n = 0; n < A.rows(); ++n) {
        for (int m = n; m < A.cols(); ++m) {
            defect = std::max(defect, std::abs(A(n, m) - std::conj(A(m, n))));
        }
    }
    if (defect > 1e-10 * scale) {
        throw ValidationError(std::string(who) + ": input not Hermitian");
    }
}

bool exactly_diagonal(const Matrix& A) {
    for (int n = 0; n < A.rows(); ++n) {
        for (int m = 0; m < A.cols(); ++m) {
            if (n != m && A(n, m) != Complex(0.0, 0.0)) return false;
        }
    }
    return true;
}

}  // namespace

HermitianEigenDecomposition hermitian_eigendecomposition(const Matrix& A) {
    require_hermitian(A, "hermitian_eigendecomposition");
    const int d = static_cast<int>(A.rows());

    if (exactly_diagonal(A)) {
        std::vector<int> order(static_cast<size_t>(d));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return A(a, a).real() < A(b, b).real();
        });
        HermitianEigenDecomposition out;
        out.eigenvalues.resize(d);
        out.eigenvectors = Matrix::Zero(d, d);
        for (int i = 0; i < d; ++i) {
            out.eigenvalues(i) = A(order[static_cast<size_t>(i)],
                                   order[static_cast<size_t>(i)]).real();
            out.eigenvectors(order[static_cast<size_t>(i)], i) = 1.0;
        }
        return out;
    }

    Eigen::SelfAdjointEigenSolver<Matrix> solver(A);
    if (solver.info() != Eigen::Success) {
        throw ValidationError("hermitian_eigendecomposition: solver failed");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

double trace_norm(const Matrix& A) {
    const HermitianEigenDecomposition eig = hermitian_eigendecomposition(A);
    return eig.eigenvalues.cwiseAbs().sum();
}

Matrix matrix_sqrt_psd(const Matrix& A) {
    const HermitianEigenDecomposition eig = hermitian_eigendecomposition(A);
    const int d = static_cast<int>(A.rows());
    RealVector roots(d);
    for (int i = 0; i < d; ++i) {
        const double lambda = eig.eigenvalues(i);
        if (lambda < -1e-6) {
            throw NotPsdError("matrix_sqrt_psd: eigenvalue " +
                              std::to_string(lambda) + " below -1e-6");
        }
        roots(i) = lambda > 0.0 ? std::sqrt(lambda) : 0.0;
    }
    return eig.eigenvectors * roots.asDiagonal() *
           eig.eigenvectors.adjoint();
}

double hermitian_trace_product(const Matrix& A, const Matrix& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols()) {
        throw DimensionError("hermitian_trace_product: dimension mismatch");
    }
    // Tr[A B] = sum_nm A_nm conj(B_nm) for Hermitian B.
    return A.cwiseProduct(B.conjugate()).sum().real();
}

}  // namespace oscnc
