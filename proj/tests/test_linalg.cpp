#include <doctest.h>

#include <cmath>

#include "oscnc/linalg.hpp"
#include "test_support.hpp"

using namespace oscnc;

namespace {

Matrix diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

}  // namespace

TEST_SUITE("hermitian_eigendecomposition") {
    TEST_CASE("known small spectra") {
        const auto id3 = hermitian_eigendecomposition(Matrix::Identity(3, 3));
        CHECK(id3.eigenvalues(0) == doctest::Approx(1.0));
        CHECK(id3.eigenvalues(2) == doctest::Approx(1.0));

        const auto d = hermitian_eigendecomposition(diag2(2.0, -1.0));
        CHECK(d.eigenvalues(0) == doctest::Approx(-1.0));
        CHECK(d.eigenvalues(1) == doctest::Approx(2.0));

        Matrix pauli_x = Matrix::Zero(2, 2);
        pauli_x(0, 1) = 1.0;
        pauli_x(1, 0) = 1.0;
        const auto px = hermitian_eigendecomposition(pauli_x);
        CHECK(px.eigenvalues(0) == doctest::Approx(-1.0));
        CHECK(px.eigenvalues(1) == doctest::Approx(1.0));
    }

    TEST_CASE("non-Hermitian input rejected") {
        Matrix bad = Matrix::Zero(2, 2);
        bad(0, 1) = 1.0;
        CHECK_THROWS_AS(hermitian_eigendecomposition(bad), ValidationError);
    }

    TEST_CASE("reconstruction and unitarity on random matrices") {
        for (const int dim : {2, 7, 25, 40}) {
            const Matrix A =
                testing::random_hermitian(dim, 1234u + static_cast<unsigned>(dim));
            const auto eig = hermitian_eigendecomposition(A);
            const Matrix rebuilt =
                eig.eigenvectors *
                eig.eigenvalues.cast<Complex>().asDiagonal() *
                eig.eigenvectors.adjoint();
            const double scale = A.cwiseAbs().maxCoeff();
            CHECK(testing::max_abs_diff(rebuilt, A) <= 1e-10 * scale);
            const Matrix gram =
                eig.eigenvectors.adjoint() * eig.eigenvectors;
            CHECK(testing::max_abs_diff(gram, Matrix::Identity(dim, dim)) <=
                  1e-10);
            for (int i = 1; i < dim; ++i) {
                CHECK(eig.eigenvalues(i) >= eig.eigenvalues(i - 1));
            }
        }
    }

    TEST_CASE("diagonal fast path sorts and rebuilds exactly") {
        Matrix d = Matrix::Zero(4, 4);
        d(0, 0) = 3.0;
        d(1, 1) = -1.0;
        d(2, 2) = 2.0;
        d(3, 3) = 0.0;
        const auto eig = hermitian_eigendecomposition(d);
        CHECK(eig.eigenvalues(0) == -1.0);
        CHECK(eig.eigenvalues(3) == 3.0);
        const Matrix rebuilt = eig.eigenvectors *
                               eig.eigenvalues.cast<Complex>().asDiagonal() *
                               eig.eigenvectors.adjoint();
        CHECK(testing::max_abs_diff(rebuilt, d) == 0.0);
    }
}

TEST_SUITE("trace_norm") {
    TEST_CASE("pinned values") {
        CHECK(trace_norm(diag2(1.0, -1.0)) == doctest::Approx(2.0));
        CHECK(trace_norm(Matrix::Zero(3, 3)) == doctest::Approx(0.0));
        // Orthogonal pure states.
        Matrix diff = Matrix::Zero(3, 3);
        diff(0, 0) = 1.0;
        diff(2, 2) = -1.0;
        CHECK(trace_norm(diff) == doctest::Approx(2.0));
    }

    TEST_CASE("dominates |trace|") {
        for (unsigned seed = 0; seed < 8; ++seed) {
            const Matrix A = testing::random_hermitian(12, 77u + seed);
            CHECK(trace_norm(A) >= std::abs(A.trace().real()) - 1e-12);
        }
    }
}

TEST_SUITE("matrix_sqrt_psd") {
    TEST_CASE("pinned values") {
        const Matrix r = matrix_sqrt_psd(diag2(4.0, 9.0));
        CHECK(r(0, 0).real() == doctest::Approx(2.0));
        CHECK(r(1, 1).real() == doctest::Approx(3.0));
        CHECK(testing::max_abs_diff(matrix_sqrt_psd(Matrix::Identity(3, 3)),
                                    Matrix::Identity(3, 3)) <= 1e-12);
    }

    TEST_CASE("projector is its own root") {
        ComplexVector v(3);
        v << Complex(0.6, 0.0), Complex(0.0, 0.8), Complex(0.0, 0.0);
        const Matrix proj = v * v.adjoint();
        CHECK(testing::max_abs_diff(matrix_sqrt_psd(proj), proj) <= 1e-12);
    }

    TEST_CASE("square reproduces the input on random PSD matrices") {
        for (const int dim : {5, 17, 40}) {
            const Matrix rho =
                testing::random_density(dim, 99u + static_cast<unsigned>(dim));
            const Matrix root = matrix_sqrt_psd(rho);
            const double scale = rho.cwiseAbs().maxCoeff();
            CHECK(testing::max_abs_diff(root * root, rho) <= 1e-8 * scale);
        }
    }

    TEST_CASE("genuinely indefinite input rejected") {
        CHECK_THROWS_AS(matrix_sqrt_psd(diag2(1.0, -0.5)), NotPsdError);
    }
}

TEST_SUITE("hermitian_trace_product") {
    TEST_CASE("matches direct trace") {
        const Matrix A = testing::random_hermitian(9, 5u);
        const Matrix B = testing::random_hermitian(9, 6u);
        const double direct = (A * B).trace().real();
        CHECK(hermitian_trace_product(A, B) ==
              doctest::Approx(direct).epsilon(1e-12));
    }
}
