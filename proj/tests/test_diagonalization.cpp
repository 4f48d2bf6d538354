#include <doctest.h>

#include <cmath>

#include "oscnc/evolution.hpp"
#include "test_support.hpp"

using namespace oscnc;

TEST_SUITE("eigenvector_entry") {
    TEST_CASE("hand-evaluated values") {
        CHECK(eigenvector_entry(0, 0, 0, 1.0) == doctest::Approx(1.0));
        CHECK(eigenvector_entry(0, 1, 0, 1.0) == doctest::Approx(0.5));
        // k=1, l=1, j=1 at N=1: sqrt(2) * (1/2) * (1 - 1/2)
        CHECK(eigenvector_entry(1, 1, 1, 1.0) ==
              doctest::Approx(std::sqrt(2.0) / 4.0).epsilon(1e-15));
    }

    TEST_CASE("zero-temperature branch error") {
        CHECK_THROWS_AS(eigenvector_entry(0, 1, 1, 0.0),
                        ZeroTemperatureBranchError);
        CHECK_THROWS_AS(inverse_entry(2, 0, 0, 0.0),
                        ZeroTemperatureBranchError);
    }
}

TEST_SUITE("inverse_entry") {
    TEST_CASE("hand-evaluated values") {
        CHECK(inverse_entry(0, 0, 0, 1.0) == doctest::Approx(0.5));
    }

    TEST_CASE("row-column product reproduces the Kronecker delta") {
        // 10x10 window of the product at M = 80, N = 0.5.
        const int M = 80;
        const double N = 0.5;
        const int k = 1;
        double worst = 0.0;
        for (int a = 0; a < 10; ++a) {
            for (int b = 0; b < 10; ++b) {
                double acc = 0.0;
                for (int m = 0; m < M; ++m) {
                    acc += eigenvector_entry(k, a, m, N) *
                           inverse_entry(k, m, b, N);
                }
                worst = std::max(worst, std::abs(acc - (a == b ? 1.0 : 0.0)));
            }
        }
        CHECK(worst <= 1e-8);
    }
}

TEST_SUITE("DiagonalizationData") {
    TEST_CASE("eigenvalues strictly decreasing, lambda_j = -(j + k/2)") {
        const DiagonalizationData data = DiagonalizationData::build(3, 12, 0.5);
        for (int j = 0; j < data.trunc; ++j) {
            CHECK(data.eigenvalues(j) == doctest::Approx(-(j + 1.5)));
            if (j) CHECK(data.eigenvalues(j) < data.eigenvalues(j - 1));
        }
    }

    TEST_CASE("identity residual where the inner sum has converged") {
        // Convergence of the truncated product depends on N through
        // r = N/(N+1); these block sizes sit inside the converged window.
        for (const int k : {0, 2}) {
            const DiagonalizationData cold =
                DiagonalizationData::build(k, 80, 0.06);
            CHECK(cold.identity_residual(20) <= 1e-8);
            const DiagonalizationData warm =
                DiagonalizationData::build(k, 80, 0.5);
            CHECK(warm.identity_residual(10) <= 1e-8);
        }
    }

    TEST_CASE("residual grows toward the truncation corner") {
        const DiagonalizationData warm = DiagonalizationData::build(0, 60, 0.5);
        CHECK(warm.identity_residual(10) <= 1e-8);
        // The full-block residual includes the unconverged corner.
        CHECK(warm.identity_residual(60) > 1e-4);
    }

    TEST_CASE("entries match the scalar accessors") {
        const DiagonalizationData data = DiagonalizationData::build(2, 8, 0.3);
        for (int l = 0; l < 8; ++l) {
            for (int j = 0; j < 8; ++j) {
                CHECK(data.T(l, j) == eigenvector_entry(2, l, j, 0.3));
                CHECK(data.T_inv(l, j) == inverse_entry(2, l, j, 0.3));
            }
        }
    }
}
