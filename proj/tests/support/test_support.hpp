// test_support.hpp — independent oracles and generators used across suites.
// Everything here is deliberately written from the defining formulas, not
// from the library code paths it checks.

#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "oscnc/density_matrix.hpp"

namespace oscnc::testing {

inline long double binom_ld(int a, int b) {
    if (b < 0 || b > a) return 0.0L;
    long double r = 1.0L;
    for (int i = 0; i < b; ++i) r = r * (a - i) / (i + 1);
    return r;
}

// The propagator basis entry written out literally: alternating double sum
// over (i, nu) with the inner hypergeometric-style sum over j, accumulated
// in extended precision. Usable for small indices only (cancellation grows
// with n + n0 + k).
inline double basis_entry_literal(int n, int k, int n0, double gamma_t,
                                  double N) {
    const long double Nl = N;
    const long double gt = gamma_t;
    const long double D = (Nl + 1) * std::exp(gt) - Nl;
    const long double y = (Nl + 1) / Nl * std::exp(gt);
    long double total = 0;
    for (int i = 0; i <= n; ++i) {
        for (int v = 0; v <= n0; ++v) {
            long double inner = 0;
            for (int j = 0; j <= std::min(i, v); ++j) {
                inner += binom_ld(i, j) * binom_ld(v, j) /
                         binom_ld(j + k, k) * std::pow(y, j);
            }
            const long double sign = ((i + v) % 2) ? -1.0L : 1.0L;
            total += sign * binom_ld(n, i) * binom_ld(n0, v) *
                     std::exp((k + 2) * gt / 2) /
                     std::pow(D, i + v + k + 1) * inner;
        }
    }
    return static_cast<double>(std::sqrt(binom_ld(k + n, k) *
                                         binom_ld(k + n0, k)) *
                               std::pow(Nl / (Nl + 1), n) * total);
}

// Zero-temperature populations written out literally as the alternating sum
// sum_{m=n}^{n0} C(n0,m) C(m,n) (-1)^(n+m) e^(-m gamma_t).
inline double zero_temp_population_literal(int n, int n0, double gamma_t) {
    long double total = 0;
    for (int m = n; m <= n0; ++m) {
        const long double sign = ((n + m) % 2) ? -1.0L : 1.0L;
        total += binom_ld(n0, m) * binom_ld(m, n) * sign *
                 std::exp(-static_cast<long double>(m) * gamma_t);
    }
    return static_cast<double>(total);
}

// Plain Laguerre L_n^{(0)} by upward recurrence in extended precision.
inline long double laguerre_ld(int n, long double u) {
    long double lm1 = 1.0L, l = 1.0L - u;
    if (n == 0) return lm1;
    for (int i = 1; i < n; ++i) {
        const long double next = ((2 * i + 1 - u) * l - i * lm1) / (i + 1);
        lm1 = l;
        l = next;
    }
    return l;
}

// Radial negativity oracle for DIAGONAL states: their Wigner function is
// W(r) = (1/pi) sum_n P_n (-1)^n L_n(2 r^2) e^(-r^2), so
// eta_W = 2 pi Int_0^R (|W| - W) r dr. Composite Simpson.
inline double radial_negativity_oracle(const std::vector<double>& populations,
                                       double radius, int samples = 40001) {
    const long double pi = 3.14159265358979323846264338328L;
    const auto w_at = [&](long double r) {
        const long double u = 2 * r * r;
        const long double e = std::exp(-r * r);
        long double w = 0;
        for (size_t n = 0; n < populations.size(); ++n) {
            if (populations[n] == 0.0) continue;
            const long double sign = (n % 2) ? -1.0L : 1.0L;
            w += populations[n] * sign * laguerre_ld(static_cast<int>(n), u);
        }
        return w * e / pi;
    };
    if (samples % 2 == 0) ++samples;
    const long double h = radius / (samples - 1);
    long double acc = 0;
    for (int i = 0; i < samples; ++i) {
        const long double r = i * h;
        const long double w = w_at(r);
        const long double f = (std::abs(w) - w) * r;
        const long double weight = (i == 0 || i == samples - 1) ? 1.0L
                                   : (i % 2 ? 4.0L : 2.0L);
        acc += weight * f;
    }
    return static_cast<double>(2 * pi * acc * h / 3);
}

// Wigner value from the defining integral
//   W(x,p) = (1/pi) Int e^{2ipy} <x-y|rho|x+y> dy
// with Hermite-function position wavefunctions. Simpson over y.
inline double wigner_integral_oracle(const Matrix& C, double x, double p,
                                     double y_half_range = 14.0,
                                     int samples = 8001) {
    const int d = static_cast<int>(C.rows());
    const long double pi = 3.14159265358979323846264338328L;
    const auto hermite_column = [&](long double u) {
        std::vector<long double> h(static_cast<size_t>(d));
        h[0] = std::pow(pi, -0.25L) * std::exp(-u * u / 2);
        if (d > 1) h[1] = std::sqrt(2.0L) * u * h[0];
        for (int n = 1; n + 1 < d; ++n) {
            h[static_cast<size_t>(n) + 1] =
                std::sqrt(2.0L / (n + 1)) * u * h[static_cast<size_t>(n)] -
                std::sqrt(static_cast<long double>(n) / (n + 1)) *
                    h[static_cast<size_t>(n) - 1];
        }
        return h;
    };
    if (samples % 2 == 0) ++samples;
    const long double h = 2 * y_half_range / (samples - 1);
    long double acc_re = 0;
    for (int i = 0; i < samples; ++i) {
        const long double y = -y_half_range + i * h;
        const auto left = hermite_column(x - y);
        const auto right = hermite_column(x + y);
        std::complex<long double> bracket = 0;
        for (int n = 0; n < d; ++n) {
            if (left[static_cast<size_t>(n)] == 0.0L) continue;
            std::complex<long double> row = 0;
            for (int m = 0; m < d; ++m) {
                const Complex c = C(n, m);
                row += std::complex<long double>(c.real(), c.imag()) *
                       right[static_cast<size_t>(m)];
            }
            bracket += left[static_cast<size_t>(n)] * row;
        }
        const std::complex<long double> phase(std::cos(2 * p * y),
                                              std::sin(2 * p * y));
        const long double weight = (i == 0 || i == samples - 1) ? 1.0L
                                   : (i % 2 ? 4.0L : 2.0L);
        acc_re += weight * (phase * bracket).real();
    }
    return static_cast<double>(acc_re * h / (3 * pi));
}

// Seeded random Hermitian matrix with entries O(1).
inline Matrix random_hermitian(int dim, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix A(dim, dim);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < dim; ++m) A(n, m) = Complex(gauss(rng), gauss(rng));
    }
    Matrix H = 0.5 * (A + A.adjoint().eval());
    H.diagonal() = H.diagonal().real().cast<Complex>();
    return H;
}

// Seeded random PSD matrix with unit trace (a valid density matrix).
inline Matrix random_density(int dim, unsigned seed, int rank = 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    if (rank <= 0) rank = dim;
    Matrix B(dim, rank);
    for (int n = 0; n < dim; ++n) {
        for (int m = 0; m < rank; ++m) B(n, m) = Complex(gauss(rng), gauss(rng));
    }
    Matrix rho = B * B.adjoint();
    rho /= rho.trace().real();
    rho = 0.5 * (rho + rho.adjoint().eval());
    rho.diagonal() = rho.diagonal().real().cast<Complex>();
    return rho;
}

inline double max_abs_diff(const Matrix& A, const Matrix& B) {
    return (A - B).cwiseAbs().maxCoeff();
}

}  // namespace oscnc::testing
