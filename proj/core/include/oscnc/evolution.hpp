// evolution.hpp — exact number-basis propagator for the damped oscillator.
//
// The k-th diagonal of C_{n,m} evolves independently under a tridiagonal
// generator with eigenvalues lambda_j = -(j + k/2) (in units of gamma).
// This module exposes the closed-form orthonormal propagator basis, the
// diagonalizing matrices T / T^-1, the zero-temperature closed forms, and
// full density-matrix propagation assembled from them.

#pragma once

#include <Eigen/Dense>

#include "oscnc/bath.hpp"
#include "oscnc/density_matrix.hpp"
#include "oscnc/errors.hpp"

namespace oscnc {

// Supported cap on n + n0 + k for closed-form basis entries.
inline constexpr int kBasisEntryCap = 120;
// Bath N below this routes propagation to the zero-temperature branch
// (relative error O(N) of the exact finite-N result).
inline constexpr double kSmallBathN = 1e-8;
// The initial-state sum over source levels z stops once the population
// above z falls below this.
inline constexpr double kInitialTailCutoff = 1e-14;

// ------------------------- diagonalization matrices -------------------------

// Truncated T, T^-1 and eigenvalues for one diagonal offset k. Entries are
// exact values rounded to double. The product T * T_inv approximates the
// identity only where the truncated inner sum has converged: entry (a, b)
// needs trunc well beyond (a + b + k) / log((N+1)/N), so the trustworthy
// block shrinks as N grows. identity_residual() measures the defect.
struct DiagonalizationData {
    int k = 0;
    int trunc = 0;
    RealMatrix T;
    RealMatrix T_inv;
    RealVector eigenvalues;  // lambda_j = -(j + k/2), strictly decreasing

    static DiagonalizationData build(int k, int trunc, double N);

    static int default_buffer(int trunc) { return trunc / 4; }

    // max |(T * T_inv - I)(a, b)| over a, b < block.
    double identity_residual(int block) const;
};

// lth entry of the jth eigenvector (exact evaluation, rounded once).
// Requires N > 0; N = 0 raises ZeroTemperatureBranchError.
double eigenvector_entry(int k, int l, int j, double N);

// (l, j) entry of the inverse transformation. Same domain as above.
double inverse_entry(int k, int l, int j, double N);

// ------------------------- orthonormal solution basis -----------------------

// C_{n,n+k}[n0, t]: the propagator basis entry that carries a unit initial
// condition at source level n0 to level n on diagonal k after time
// gamma_t, at bath occupation N > 0. Equals the printed alternating triple
// sum; evaluated through an algebraically identical single sum of
// nonnegative terms, so plain doubles hold ~1e-15 relative accuracy.
// The same formula serves the lower triangle with (n, n0) read as (m, m0).
double propagator_basis_entry(int n, int k, int n0, double gamma_t, double N);

// ------------------------- zero-temperature closed forms --------------------

// Populations P_n (n = 0..n0) of an initial |n0><n0| in a zero-temperature
// bath: P_n = C(n0,n) E^n (1-E)^(n0-n) with E = exp(-gamma_t), the binomial
// form of the alternating closed-form sum. Sums to 1 within 1e-12.
RealVector zero_temperature_populations(int n0, double gamma_t);

// Full N = 0 propagation; each diagonal k evolves by
//   C_{n,n+k}(t) = sum_j sqrt(C(n+j,j) C(n+k+j,j)) (1-E)^j E^(n+k/2) C_{n+j,n+k+j}(0).
FockDensityMatrix zero_temperature_propagate(const FockDensityMatrix& initial,
                                             double gamma_t);

// ------------------------------- propagation --------------------------------

struct PropagatorRequest {
    BathParams bath;
    double t = 0.0;            // physical time; dynamics depend on gamma*t
    FockDensityMatrix initial;
    int trunc = 0;             // working truncation, >= initial.dim()

    PropagatorRequest(BathParams bath_, double t_, FockDensityMatrix initial_,
                      int trunc_);
};

struct PropagateDiagnostics {
    double tail_mass = 0.0;   // initial population in the top 3 levels of trunc
    bool tail_warning = false;
    int z_cap = 0;            // last source level included in the assembly
};

// Evolves `initial` for time t. N = 0 (and N < kSmallBathN) dispatches to
// the zero-temperature branch; otherwise the upper triangle is assembled
// from propagator_basis_entry and mirrored, so Hermiticity is exact by
// construction. Throws CapacityError when trunc + source support exceeds
// the closed-form cap.
FockDensityMatrix propagate(const PropagatorRequest& req,
                            PropagateDiagnostics* diagnostics = nullptr);

FockDensityMatrix propagate(const FockDensityMatrix& initial, BathParams bath,
                            double t, int trunc,
                            PropagateDiagnostics* diagnostics = nullptr);

// Truncation that keeps the evolved state's tail below tail_tol for any
// time horizon (steady-state thermal tail plus the initial support).
int suggested_evolution_trunc(const FockDensityMatrix& initial, double N,
                              double tail_tol = 1e-12);

}  // namespace oscnc
