// exact.hpp — exact-integer/rational kernels behind the analytic evolution.
// GMP lives entirely inside the implementation; this surface returns doubles
// rounded once from exact values.

#pragma once

namespace oscnc::exact {

// Largest index the cached exact binomial table supports.
inline constexpr int kBinomialCap = 400;

// C(a, b) from an exact big-integer evaluation, rounded once to double.
// Zero for b < 0 or b > a; throws CapacityError above kBinomialCap.
double binomial(int a, int b);

// sum_{i=0}^{min(l,j)} (-1)^i C(l,i) C(j,i) / C(k+i,k) * N^-i, evaluated in
// exact rational arithmetic (N taken exactly from its double value).
// Requires N > 0.
double alternating_entry_sum(int k, int l, int j, double N);

// Entry (l, j) of the diagonalizing matrix for diagonal offset k:
//   sqrt(C(k+l,k)) (N/(N+1))^l * alternating_entry_sum(k, l, j, N)
double t_entry(int k, int l, int j, double N);

// Entry (l, j) of its inverse:
//   sqrt(C(k+j,k)) C(k+l,k) N^l/(N+1)^(l+k+1) * alternating_entry_sum(k, l, j, N)
double t_inv_entry(int k, int l, int j, double N);

}  // namespace oscnc::exact
