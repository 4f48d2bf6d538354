// ode_oracle.hpp — independent cross-check for the analytic propagator.
//
// Integrates the truncated number-basis master equation
//   dC_{n,m}/d(gamma t) = sqrt((n+1)(m+1)) (N+1) C_{n+1,m+1}
//                         - ((n+m)N + N + (n+m)/2) C_{n,m}
//                         + sqrt(n m) N C_{n-1,m-1}
// with an adaptive embedded Runge-Kutta stepper at tolerance 1e-12.
// Shares nothing with the closed-form code path beyond the state type.

#pragma once

#include "oscnc/bath.hpp"
#include "oscnc/density_matrix.hpp"

namespace oscnc {

inline constexpr double kOracleAbsTol = 1e-12;
inline constexpr double kOracleRelTol = 1e-12;

// Integrates `initial` (embedded on `trunc` levels) to dimensionless time
// gamma_t. The caller picks trunc so top-level populations stay below
// ~1e-12; a final population above 1e-10 on the top level raises
// TruncationError. Step-size failure raises IntegrationError.
FockDensityMatrix ode_oracle(const FockDensityMatrix& initial, BathParams bath,
                             double gamma_t, int trunc);

}  // namespace oscnc
