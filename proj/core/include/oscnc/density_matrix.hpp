// density_matrix.hpp — truncated number-basis density matrices and the
// standard state constructors (Fock, coherent, thermal, displaced thermal,
// and the four finite-superposition families).

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <string>

#include "oscnc/errors.hpp"

namespace oscnc {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

enum class SuperpositionFamily { Consecutive, Skip, Equal, Geometric };

std::string to_string(SuperpositionFamily family);
SuperpositionFamily superposition_family_from_string(const std::string& name);

// Hermitian, unit-trace matrix C_{n,m} on the Fock levels 0..dim-1.
//
// Construction validates Hermiticity (1e-12 elementwise), the trace
// (|tr - 1| <= trace_tol, default 1e-10) and real nonnegative diagonals
// (>= -1e-12). Positive semidefiniteness (smallest eigenvalue >= -1e-9)
// costs an eigendecomposition and is checked by validate_psd().
// Instances are immutable; all operations on them are pure.
class FockDensityMatrix {
public:
    static constexpr double kDefaultTraceTol = 1e-10;
    static constexpr double kHermiticityTol = 1e-12;
    static constexpr double kPsdTol = 1e-9;

    static FockDensityMatrix from_matrix(Matrix entries,
                                         double trace_tol = kDefaultTraceTol);
    // rho = c c^dag from normalized amplitudes (|c| must be 1 within 1e-12).
    static FockDensityMatrix from_pure(const ComplexVector& amplitudes,
                                       double trace_tol = kDefaultTraceTol);

    int dim() const { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }
    Complex entry(int n, int m) const { return entries_(n, m); }
    double population(int n) const { return entries_(n, n).real(); }
    double trace_tol() const { return trace_tol_; }

    double trace_error() const;        // |sum of diagonal - 1|
    double hermiticity_error() const;  // max |C_nm - conj(C_mn)|
    double purity() const;             // Tr rho^2
    double mean_photon_number() const; // sum n C_nn
    bool is_diagonal(double tol = 1e-12) const;
    // Largest level whose population exceeds `population_floor`.
    int max_occupied_level(double population_floor = 1e-12) const;

    double min_eigenvalue() const;
    // Throws ValidationError / NotPsdError when the full invariant set fails.
    void validate_psd() const;

    // Zero-padded copy on a larger truncation (exact embedding).
    FockDensityMatrix embedded(int new_dim) const;

    // Plain-text format: first line "dim D", then D rows of D "re im"
    // pairs at 17 significant digits.
    void save(std::ostream& out) const;
    static FockDensityMatrix load(std::istream& in);

private:
    FockDensityMatrix(Matrix entries, double trace_tol);

    Matrix entries_;
    double trace_tol_;
};

// ---------------------------- state constructors ----------------------------

// |n0><n0| on dim levels.
FockDensityMatrix fock_state(int n0, int dim);

// Truncated |alpha><alpha|, renormalized; requires truncated norm >= 1-1e-10.
FockDensityMatrix coherent_state(Complex alpha, int dim);

// Diagonal P_n = N^n/(N+1)^(n+1), renormalized over the truncation;
// requires tail mass (N/(N+1))^dim <= 1e-12 (any dim when N = 0).
FockDensityMatrix thermal_state(double N, int dim);

// D(alpha) rho_th D(alpha)^-1 with D built by exponentiating the truncated
// generator alpha*a^dag - conj(alpha)*a.
FockDensityMatrix displaced_thermal_state(Complex alpha, double N_th, int dim);

// The four pure families, indexed by n >= 1:
//   consecutive: (|n-1> + |n>)/sqrt(2)
//   skip:        (|n-1> + |n+1>)/sqrt(2)
//   equal:       (1/sqrt(n)) sum_{m=1..n} |m>
//   geometric:   sum_{m=1..n-1} 2^(-m/2)|2m-1> + 2^(-(n-1)/2)|2n-1>
FockDensityMatrix superposition_family(SuperpositionFamily family, int n, int dim);

// ------------------------------ sizing helpers ------------------------------

int suggested_dim_fock(int n0);
int suggested_dim_coherent(double alpha_abs);
int suggested_dim_thermal(double N, double tail_tol = 1e-12);
int suggested_dim_displaced_thermal(double alpha_abs, double N_th,
                                    double tail_tol = 1e-12);
int suggested_dim_superposition(SuperpositionFamily family, int n);

}  // namespace oscnc
