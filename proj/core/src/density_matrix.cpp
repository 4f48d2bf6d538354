#include "oscnc/density_matrix.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "oscnc/linalg.hpp"

namespace oscnc {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

std::string to_string(SuperpositionFamily family) {
    switch (family) {
        case SuperpositionFamily::Consecutive: return "consecutive";
        case SuperpositionFamily::Skip: return "skip";
        case SuperpositionFamily::Equal: return "equal";
        case SuperpositionFamily::Geometric: return "geometric";
    }
    throw ValidationError("unknown superposition family");
}

SuperpositionFamily superposition_family_from_string(const std::string& name) {
    if (name == "consecutive") return SuperpositionFamily::Consecutive;
    if (name == "skip") return SuperpositionFamily::Skip;
    if (name == "equal") return SuperpositionFamily::Equal;
    if (name == "geometric") return SuperpositionFamily::Geometric;
    throw ValidationError("unknown superposition family: " + name);
}

// ------------------------------ FockDensityMatrix ---------------------------

FockDensityMatrix::FockDensityMatrix(Matrix entries, double trace_tol)
    : entries_(std::move(entries)), trace_tol_(trace_tol) {}

FockDensityMatrix FockDensityMatrix::from_matrix(Matrix entries,
                                                 double trace_tol) {
    if (entries.rows() == 0 || entries.rows() != entries.cols()) {
        throw DimensionError("density matrix must be square and nonempty");
    }
    const int d = static_cast<int>(entries.rows());
    double herm = 0.0;
    for (int n = 0; n < d; ++n) {
        for (int m = n; m < d; ++m) {
            herm = std::max(herm,
                            std::abs(entries(n, m) - std::conj(entries(m, n))));
        }
    }
    if (herm > kHermiticityTol) {
        throw ValidationError("density matrix not Hermitian: defect " +
                              fmt17(herm));
    }
    double tr = 0.0;
    for (int n = 0; n < d; ++n) {
        const Complex diag = entries(n, n);
        if (diag.real() < -1e-12) {
            throw ValidationError("negative diagonal entry at level " +
                                  std::to_string(n));
        }
        tr += diag.real();
    }
    if (std::abs(tr - 1.0) > trace_tol) {
        throw ValidationError("trace deviates from 1 by " +
                              fmt17(std::abs(tr - 1.0)));
    }
    return FockDensityMatrix(std::move(entries), trace_tol);
}

FockDensityMatrix FockDensityMatrix::from_pure(const ComplexVector& amplitudes,
                                               double trace_tol) {
    const double norm = amplitudes.norm();
    if (std::abs(norm - 1.0) > 1e-12) {
        throw ValidationError("pure-state amplitudes not normalized: |c| = " +
                              fmt17(norm));
    }
    Matrix rho = amplitudes * amplitudes.adjoint();
    return from_matrix(std::move(rho), trace_tol);
}

double FockDensityMatrix::trace_error() const {
    return std::abs(entries_.trace().real() - 1.0);
}

double FockDensityMatrix::hermiticity_error() const {
    double herm = 0.0;
    for (int n = 0; n < dim(); ++n) {
        for (int m = n; m < dim(); ++m) {
            herm = std::max(
                herm, std::abs(entries_(n, m) - std::conj(entries_(m, n))));
        }
    }
    return herm;
}

double FockDensityMatrix::purity() const {
    return entries_.squaredNorm();  // Tr rho^2 = sum |C_nm|^2 for Hermitian rho
}

double FockDensityMatrix::mean_photon_number() const {
    double s = 0.0;
    for (int n = 0; n < dim(); ++n) s += n * entries_(n, n).real();
    return s;
}

bool FockDensityMatrix::is_diagonal(double tol) const {
    for (int n = 0; n < dim(); ++n) {
        for (int m = n + 1; m < dim(); ++m) {
            if (std::abs(entries_(n, m)) > tol) return false;
        }
    }
    return true;
}

int FockDensityMatrix::max_occupied_level(double population_floor) const {
    for (int n = dim() - 1; n >= 0; --n) {
        if (entries_(n, n).real() > population_floor) return n;
    }
    return 0;
}

double FockDensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(entries_,
                                                 Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

void FockDensityMatrix::validate_psd() const {
    const double lo = min_eigenvalue();
    if (lo < -kPsdTol) {
        throw NotPsdError("density matrix eigenvalue " + fmt17(lo) +
                          " below -1e-9");
    }
}

FockDensityMatrix FockDensityMatrix::embedded(int new_dim) const {
    if (new_dim < dim()) {
        throw DimensionError("embedded(): target dim smaller than current");
    }
    if (new_dim == dim()) return *this;
    Matrix bigger = Matrix::Zero(new_dim, new_dim);
    bigger.topLeftCorner(dim(), dim()) = entries_;
    return FockDensityMatrix(std::move(bigger), trace_tol_);
}

void FockDensityMatrix::save(std::ostream& out) const {
    out << "dim " << dim() << "\n";
    for (int n = 0; n < dim(); ++n) {
        for (int m = 0; m < dim(); ++m) {
            if (m) out << "  ";
            out << fmt17(entries_(n, m).real()) << " "
                << fmt17(entries_(n, m).imag());
        }
        out << "\n";
    }
}

FockDensityMatrix FockDensityMatrix::load(std::istream& in) {
    std::string tag;
    int d = 0;
    if (!(in >> tag >> d) || tag != "dim" || d <= 0) {
        throw SerializationError("expected header line 'dim D'");
    }
    Matrix entries(d, d);
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            double re = 0, im = 0;
            if (!(in >> re >> im)) {
                throw SerializationError("truncated matrix payload at row " +
                                         std::to_string(n));
            }
            entries(n, m) = Complex(re, im);
        }
    }
    return from_matrix(std::move(entries));
}

// ------------------------------ constructors --------------------------------

FockDensityMatrix fock_state(int n0, int dim) {
    if (n0 < 0) throw DimensionError("fock_state: n0 must be >= 0");
    if (n0 >= dim) {
        throw DimensionError("fock_state: n0 = " + std::to_string(n0) +
                             " outside dim = " + std::to_string(dim));
    }
    Matrix rho = Matrix::Zero(dim, dim);
    rho(n0, n0) = 1.0;
    return FockDensityMatrix::from_matrix(std::move(rho));
}

FockDensityMatrix coherent_state(Complex alpha, int dim) {
    if (dim <= 0) throw DimensionError("coherent_state: dim must be > 0");
    ComplexVector c(dim);
    c(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < dim; ++n) {
        c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    }
    const double captured = c.squaredNorm();
    if (captured < 1.0 - 1e-10) {
        throw TruncationError("coherent_state: dim " + std::to_string(dim) +
                              " captures only " + fmt17(captured) +
                              " of the norm for |alpha| = " +
                              fmt17(std::abs(alpha)));
    }
    c /= std::sqrt(captured);
    return FockDensityMatrix::from_pure(c);
}

FockDensityMatrix thermal_state(double N, int dim) {
    if (dim <= 0) throw DimensionError("thermal_state: dim must be > 0");
    if (N < 0) throw ValidationError("thermal_state: N must be >= 0");
    Matrix rho = Matrix::Zero(dim, dim);
    if (N == 0.0) {
        rho(0, 0) = 1.0;
        return FockDensityMatrix::from_matrix(std::move(rho));
    }
    const double r = N / (N + 1.0);
    const double tail = std::pow(r, dim);
    if (tail > 1e-12) {
        throw TruncationError("thermal_state: tail mass " + fmt17(tail) +
                              " above 1e-12 at dim " + std::to_string(dim));
    }
    double sum = 0.0;
    for (int n = 0; n < dim; ++n) {
        const double p = std::pow(r, n) / (N + 1.0);
        rho(n, n) = p;
        sum += p;
    }
    for (int n = 0; n < dim; ++n) rho(n, n) /= sum;
    return FockDensityMatrix::from_matrix(std::move(rho));
}

FockDensityMatrix displaced_thermal_state(Complex alpha, double N_th, int dim) {
    const FockDensityMatrix th = thermal_state(N_th, dim);
    if (alpha == Complex(0.0, 0.0)) return th;

    // D(alpha) = exp(alpha a^dag - conj(alpha) a); the generator is
    // skew-Hermitian, so i*G is Hermitian and D = V e^{-i Lambda} V^dag.
    Matrix gen = Matrix::Zero(dim, dim);
    for (int n = 0; n + 1 < dim; ++n) {
        const double s = std::sqrt(static_cast<double>(n + 1));
        gen(n + 1, n) += alpha * s;        // alpha a^dag
        gen(n, n + 1) -= std::conj(alpha) * s;  // -conj(alpha) a
    }
    const Matrix herm = Complex(0, 1) * gen;
    const HermitianEigenDecomposition eig = hermitian_eigendecomposition(herm);
    ComplexVector phases(dim);
    for (int n = 0; n < dim; ++n) {
        phases(n) = std::exp(Complex(0, -eig.eigenvalues(n)));
    }
    const Matrix displacement =
        eig.eigenvectors * phases.asDiagonal() * eig.eigenvectors.adjoint();

    Matrix rho = displacement * th.matrix() * displacement.adjoint();
    const double deficit = std::abs(rho.trace().real() - 1.0);
    if (deficit > 1e-8) {
        throw TruncationError(
            "displaced_thermal_state: displaced mass leaks past dim (trace "
            "deficit " + fmt17(deficit) + ")");
    }
    // The unitary conjugation keeps Hermiticity to roundoff; symmetrize the
    // residue so construction-time validation sees an exact pair.
    Matrix sym = 0.5 * (rho + rho.adjoint().eval());
    sym.diagonal() = sym.diagonal().real().cast<Complex>();
    return FockDensityMatrix::from_matrix(std::move(sym), 1e-8);
}

FockDensityMatrix superposition_family(SuperpositionFamily family, int n,
                                       int dim) {
    if (n < 1) throw DimensionError("superposition_family: n must be >= 1");
    ComplexVector c = ComplexVector::Zero(dim);
    const int top = suggested_dim_superposition(family, n) - 1;
    if (top >= dim) {
        throw DimensionError("superposition_family: level " +
                             std::to_string(top) + " outside dim " +
                             std::to_string(dim));
    }
    switch (family) {
        case SuperpositionFamily::Consecutive:
            c(n - 1) = c(n) = 1.0 / std::sqrt(2.0);
            break;
        case SuperpositionFamily::Skip:
            c(n - 1) = c(n + 1) = 1.0 / std::sqrt(2.0);
            break;
        case SuperpositionFamily::Equal:
            for (int m = 1; m <= n; ++m) c(m) = 1.0 / std::sqrt(n);
            break;
        case SuperpositionFamily::Geometric:
            for (int m = 1; m <= n - 1; ++m) {
                c(2 * m - 1) = std::pow(2.0, -0.5 * m);
            }
            c(2 * n - 1) = std::pow(2.0, -0.5 * (n - 1));
            break;
    }
    return FockDensityMatrix::from_pure(c);
}

// ------------------------------ sizing helpers -------------------------------

int suggested_dim_fock(int n0) { return n0 + 1; }

int suggested_dim_coherent(double alpha_abs) {
    return static_cast<int>(
        std::ceil(alpha_abs * alpha_abs + 10.0 * alpha_abs + 20.0));
}

int suggested_dim_thermal(double N, double tail_tol) {
    if (N <= 0.0) return 4;
    const double r = N / (N + 1.0);
    const int needed =
        static_cast<int>(std::ceil(std::log(tail_tol) / std::log(r))) + 1;
    return std::max(needed, 4);
}

int suggested_dim_displaced_thermal(double alpha_abs, double N_th,
                                    double tail_tol) {
    return suggested_dim_coherent(alpha_abs) +
           suggested_dim_thermal(N_th, tail_tol);
}

int suggested_dim_superposition(SuperpositionFamily family, int n) {
    switch (family) {
        case SuperpositionFamily::Consecutive: return n + 1;
        case SuperpositionFamily::Skip: return n + 2;
        case SuperpositionFamily::Equal: return n + 1;
        case SuperpositionFamily::Geometric: return 2 * n;
    }
    throw ValidationError("unknown superposition family");
}

}  // namespace oscnc
