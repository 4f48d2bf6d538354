#include "oscnc/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "oscnc/exact.hpp"

namespace oscnc {

// --------------------------- diagonalization data ---------------------------

DiagonalizationData DiagonalizationData::build(int k, int trunc, double N) {
    if (k < 0 || trunc <= 0) {
        throw ValidationError("DiagonalizationData: need k >= 0, trunc > 0");
    }
    DiagonalizationData data;
    data.k = k;
    data.trunc = trunc;
    data.T.resize(trunc, trunc);
    data.T_inv.resize(trunc, trunc);
    data.eigenvalues.resize(trunc);
    for (int j = 0; j < trunc; ++j) {
        data.eigenvalues(j) = -(j + 0.5 * k);
    }
    for (int l = 0; l < trunc; ++l) {
        for (int j = 0; j < trunc; ++j) {
            data.T(l, j) = exact::t_entry(k, l, j, N);
            data.T_inv(l, j) = exact::t_inv_entry(k, l, j, N);
        }
    }
    return data;
}

double DiagonalizationData::identity_residual(int block) const {
    block = std::min(block, trunc);
    const RealMatrix product =
        T.topRows(block) * T_inv.leftCols(block);
    double worst = 0.0;
    for (int a = 0; a < block; ++a) {
        for (int b = 0; b < block; ++b) {
            const double target = (a == b) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(product(a, b) - target));
        }
    }
    return worst;
}

double eigenvector_entry(int k, int l, int j, double N) {
    if (N == 0.0) {
        throw ZeroTemperatureBranchError(
            "eigenvector_entry: N = 0 has no finite-temperature eigenbasis; "
            "use the zero-temperature path");
    }
    return exact::t_entry(k, l, j, N);
}

double inverse_entry(int k, int l, int j, double N) {
    if (N == 0.0) {
        throw ZeroTemperatureBranchError(
            "inverse_entry: N = 0 has no finite-temperature eigenbasis; "
            "use the zero-temperature path");
    }
    return exact::t_inv_entry(k, l, j, N);
}

// ------------------------- orthonormal solution basis -----------------------

double propagator_basis_entry(int n, int k, int n0, double gamma_t, double N) {
    if (n < 0 || k < 0 || n0 < 0) {
        throw ValidationError("propagator_basis_entry: indices must be >= 0");
    }
    if (gamma_t < 0) {
        throw ValidationError("propagator_basis_entry: gamma_t must be >= 0");
    }
    if (N == 0.0) {
        throw ZeroTemperatureBranchError(
            "propagator_basis_entry: N = 0 is singular here; use the "
            "zero-temperature branch");
    }
    if (n + n0 + k > kBasisEntryCap) {
        throw CapacityError("propagator_basis_entry: n + n0 + k = " +
                            std::to_string(n + n0 + k) + " beyond cap " +
                            std::to_string(kBasisEntryCap));
    }

    // All time dependence enters through E = exp(-gamma t) in [0, 1]:
    //   chi = (N+1) - N E          >= 1
    //   r   = N/(N+1)              in [0, 1)
    //   g   = E / chi^2            in [0, 1]
    //   h   = (N+1)(1-E)/chi       in [0, 1]
    // and every summand below is nonnegative, so double precision keeps
    // ~1e-15 relative accuracy at any supported index.
    const double E = std::exp(-gamma_t);
    const double chi = (N + 1.0) - N * E;
    const double r = N / (N + 1.0);
    const double g = E / (chi * chi);
    const double h = (N + 1.0) * (1.0 - E) / chi;

    const double prefactor =
        std::sqrt(exact::binomial(k + n, k) * exact::binomial(k + n0, k)) *
        std::pow(std::sqrt(E) / chi, k) / chi;

    double sum = 0.0;
    const int jmax = std::min(n, n0);
    for (int j = 0; j <= jmax; ++j) {
        const double weight = exact::binomial(n, j) * exact::binomial(n0, j) /
                              exact::binomial(j + k, k);
        sum += weight * std::pow(r, n - j) * std::pow(g, j) *
               std::pow(h, n + n0 - 2 * j);
    }
    return prefactor * sum;
}

// ------------------------- zero-temperature closed forms --------------------

RealVector zero_temperature_populations(int n0, double gamma_t) {
    if (n0 < 0) throw ValidationError("zero_temperature_populations: n0 >= 0");
    if (gamma_t < 0) {
        throw ValidationError("zero_temperature_populations: gamma_t >= 0");
    }
    const double E = std::exp(-gamma_t);
    RealVector P(n0 + 1);
    for (int n = 0; n <= n0; ++n) {
        P(n) = exact::binomial(n0, n) * std::pow(E, n) *
               std::pow(1.0 - E, n0 - n);
    }
    return P;
}

namespace {

// Closed-form coefficient carrying C_{n+j,n+k+j}(0) to C_{n,n+k}(t) at N=0.
double zero_temp_weight(int n, int k, int j, double E, double one_minus_E) {
    return std::sqrt(exact::binomial(n + j, j) *
                     exact::binomial(n + k + j, j)) *
           std::pow(one_minus_E, j) * std::pow(E, n + 0.5 * k);
}

}  // namespace

FockDensityMatrix zero_temperature_propagate(const FockDensityMatrix& initial,
                                             double gamma_t) {
    if (gamma_t < 0) {
        throw ValidationError("zero_temperature_propagate: gamma_t >= 0");
    }
    const int d = initial.dim();
    const double E = std::exp(-gamma_t);
    const double one_minus_E = 1.0 - E;
    const Matrix& in = initial.matrix();
    Matrix out = Matrix::Zero(d, d);

    for (int k = 0; k < d; ++k) {
        // Skip diagonals the initial state does not occupy.
        bool occupied = false;
        for (int z = 0; z + k < d && !occupied; ++z) {
            occupied = in(z, z + k) != Complex(0.0, 0.0);
        }
        if (!occupied) continue;
        for (int n = 0; n + k < d; ++n) {
            Complex acc(0.0, 0.0);
            for (int j = 0; n + j + k < d; ++j) {
                const Complex c0 = in(n + j, n + k + j);
                if (c0 == Complex(0.0, 0.0)) continue;
                acc += zero_temp_weight(n, k, j, E, one_minus_E) * c0;
            }
            out(n, n + k) = acc;
            if (k > 0) out(n + k, n) = std::conj(acc);
        }
    }
    out.diagonal() = out.diagonal().real().cast<Complex>();
    return FockDensityMatrix::from_matrix(std::move(out),
                                          initial.trace_tol());
}

// ------------------------------- propagation --------------------------------

PropagatorRequest::PropagatorRequest(BathParams bath_, double t_,
                                     FockDensityMatrix initial_, int trunc_)
    : bath(bath_), t(t_), initial(std::move(initial_)), trunc(trunc_) {
    if (t < 0) throw ValidationError("PropagatorRequest: t must be >= 0");
    if (trunc < initial.dim()) {
        throw ValidationError(
            "PropagatorRequest: trunc must be >= initial.dim()");
    }
}

FockDensityMatrix propagate(const PropagatorRequest& req,
                            PropagateDiagnostics* diagnostics) {
    const FockDensityMatrix& initial = req.initial;
    const double gamma_t = req.bath.gamma * req.t;
    const double N = req.bath.N;
    const int d = initial.dim();
    const int trunc = req.trunc;

    // Source levels: stop once the population above z carries < 1e-14.
    double tail = 0.0;
    int z_cap = d - 1;
    for (; z_cap > 0; --z_cap) {
        tail += initial.population(z_cap);
        if (tail >= kInitialTailCutoff) break;
    }

    PropagateDiagnostics local;
    local.z_cap = z_cap;
    for (int n = std::max(0, trunc - 3); n < d; ++n) {
        local.tail_mass += initial.population(n);
    }
    local.tail_warning = local.tail_mass > 1e-12;
    if (diagnostics) *diagnostics = local;

    if (N < kSmallBathN) {
        return zero_temperature_propagate(initial.embedded(trunc), gamma_t);
    }

    if (trunc - 1 + z_cap > kBasisEntryCap) {
        throw CapacityError(
            "propagate: trunc + source support exceeds the closed-form cap (" +
            std::to_string(trunc - 1 + z_cap) + " > " +
            std::to_string(kBasisEntryCap) + ")");
    }

    const Matrix& in = initial.matrix();
    Matrix out = Matrix::Zero(trunc, trunc);

    std::vector<int> sources;
    sources.reserve(static_cast<size_t>(z_cap) + 1);
    for (int k = 0; k < trunc; ++k) {
        sources.clear();
        for (int z = 0; z <= z_cap && z + k < d; ++z) {
            if (in(z, z + k) != Complex(0.0, 0.0)) sources.push_back(z);
        }
        if (sources.empty()) continue;
        for (int n = 0; n + k < trunc; ++n) {
            Complex acc(0.0, 0.0);
            for (const int z : sources) {
                acc += in(z, z + k) *
                       propagator_basis_entry(n, k, z, gamma_t, N);
            }
            out(n, n + k) = acc;
            if (k > 0) out(n + k, n) = std::conj(acc);
        }
    }
    out.diagonal() = out.diagonal().real().cast<Complex>();
    return FockDensityMatrix::from_matrix(std::move(out),
                                          initial.trace_tol());
}

FockDensityMatrix propagate(const FockDensityMatrix& initial, BathParams bath,
                            double t, int trunc,
                            PropagateDiagnostics* diagnostics) {
    return propagate(PropagatorRequest(bath, t, initial, trunc), diagnostics);
}

int suggested_evolution_trunc(const FockDensityMatrix& initial, double N,
                              double tail_tol) {
    const int support = initial.max_occupied_level(tail_tol) + 1;
    const int thermal = suggested_dim_thermal(N, tail_tol);
    return support + thermal + 6;
}

}  // namespace oscnc
