#include "oscnc/ode_oracle.hpp"

#include <boost/numeric/odeint.hpp>

#include <cmath>
#include <string>
#include <vector>

#include "oscnc/errors.hpp"

namespace oscnc {

namespace {

using State = std::vector<Complex>;

// Right-hand side of the truncated number-basis master equation in the
// dimensionless time tau = gamma t.
class MasterEquationRhs {
public:
    MasterEquationRhs(int trunc, double N) : trunc_(trunc), N_(N) {
        roots_.resize(static_cast<size_t>(trunc) + 1);
        for (int n = 0; n <= trunc; ++n) {
            roots_[static_cast<size_t>(n)] = std::sqrt(static_cast<double>(n));
        }
    }

    void operator()(const State& c, State& dcdt, double /*tau*/) const {
        const int M = trunc_;
        for (int n = 0; n < M; ++n) {
            for (int m = 0; m < M; ++m) {
                Complex v = -((n + m) * N_ + N_ + 0.5 * (n + m)) * c[idx(n, m)];
                if (n + 1 < M && m + 1 < M) {
                    v += root(n + 1) * root(m + 1) * (N_ + 1.0) *
                         c[idx(n + 1, m + 1)];
                }
                if (n >= 1 && m >= 1) {
                    v += root(n) * root(m) * N_ * c[idx(n - 1, m - 1)];
                }
                dcdt[idx(n, m)] = v;
            }
        }
    }

private:
    size_t idx(int n, int m) const {
        return static_cast<size_t>(n) * static_cast<size_t>(trunc_) +
               static_cast<size_t>(m);
    }
    double root(int n) const { return roots_[static_cast<size_t>(n)]; }

    int trunc_;
    double N_;
    std::vector<double> roots_;
};

}  // namespace

FockDensityMatrix ode_oracle(const FockDensityMatrix& initial, BathParams bath,
                             double gamma_t, int trunc) {
    if (gamma_t < 0) throw ValidationError("ode_oracle: gamma_t must be >= 0");
    if (trunc < initial.dim()) {
        throw ValidationError("ode_oracle: trunc must be >= initial.dim()");
    }

    const Matrix start = initial.embedded(trunc).matrix();
    State y(static_cast<size_t>(trunc) * static_cast<size_t>(trunc));
    for (int n = 0; n < trunc; ++n) {
        for (int m = 0; m < trunc; ++m) {
            y[static_cast<size_t>(n) * static_cast<size_t>(trunc) +
              static_cast<size_t>(m)] = start(n, m);
        }
    }

    if (gamma_t > 0) {
        namespace ode = boost::numeric::odeint;
        const MasterEquationRhs rhs(trunc, bath.N);
        auto stepper = ode::make_controlled(
            kOracleAbsTol, kOracleRelTol,
            ode::runge_kutta_cash_karp54<State>());
        try {
            ode::integrate_adaptive(stepper, rhs, y, 0.0, gamma_t,
                                    std::min(1e-3, gamma_t));
        } catch (const std::exception& e) {
            throw IntegrationError(std::string("ode_oracle: ") + e.what());
        }
    }

    Matrix out(trunc, trunc);
    for (int n = 0; n < trunc; ++n) {
        for (int m = 0; m < trunc; ++m) {
            out(n, m) = y[static_cast<size_t>(n) * static_cast<size_t>(trunc) +
                          static_cast<size_t>(m)];
        }
    }
    const double top = out(trunc - 1, trunc - 1).real();
    if (top > 1e-10) {
        throw TruncationError(
            "ode_oracle: top-level population " + std::to_string(top) +
            " indicates trunc too small");
    }
    // Integration keeps Hermiticity to roundoff; restore the exact pair so
    // the state validates.
    Matrix sym = 0.5 * (out + out.adjoint().eval());
    sym.diagonal() = sym.diagonal().real().cast<Complex>();
    return FockDensityMatrix::from_matrix(std::move(sym), 1e-8);
}

}  // namespace oscnc
