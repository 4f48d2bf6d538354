#include "oscnc/wigner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <vector>

#include "oscnc/parallel.hpp"

namespace oscnc {

namespace {

constexpr double kPi = std::numbers::pi;

// Scaled Fock-basis kernel column for one diagonal offset k at one
// phase-space point. K_n carries the full magnitude
//   sqrt(n!/(n+k)!) (sqrt(2) r)^k e^{-r^2} L_n^{(k)}(2 r^2),
// which is bounded by ~1 for physical kernels, so the recurrence never
// overflows. The angular factor e^{i k theta} is applied by the caller.
class ScaledLaguerreColumn {
public:
    ScaledLaguerreColumn(int k, double r_sq) : k_(k), u_(2.0 * r_sq) {
        // K_0 = (sqrt(2) r)^k e^{-r^2} / sqrt(k!)
        double log_k0 = -r_sq;
        if (k > 0) {
            if (r_sq == 0.0) {
                zero_ = true;
            } else {
                log_k0 += 0.5 * k_ * std::log(2.0 * r_sq) -
                          0.5 * std::lgamma(k_ + 1.0);
            }
        }
        prev_ = 0.0;
        cur_ = zero_ ? 0.0 : std::exp(log_k0);
        n_ = 0;
    }

    double value() const { return cur_; }

    void advance() {
        // Laguerre three-term recurrence rewritten for the scaled K_n.
        const double qn = std::sqrt((n_ + 1.0) / (n_ + 1.0 + k_));
        const double qnm1 =
            n_ > 0 ? std::sqrt(n_ / static_cast<double>(n_ + k_)) : 0.0;
        const double next =
            (qn * ((2.0 * n_ + k_ + 1.0 - u_) * cur_ -
                   (n_ + k_) * qnm1 * prev_)) /
            (n_ + 1.0);
        prev_ = cur_;
        cur_ = next;
        ++n_;
    }

private:
    int k_;
    double u_;
    double prev_ = 0.0;
    double cur_ = 0.0;
    int n_ = 0;
    bool zero_ = false;
};

struct DiagonalIndex {
    int k;
    int n_max;  // largest n with C_{n,n+k} present
};

std::vector<DiagonalIndex> occupied_diagonals(const Matrix& C) {
    const int d = static_cast<int>(C.rows());
    std::vector<DiagonalIndex> out;
    for (int k = 0; k < d; ++k) {
        int n_max = -1;
        for (int n = 0; n + k < d; ++n) {
            if (C(n, n + k) != Complex(0.0, 0.0)) n_max = n;
        }
        if (n_max >= 0) out.push_back({k, n_max});
    }
    return out;
}

double wigner_point(const Matrix& C,
                    const std::vector<DiagonalIndex>& diagonals, double x,
                    double p) {
    const double r_sq = x * x + p * p;
    const double theta = std::atan2(p, x);
    double w = 0.0;
    for (const auto& diag : diagonals) {
        ScaledLaguerreColumn column(diag.k, r_sq);
        const Complex angular =
            diag.k == 0 ? Complex(1.0, 0.0)
                        : std::polar(1.0, diag.k * theta);
        double acc_re = 0.0;
        for (int n = 0; n <= diag.n_max; ++n) {
            const Complex c = C(n, n + diag.k);
            if (c != Complex(0.0, 0.0)) {
                const double sign = (n & 1) ? -1.0 : 1.0;
                const double kernel = sign * column.value();
                if (diag.k == 0) {
                    acc_re += c.real() * kernel;
                } else {
                    // pair (n, n+k) and its mirror: 2 Re[C W]
                    acc_re += 2.0 * (c * angular).real() * kernel;
                }
            }
            column.advance();
        }
        w += acc_re;
    }
    return w / kPi;
}

}  // namespace

// -------------------------------- grid types --------------------------------

WignerGridSpec WignerGridSpec::square(double radius, int points) {
    if (radius <= 0 || points <= 0) {
        throw ValidationError("WignerGridSpec: radius and points must be > 0");
    }
    return {-radius, radius, -radius, radius, points, points};
}

WignerGridSpec WignerGridSpec::covering(const FockDensityMatrix& rho,
                                        int points) {
    const int n_max = rho.max_occupied_level(1e-12);
    return square(std::sqrt(2.0 * n_max) + 4.0, points);
}

WignerGridSpec WignerGridSpec::refined() const {
    WignerGridSpec out = *this;
    out.n_x *= 2;
    out.n_p *= 2;
    return out;
}

double WignerGrid::integral() const {
    return values.sum() * spec.dx() * spec.dp();
}

double WignerGrid::negativity_integral() const {
    double s = 0.0;
    for (int i = 0; i < values.rows(); ++i) {
        for (int j = 0; j < values.cols(); ++j) {
            const double w = values(i, j);
            s += std::abs(w) - w;
        }
    }
    return s * spec.dx() * spec.dp();
}

void WignerGrid::save_csv(std::ostream& out) const {
    out << "x,p,w\n";
    char buf[96];
    for (int i = 0; i < spec.n_x; ++i) {
        for (int j = 0; j < spec.n_p; ++j) {
            std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g\n",
                          spec.x_at(i), spec.p_at(j), values(i, j));
            out << buf;
        }
    }
}

// --------------------------------- synthesis --------------------------------

double wigner_at(const FockDensityMatrix& rho, double x, double p) {
    const auto diagonals = occupied_diagonals(rho.matrix());
    return wigner_point(rho.matrix(), diagonals, x, p);
}

WignerGrid wigner_synthesize(const FockDensityMatrix& rho,
                             const WignerGridSpec& spec, int threads) {
    if (spec.n_x <= 0 || spec.n_p <= 0 || spec.x_max <= spec.x_min ||
        spec.p_max <= spec.p_min) {
        throw ValidationError("wigner_synthesize: malformed grid spec");
    }
    const auto diagonals = occupied_diagonals(rho.matrix());
    WignerGrid grid{spec, RealMatrix::Zero(spec.n_x, spec.n_p)};
    const Matrix& C = rho.matrix();
    parallel_for(0, spec.n_x, threads, [&](int i) {
        const double x = spec.x_at(i);
        for (int j = 0; j < spec.n_p; ++j) {
            grid.values(i, j) = wigner_point(C, diagonals, x, spec.p_at(j));
        }
    });

    double boundary = 0.0;
    for (int i = 0; i < spec.n_x; ++i) {
        boundary = std::max({boundary, std::abs(grid.values(i, 0)),
                             std::abs(grid.values(i, spec.n_p - 1))});
    }
    for (int j = 0; j < spec.n_p; ++j) {
        boundary = std::max({boundary, std::abs(grid.values(0, j)),
                             std::abs(grid.values(spec.n_x - 1, j))});
    }
    const double peak = grid.values.cwiseAbs().maxCoeff();
    if (boundary > 1e-10 * peak) {
        throw ExtentError(
            "wigner_synthesize: boundary |W| not negligible; enlarge extents");
    }
    return grid;
}

// -------------------------------- negativity --------------------------------

NegativityResult negativity(const FockDensityMatrix& rho,
                            const WignerGridSpec& initial_spec,
                            NegativityOptions options) {
    WignerGridSpec spec = initial_spec;
    double previous = -1.0;
    double value = 0.0;
    double delta = 0.0;
    for (int round = 0; round <= options.max_refinements; ++round) {
        const WignerGrid grid = wigner_synthesize(rho, spec, options.threads);
        value = grid.negativity_integral();
        if (previous >= 0.0) {
            delta = std::abs(value - previous);
            if (delta < options.target_delta) {
                return {value, delta, spec.n_x, true};
            }
        }
        previous = value;
        spec = spec.refined();
    }
    throw QuadratureError(
        "negativity: refinement did not converge (last delta " +
        std::to_string(delta) + ")");
}

NegativityResult negativity(const FockDensityMatrix& rho,
                            NegativityOptions options) {
    return negativity(rho, WignerGridSpec::covering(rho, options.initial_points),
                      options);
}

}  // namespace oscnc
