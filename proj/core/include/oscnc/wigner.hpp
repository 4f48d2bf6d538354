// wigner.hpp — phase-space synthesis and negativity.
//
// Convention: W(x,p) = (1/pi) Int e^{2ipy} <x-y|rho|x+y> dy with
// dimensionless quadratures (hbar = 1), so Int W dx dp = Tr rho and the
// vacuum peak is 1/pi. The negativity integrand |W| - W equals twice the
// absolute negative volume; it is integrated exactly as written.

#pragma once

#include <Eigen/Dense>

#include <iosfwd>

#include "oscnc/density_matrix.hpp"
#include "oscnc/errors.hpp"

namespace oscnc {

struct WignerGridSpec {
    double x_min = 0, x_max = 0, p_min = 0, p_max = 0;
    int n_x = 0, n_p = 0;

    static WignerGridSpec square(double radius, int points);
    // Extent radius sqrt(2 n_max) + 4 from the highest significantly
    // occupied level of rho.
    static WignerGridSpec covering(const FockDensityMatrix& rho,
                                   int points = 256);

    double dx() const { return (x_max - x_min) / n_x; }
    double dp() const { return (p_max - p_min) / n_p; }
    // Midpoint sample coordinates.
    double x_at(int i) const { return x_min + (i + 0.5) * dx(); }
    double p_at(int j) const { return p_min + (j + 0.5) * dp(); }
    WignerGridSpec refined() const;  // doubled sample counts, same extents
};

struct WignerGrid {
    WignerGridSpec spec;
    RealMatrix values;  // values(i, j) = W(x_at(i), p_at(j))

    double integral() const;           // sum W dx dp
    double negativity_integral() const;  // sum (|W| - W) dx dp

    // CSV rows "x,p,w" under that header.
    void save_csv(std::ostream& out) const;
};

// Exact single-point evaluation (no grid).
double wigner_at(const FockDensityMatrix& rho, double x, double p);

// Synthesizes W on the grid from the Fock-basis kernels (associated
// Laguerre recurrences with per-term scaling; supports levels up to 120).
// Raises ExtentError when boundary |W| exceeds 1e-10 * max |W|.
WignerGrid wigner_synthesize(const FockDensityMatrix& rho,
                             const WignerGridSpec& spec, int threads = 1);

struct NegativityOptions {
    int initial_points = 256;
    int max_refinements = 4;
    double target_delta = 1e-4;  // converged when one doubling moves eta_W less
    int threads = 1;
};

struct NegativityResult {
    double value = 0.0;
    double refinement_delta = 0.0;  // |last - previous| across the final doubling
    int points_used = 0;            // samples per axis on the final grid
    bool converged = false;
};

// eta_W = Int (|W| - W) dx dp by midpoint quadrature with grid-doubling
// refinement. Throws QuadratureError when the doubling deltas have not
// reached target_delta within max_refinements.
NegativityResult negativity(const FockDensityMatrix& rho,
                            NegativityOptions options = {});
NegativityResult negativity(const FockDensityMatrix& rho,
                            const WignerGridSpec& initial_spec,
                            NegativityOptions options = {});

}  // namespace oscnc
