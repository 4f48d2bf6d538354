// measures.hpp — relative non-classicality measures (Hillery, Bures,
// Dodonov) over parameterized classical-state families, plus the
// broadened-microcanonical family built from decohered Fock states.

#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "oscnc/bath.hpp"
#include "oscnc/density_matrix.hpp"
#include "oscnc/linalg.hpp"
#include "oscnc/wigner.hpp"

namespace oscnc {

enum class MeasureKind { Hillery, Bures, Dodonov, Negativity };

std::string to_string(MeasureKind kind);
MeasureKind measure_kind_from_string(const std::string& name);

// Time after which a decohering Fock state's Wigner function is
// nonnegative: t* = (1/gamma) log((2N+2)/(2N+1)).
double t_star(const BathParams& bath);

// ---------------------------- classical states ------------------------------

struct CoherentSpec {
    Complex alpha;
};
struct ThermalSpec {
    double N_th;
};
struct DisplacedThermalSpec {
    Complex alpha;
    double N_th;
};
// rho_nu_plus = (x+1-nu) rho_x+ + (nu-x) rho_{x+1}+ with x = floor(nu),
// where rho_n+ is |n><n| evolved to t* in `bath`.
struct BroadenedMicrocanonicalSpec {
    double nu;
    BathParams bath;
};

struct ClassicalStateSpec {
    std::variant<CoherentSpec, ThermalSpec, DisplacedThermalSpec,
                 BroadenedMicrocanonicalSpec>
        kind;
    int dim = 0;

    FockDensityMatrix materialize() const;
    std::string describe() const;
};

FockDensityMatrix build_rho_nu_plus(double nu, const BathParams& bath, int dim);

// Every classical-family state must be (numerically) nonnegative in phase
// space; this runs the negativity quadrature and throws ValidationError
// above the given bound. Used by tests; too costly for search inner loops.
void check_classicality(const ClassicalStateSpec& spec, double bound = 1e-3);

// ------------------------------ family search -------------------------------

// Which classical families to search over, with their parameter boxes.
// Boxes default to |alpha| <= sqrt(2 n_max)+3, N_th in [0, 10],
// nu in [0, n_max+5] for the state under test. For phase-symmetric
// (diagonal) states the coherent search runs over real alpha >= 0 only.
struct FamilyDescriptor {
    bool coherent = true;
    bool thermal = false;
    bool displaced_thermal = false;
    bool rho_nu_plus = false;

    double alpha_max = 5.0;
    double nth_max = 10.0;
    double nu_max = 10.0;
    BathParams rho_plus_bath{1.0, 0.0};
    bool phase_symmetric = true;
    int base_dim = 0;

    static FamilyDescriptor for_state(const FockDensityMatrix& rho,
                                      bool coherent = true,
                                      bool thermal = false,
                                      bool displaced_thermal = false,
                                      bool rho_nu_plus = false,
                                      BathParams rho_plus_bath = {1.0, 0.0});
};

struct SearchConfig {
    int grid_points = 16;        // coarse scan points per axis
    long max_evaluations = 200;  // simplex-refinement budget per family member
    double param_tol = 1e-5;
    double objective_tol = 1e-6;
};

struct SearchOutcome {
    double best = 0.0;
    std::optional<ClassicalStateSpec> argopt;
    long evaluations = 0;
    bool converged = false;
};

// Minimizes `objective` over every enabled family member: full coarse grid,
// then Nelder-Mead refinement from the best grid point, per member;
// deterministic for a fixed config. max_evaluations <= 0 performs no
// evaluations and reports converged = false.
SearchOutcome search_over_family(
    const std::function<double(const ClassicalStateSpec&)>& objective,
    const FamilyDescriptor& family, const SearchConfig& config);

// ------------------------------- the measures -------------------------------

struct MeasureReport {
    MeasureKind measure;
    double value = 0.0;
    std::optional<ClassicalStateSpec> argopt;
    long evaluations = 0;
    bool converged = false;
    double search_tol = 0.0;
};

// Trace-norm distance ||rho - rho_cl||.
double hillery_distance(const FockDensityMatrix& rho,
                        const ClassicalStateSpec& classical);

// Uhlmann fidelity Tr sqrt(sqrt(rho1) rho2 sqrt(rho1)), in [0, 1].
double bures_fidelity(const FockDensityMatrix& rho1,
                      const FockDensityMatrix& rho2);

// inf ||rho - rho_cl|| over the family; range [0, 2].
MeasureReport hillery_eta(const FockDensityMatrix& rho,
                          const FamilyDescriptor& family,
                          const SearchConfig& config = {});

// inf sqrt(2 (1 - B[rho, rho_cl])) over the family; range [0, sqrt(2)].
MeasureReport bures_eta(const FockDensityMatrix& rho,
                        const FamilyDescriptor& family,
                        const SearchConfig& config = {});

// sup Tr[rho' rho_cl'] with rho' = rho / sqrt(Tr rho^2); a classicality
// measure in [0, 1] (1 when rho itself is in the family).
MeasureReport dodonov_eta(const FockDensityMatrix& rho,
                          const FamilyDescriptor& family,
                          const SearchConfig& config = {});

// Absolute measure wrapped in the same report shape (no search; the
// evaluations field carries the final per-axis sample count).
MeasureReport negativity_report(const FockDensityMatrix& rho,
                                NegativityOptions options = {});

// CSV row "measure,n_or_state_id,gamma_t,N,value,converged,evaluations".
std::string measure_csv_header();
std::string measure_csv_row(const MeasureReport& report,
                            const std::string& state_id, double gamma_t,
                            double N);

}  // namespace oscnc
