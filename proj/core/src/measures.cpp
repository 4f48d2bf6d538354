#include "oscnc/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <vector>

#include "oscnc/evolution.hpp"

namespace oscnc {

namespace {

constexpr double kRangeSlack = 1e-9;
const double kSqrt2 = std::sqrt(2.0);

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

double checked_range(double v, double lo, double hi, const char* what) {
    if (std::isnan(v)) return v;
    if (v < lo - kRangeSlack || v > hi + kRangeSlack) {
        throw ValidationError(std::string(what) + " value " + fmt12(v) +
                              " outside [" + fmt12(lo) + ", " + fmt12(hi) +
                              "]");
    }
    return std::clamp(v, lo, hi);
}

}  // namespace

std::string to_string(MeasureKind kind) {
    switch (kind) {
        case MeasureKind::Hillery: return "hillery";
        case MeasureKind::Bures: return "bures";
        case MeasureKind::Dodonov: return "dodonov";
        case MeasureKind::Negativity: return "negativity";
    }
    throw ValidationError("unknown measure kind");
}

MeasureKind measure_kind_from_string(const std::string& name) {
    if (name == "hillery") return MeasureKind::Hillery;
    if (name == "bures") return MeasureKind::Bures;
    if (name == "dodonov") return MeasureKind::Dodonov;
    if (name == "negativity") return MeasureKind::Negativity;
    throw ValidationError("unknown measure: " + name);
}

double t_star(const BathParams& bath) {
    return std::log((2.0 * bath.N + 2.0) / (2.0 * bath.N + 1.0)) / bath.gamma;
}

// ---------------------------- classical states ------------------------------

FockDensityMatrix build_rho_nu_plus(double nu, const BathParams& bath,
                                    int dim) {
    if (nu < 0) throw ValidationError("build_rho_nu_plus: nu must be >= 0");
    const int x = static_cast<int>(std::floor(nu));
    const double w = nu - x;
    const double ts = t_star(bath);
    if (x + 2 > dim && !(w == 0.0 && x + 1 <= dim)) {
        throw DimensionError("build_rho_nu_plus: dim too small for nu = " +
                             fmt12(nu));
    }
    const FockDensityMatrix lower =
        propagate(fock_state(x, x + 1), bath, ts, dim);
    if (w == 0.0) return lower;
    const FockDensityMatrix upper =
        propagate(fock_state(x + 1, x + 2), bath, ts, dim);
    Matrix mixed = (1.0 - w) * lower.matrix() + w * upper.matrix();
    return FockDensityMatrix::from_matrix(std::move(mixed), 1e-9);
}

FockDensityMatrix ClassicalStateSpec::materialize() const {
    if (dim <= 0) throw DimensionError("ClassicalStateSpec: dim must be > 0");
    if (const auto* c = std::get_if<CoherentSpec>(&kind)) {
        return coherent_state(c->alpha, dim);
    }
    if (const auto* t = std::get_if<ThermalSpec>(&kind)) {
        return thermal_state(t->N_th, dim);
    }
    if (const auto* d = std::get_if<DisplacedThermalSpec>(&kind)) {
        return displaced_thermal_state(d->alpha, d->N_th, dim);
    }
    const auto& b = std::get<BroadenedMicrocanonicalSpec>(kind);
    return build_rho_nu_plus(b.nu, b.bath, dim);
}

std::string ClassicalStateSpec::describe() const {
    std::ostringstream out;
    if (const auto* c = std::get_if<CoherentSpec>(&kind)) {
        out << "coherent(alpha=" << fmt12(c->alpha.real());
        if (c->alpha.imag() != 0.0) out << "+" << fmt12(c->alpha.imag()) << "i";
        out << ")";
    } else if (const auto* t = std::get_if<ThermalSpec>(&kind)) {
        out << "thermal(N=" << fmt12(t->N_th) << ")";
    } else if (const auto* d = std::get_if<DisplacedThermalSpec>(&kind)) {
        out << "displaced_thermal(alpha=" << fmt12(d->alpha.real());
        if (d->alpha.imag() != 0.0) out << "+" << fmt12(d->alpha.imag()) << "i";
        out << ",N=" << fmt12(d->N_th) << ")";
    } else {
        const auto& b = std::get<BroadenedMicrocanonicalSpec>(kind);
        out << "rho_nu_plus(nu=" << fmt12(b.nu) << ",N=" << fmt12(b.bath.N)
            << ")";
    }
    return out.str();
}

void check_classicality(const ClassicalStateSpec& spec, double bound) {
    const FockDensityMatrix state = spec.materialize();
    const NegativityResult result = negativity(state);
    if (result.value > bound) {
        throw ValidationError("classical state " + spec.describe() +
                              " has negativity " + fmt12(result.value) +
                              " above " + fmt12(bound));
    }
}

FamilyDescriptor FamilyDescriptor::for_state(const FockDensityMatrix& rho,
                                             bool coherent, bool thermal,
                                             bool displaced_thermal,
                                             bool rho_nu_plus,
                                             BathParams rho_plus_bath) {
    FamilyDescriptor family;
    family.coherent = coherent;
    family.thermal = thermal;
    family.displaced_thermal = displaced_thermal;
    family.rho_nu_plus = rho_nu_plus;
    family.rho_plus_bath = rho_plus_bath;
    const int n_max = rho.max_occupied_level(1e-12);
    family.alpha_max = std::sqrt(2.0 * n_max) + 3.0;
    family.nth_max = 10.0;
    family.nu_max = n_max + 5.0;
    family.phase_symmetric = rho.is_diagonal(1e-12);
    family.base_dim = rho.dim();
    return family;
}

// ------------------------------ family search -------------------------------

namespace {

struct MemberAxes {
    std::string name;
    std::vector<double> lo, hi;
    std::function<ClassicalStateSpec(const std::vector<double>&)> make;
};

std::vector<MemberAxes> family_members(const FamilyDescriptor& family) {
    std::vector<MemberAxes> members;
    const int base = family.base_dim;
    if (family.coherent) {
        if (family.phase_symmetric) {
            members.push_back(
                {"coherent",
                 {0.0},
                 {family.alpha_max},
                 [base](const std::vector<double>& v) {
                     const double a = v[0];
                     return ClassicalStateSpec{
                         CoherentSpec{Complex(a, 0.0)},
                         std::max(base, suggested_dim_coherent(a))};
                 }});
        } else {
            members.push_back(
                {"coherent",
                 {-family.alpha_max, -family.alpha_max},
                 {family.alpha_max, family.alpha_max},
                 [base](const std::vector<double>& v) {
                     const Complex a(v[0], v[1]);
                     return ClassicalStateSpec{
                         CoherentSpec{a},
                         std::max(base, suggested_dim_coherent(std::abs(a)))};
                 }});
        }
    }
    if (family.thermal) {
        members.push_back(
            {"thermal",
             {0.0},
             {family.nth_max},
             [base](const std::vector<double>& v) {
                 return ClassicalStateSpec{
                     ThermalSpec{v[0]},
                     std::max(base, suggested_dim_thermal(v[0]))};
             }});
    }
    if (family.displaced_thermal) {
        if (family.phase_symmetric) {
            members.push_back(
                {"displaced_thermal",
                 {0.0, 0.0},
                 {family.alpha_max, family.nth_max},
                 [base](const std::vector<double>& v) {
                     return ClassicalStateSpec{
                         DisplacedThermalSpec{Complex(v[0], 0.0), v[1]},
                         std::max(base, suggested_dim_displaced_thermal(
                                            v[0], v[1]))};
                 }});
        } else {
            members.push_back(
                {"displaced_thermal",
                 {-family.alpha_max, -family.alpha_max, 0.0},
                 {family.alpha_max, family.alpha_max, family.nth_max},
                 [base](const std::vector<double>& v) {
                     const Complex a(v[0], v[1]);
                     return ClassicalStateSpec{
                         DisplacedThermalSpec{a, v[2]},
                         std::max(base, suggested_dim_displaced_thermal(
                                            std::abs(a), v[2]))};
                 }});
        }
    }
    if (family.rho_nu_plus) {
        const BathParams bath = family.rho_plus_bath;
        members.push_back(
            {"rho_nu_plus",
             {0.0},
             {family.nu_max},
             [base, bath](const std::vector<double>& v) {
                 const int needed =
                     static_cast<int>(std::ceil(v[0])) + 1 +
                     suggested_dim_thermal(bath.N) + 6;
                 return ClassicalStateSpec{BroadenedMicrocanonicalSpec{v[0], bath},
                                           std::max(base, needed)};
             }});
    }
    return members;
}

constexpr double kBadObjective = std::numeric_limits<double>::infinity();

class BudgetedObjective {
public:
    BudgetedObjective(const std::function<double(const ClassicalStateSpec&)>& fn,
                      const MemberAxes& axes)
        : fn_(fn), axes_(axes) {}

    double operator()(const std::vector<double>& params) {
        ++evaluations_;
        try {
            return fn_(axes_.make(params));
        } catch (const Error&) {
            // A candidate outside its representable truncation is simply a
            // bad candidate, not a failed search.
            return kBadObjective;
        }
    }

    long evaluations() const { return evaluations_; }

private:
    const std::function<double(const ClassicalStateSpec&)>& fn_;
    const MemberAxes& axes_;
    long evaluations_ = 0;
};

struct MemberResult {
    double best = kBadObjective;
    std::vector<double> arg;
    bool converged = false;
};

// Deterministic Nelder-Mead on a clamped box.
MemberResult nelder_mead(BudgetedObjective& objective,
                         const MemberAxes& axes, std::vector<double> start,
                         double start_value, long budget, double param_tol,
                         double objective_tol) {
    const size_t d = axes.lo.size();
    auto clamp_point = [&](std::vector<double>& x) {
        for (size_t i = 0; i < d; ++i) {
            x[i] = std::clamp(x[i], axes.lo[i], axes.hi[i]);
        }
    };

    struct Vertex {
        std::vector<double> x;
        double f;
    };
    std::vector<Vertex> simplex;
    simplex.push_back({start, start_value});
    long used = 0;
    for (size_t i = 0; i < d && used < budget; ++i) {
        std::vector<double> x = start;
        const double span = axes.hi[i] - axes.lo[i];
        double step = 0.05 * span;
        if (x[i] + step > axes.hi[i]) step = -step;
        x[i] += step;
        clamp_point(x);
        simplex.push_back({x, objective(x)});
        ++used;
    }

    auto order = [&]() {
        std::stable_sort(simplex.begin(), simplex.end(),
                         [](const Vertex& a, const Vertex& b) {
                             return a.f < b.f;
                         });
    };
    order();

    bool converged = false;
    while (used < budget) {
        // Convergence: simplex collapsed in both parameter and value.
        double spread = 0.0;
        for (size_t i = 1; i < simplex.size(); ++i) {
            for (size_t c = 0; c < d; ++c) {
                spread = std::max(
                    spread, std::abs(simplex[i].x[c] - simplex[0].x[c]));
            }
        }
        const double f_spread = simplex.back().f - simplex.front().f;
        if (spread < param_tol && std::abs(f_spread) < objective_tol) {
            converged = true;
            break;
        }

        std::vector<double> centroid(d, 0.0);
        for (size_t i = 0; i + 1 < simplex.size(); ++i) {
            for (size_t c = 0; c < d; ++c) centroid[c] += simplex[i].x[c];
        }
        for (size_t c = 0; c < d; ++c) centroid[c] /= (simplex.size() - 1);

        auto along = [&](double coeff) {
            std::vector<double> x(d);
            for (size_t c = 0; c < d; ++c) {
                x[c] = centroid[c] + coeff * (centroid[c] - simplex.back().x[c]);
            }
            clamp_point(x);
            return x;
        };

        const std::vector<double> xr = along(1.0);
        const double fr = objective(xr);
        ++used;
        if (fr < simplex.front().f) {
            if (used < budget) {
                const std::vector<double> xe = along(2.0);
                const double fe = objective(xe);
                ++used;
                simplex.back() = fe < fr ? Vertex{xe, fe} : Vertex{xr, fr};
            } else {
                simplex.back() = {xr, fr};
            }
        } else if (fr < simplex[simplex.size() - 2].f) {
            simplex.back() = {xr, fr};
        } else if (used < budget) {
            const bool outside = fr < simplex.back().f;
            const std::vector<double> xc = along(outside ? 0.5 : -0.5);
            const double fc = objective(xc);
            ++used;
            if (fc < std::min(fr, simplex.back().f)) {
                simplex.back() = {xc, fc};
            } else {
                // Shrink toward the best vertex.
                for (size_t i = 1; i < simplex.size() && used < budget; ++i) {
                    for (size_t c = 0; c < d; ++c) {
                        simplex[i].x[c] =
                            0.5 * (simplex[i].x[c] + simplex[0].x[c]);
                    }
                    clamp_point(simplex[i].x);
                    simplex[i].f = objective(simplex[i].x);
                    ++used;
                }
            }
        }
        order();
    }

    return {simplex.front().f, simplex.front().x, converged};
}

}  // namespace

SearchOutcome search_over_family(
    const std::function<double(const ClassicalStateSpec&)>& objective,
    const FamilyDescriptor& family, const SearchConfig& config) {
    SearchOutcome outcome;
    outcome.best = std::numeric_limits<double>::quiet_NaN();
    const std::vector<MemberAxes> members = family_members(family);
    if (members.empty()) {
        throw ValidationError("search_over_family: no family members enabled");
    }
    if (config.max_evaluations <= 0) {
        outcome.converged = false;
        return outcome;
    }

    double best = kBadObjective;
    std::optional<ClassicalStateSpec> best_spec;
    bool all_converged = true;

    for (const MemberAxes& axes : members) {
        BudgetedObjective member_objective(objective, axes);
        const size_t d = axes.lo.size();

        // Full coarse scan, endpoints included.
        const int G = std::max(config.grid_points, 1);
        std::vector<int> counter(d, 0);
        std::vector<double> point(d);
        double member_best = kBadObjective;
        std::vector<double> member_arg(d, 0.0);
        bool done = false;
        while (!done) {
            for (size_t c = 0; c < d; ++c) {
                point[c] =
                    G == 1 ? 0.5 * (axes.lo[c] + axes.hi[c])
                           : axes.lo[c] + (axes.hi[c] - axes.lo[c]) *
                                              counter[c] / (G - 1);
            }
            const double f = member_objective(point);
            if (f < member_best) {
                member_best = f;
                member_arg = point;
            }
            size_t c = 0;
            for (; c < d; ++c) {
                if (++counter[c] < G) break;
                counter[c] = 0;
            }
            done = (c == d);
        }

        MemberResult refined{member_best, member_arg, false};
        if (member_best < kBadObjective) {
            refined = nelder_mead(member_objective, axes, member_arg,
                                  member_best, config.max_evaluations,
                                  config.param_tol, config.objective_tol);
        }
        all_converged = all_converged && refined.converged;
        outcome.evaluations += member_objective.evaluations();
        if (refined.best < best) {
            best = refined.best;
            best_spec = axes.make(refined.arg);
        }
    }

    if (best < kBadObjective) {
        outcome.best = best;
        outcome.argopt = best_spec;
    }
    outcome.converged = all_converged;
    return outcome;
}

// ------------------------------- the measures -------------------------------

namespace {

// Evolved-Fock components of rho_nu_plus are reused across many nu values
// during a search.
class MaterializeCache {
public:
    const FockDensityMatrix& evolved_fock(int x, const BathParams& bath,
                                          int dim) {
        const auto key = std::make_pair(x, dim);
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            it = cache_
                     .emplace(key, propagate(fock_state(x, x + 1), bath,
                                             t_star(bath), dim))
                     .first;
        }
        return it->second;
    }

    FockDensityMatrix materialize(const ClassicalStateSpec& spec) {
        if (const auto* b =
                std::get_if<BroadenedMicrocanonicalSpec>(&spec.kind)) {
            const int x = static_cast<int>(std::floor(b->nu));
            const double w = b->nu - x;
            const FockDensityMatrix& lower =
                evolved_fock(x, b->bath, spec.dim);
            if (w == 0.0) return lower;
            const FockDensityMatrix& upper =
                evolved_fock(x + 1, b->bath, spec.dim);
            Matrix mixed = (1.0 - w) * lower.matrix() + w * upper.matrix();
            return FockDensityMatrix::from_matrix(std::move(mixed), 1e-9);
        }
        return spec.materialize();
    }

private:
    std::map<std::pair<int, int>, FockDensityMatrix> cache_;
};

double trace_distance_impl(const FockDensityMatrix& rho,
                           const FockDensityMatrix& sigma) {
    const int wd = std::max(rho.dim(), sigma.dim());
    const FockDensityMatrix a = rho.embedded(wd);
    const FockDensityMatrix b = sigma.embedded(wd);
    if (a.is_diagonal(0.0) && b.is_diagonal(0.0)) {
        double s = 0.0;
        for (int n = 0; n < wd; ++n) {
            s += std::abs(a.population(n) - b.population(n));
        }
        return s;
    }
    return trace_norm(a.matrix() - b.matrix());
}

double fidelity_impl(const Matrix& sqrt_rho, const FockDensityMatrix& rho,
                     const FockDensityMatrix& sigma) {
    const int wd = std::max(static_cast<int>(sqrt_rho.rows()), sigma.dim());
    if (rho.is_diagonal(0.0) && sigma.is_diagonal(0.0)) {
        double s = 0.0;
        const int shared = std::min(rho.dim(), sigma.dim());
        for (int n = 0; n < shared; ++n) {
            s += std::sqrt(std::max(0.0, rho.population(n)) *
                           std::max(0.0, sigma.population(n)));
        }
        return std::min(s, 1.0);
    }
    Matrix S = Matrix::Zero(wd, wd);
    S.topLeftCorner(sqrt_rho.rows(), sqrt_rho.cols()) = sqrt_rho;
    const Matrix sig = sigma.embedded(wd).matrix();
    Matrix inner = S * sig * S;
    Matrix sym = 0.5 * (inner + inner.adjoint().eval());
    const HermitianEigenDecomposition eig = hermitian_eigendecomposition(sym);
    double f = 0.0;
    for (int i = 0; i < eig.eigenvalues.size(); ++i) {
        f += std::sqrt(std::max(0.0, eig.eigenvalues(i)));
    }
    return std::min(f, 1.0);
}

double overlap_impl(const FockDensityMatrix& rho,
                    const FockDensityMatrix& sigma, double rho_purity) {
    const int shared = std::min(rho.dim(), sigma.dim());
    // Embedding adds zero rows only; the inner product lives on the shared block.
    const double inner =
        hermitian_trace_product(rho.matrix().topLeftCorner(shared, shared),
                                sigma.matrix().topLeftCorner(shared, shared));
    return inner / std::sqrt(rho_purity * sigma.purity());
}

MeasureReport finalize(MeasureKind kind, const SearchOutcome& outcome,
                       const SearchConfig& config, double lo, double hi) {
    MeasureReport report;
    report.measure = kind;
    report.value = checked_range(outcome.best, lo, hi, to_string(kind).c_str());
    report.argopt = outcome.argopt;
    report.evaluations = outcome.evaluations;
    report.converged = outcome.converged;
    report.search_tol = config.objective_tol;
    return report;
}

}  // namespace

double hillery_distance(const FockDensityMatrix& rho,
                        const ClassicalStateSpec& classical) {
    return trace_distance_impl(rho, classical.materialize());
}

double bures_fidelity(const FockDensityMatrix& rho1,
                      const FockDensityMatrix& rho2) {
    if (rho1.is_diagonal(0.0) && rho2.is_diagonal(0.0)) {
        return fidelity_impl(Matrix(), rho1, rho2);
    }
    // matrix_sqrt_psd takes the sort-only eigen path for diagonal inputs.
    const Matrix sqrt_rho = matrix_sqrt_psd(rho1.matrix());
    return fidelity_impl(sqrt_rho, rho1, rho2);
}

MeasureReport hillery_eta(const FockDensityMatrix& rho,
                          const FamilyDescriptor& family,
                          const SearchConfig& config) {
    MaterializeCache cache;
    const auto objective = [&](const ClassicalStateSpec& spec) {
        return trace_distance_impl(rho, cache.materialize(spec));
    };
    const SearchOutcome outcome =
        search_over_family(objective, family, config);
    return finalize(MeasureKind::Hillery, outcome, config, 0.0, 2.0);
}

MeasureReport bures_eta(const FockDensityMatrix& rho,
                        const FamilyDescriptor& family,
                        const SearchConfig& config) {
    MaterializeCache cache;
    const Matrix sqrt_rho = matrix_sqrt_psd(rho.matrix());
    const auto objective = [&](const ClassicalStateSpec& spec) {
        const FockDensityMatrix sigma = cache.materialize(spec);
        const double f = fidelity_impl(sqrt_rho, rho, sigma);
        return std::sqrt(2.0 * (1.0 - std::abs(f)));
    };
    const SearchOutcome outcome =
        search_over_family(objective, family, config);
    return finalize(MeasureKind::Bures, outcome, config, 0.0, kSqrt2);
}

MeasureReport dodonov_eta(const FockDensityMatrix& rho,
                          const FamilyDescriptor& family,
                          const SearchConfig& config) {
    MaterializeCache cache;
    const double rho_purity = rho.purity();
    const auto objective = [&](const ClassicalStateSpec& spec) {
        return -overlap_impl(rho, cache.materialize(spec), rho_purity);
    };
    SearchOutcome outcome = search_over_family(objective, family, config);
    if (!std::isnan(outcome.best)) outcome.best = -outcome.best;
    return finalize(MeasureKind::Dodonov, outcome, config, 0.0, 1.0);
}

MeasureReport negativity_report(const FockDensityMatrix& rho,
                                NegativityOptions options) {
    const NegativityResult result = negativity(rho, options);
    MeasureReport report;
    report.measure = MeasureKind::Negativity;
    report.value = checked_range(result.value, 0.0,
                                 std::numeric_limits<double>::infinity(),
                                 "negativity");
    report.evaluations = result.points_used;
    report.converged = result.converged;
    report.search_tol = options.target_delta;
    return report;
}

// --------------------------------- reporting --------------------------------

std::string measure_csv_header() {
    return "measure,n_or_state_id,gamma_t,N,value,converged,evaluations";
}

std::string measure_csv_row(const MeasureReport& report,
                            const std::string& state_id, double gamma_t,
                            double N) {
    std::ostringstream out;
    out << to_string(report.measure) << ',' << state_id << ','
        << fmt12(gamma_t) << ',' << fmt12(N) << ',' << fmt12(report.value)
        << ',' << (report.converged ? 1 : 0) << ',' << report.evaluations;
    return out.str();
}

}  // namespace oscnc
