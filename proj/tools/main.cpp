// oscnc — exact decohering-oscillator evolution and non-classicality sweeps.
//
// Subcommands:
//   evolve    single state -> serialized density matrix
//   measure   single state + measure -> CSV report row
//   sweep     config file -> CSV artifact + peak summary
//   selftest  quick oracle-equivalence and identity checks

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oscnc/density_matrix.hpp"
#include "oscnc/evolution.hpp"
#include "oscnc/measures.hpp"
#include "oscnc/ode_oracle.hpp"
#include "oscnc/sweep.hpp"
#include "oscnc/wigner.hpp"

namespace {

using namespace oscnc;

struct CommonStateOptions {
    std::string state;
    double gamma_t = 0.0;
    double bath_N = 0.0;
    int trunc = 0;
};

FockDensityMatrix build_and_evolve(const CommonStateOptions& opt) {
    FockDensityMatrix state = parse_state_spec(opt.state, 0);
    if (opt.gamma_t > 0.0) {
        int trunc = opt.trunc;
        if (trunc <= 0) {
            trunc = suggested_evolution_trunc(state, opt.bath_N);
        }
        trunc = std::max(trunc, state.dim());
        state = propagate(state, BathParams(1.0, opt.bath_N), opt.gamma_t,
                          trunc);
    } else if (opt.trunc > state.dim()) {
        state = state.embedded(opt.trunc);
    }
    return state;
}

int run_evolve(const CommonStateOptions& opt, const std::string& out_path) {
    const FockDensityMatrix state = build_and_evolve(opt);
    if (out_path.empty()) {
        state.save(std::cout);
    } else {
        std::ofstream out(out_path);
        if (!out) {
            std::cerr << "error: cannot open " << out_path << "\n";
            return 1;
        }
        state.save(out);
    }
    return 0;
}

int run_measure(const CommonStateOptions& opt, const std::string& measure_name,
                const std::vector<std::string>& family_names, long budget,
                int grid_points, int threads) {
    const FockDensityMatrix state = build_and_evolve(opt);
    const MeasureKind kind = measure_kind_from_string(measure_name);

    MeasureReport report;
    if (kind == MeasureKind::Negativity) {
        NegativityOptions options;
        options.threads = threads;
        report = negativity_report(state, options);
    } else {
        FamilyFlags flags;
        for (const std::string& f : family_names) {
            if (f == "coherent") flags.coherent = true;
            else if (f == "thermal") flags.thermal = true;
            else if (f == "displaced_thermal") flags.displaced_thermal = true;
            else if (f == "rho_nu_plus") flags.rho_nu_plus = true;
            else {
                std::cerr << "error: unknown family member '" << f << "'\n";
                return 1;
            }
        }
        if (!flags.any()) flags.coherent = true;
        const FamilyDescriptor family = FamilyDescriptor::for_state(
            state, flags.coherent, flags.thermal, flags.displaced_thermal,
            flags.rho_nu_plus, BathParams(1.0, opt.bath_N));
        SearchConfig search;
        search.max_evaluations = budget;
        search.grid_points = grid_points;
        switch (kind) {
            case MeasureKind::Hillery:
                report = hillery_eta(state, family, search);
                break;
            case MeasureKind::Bures:
                report = bures_eta(state, family, search);
                break;
            case MeasureKind::Dodonov:
                report = dodonov_eta(state, family, search);
                break;
            default: break;
        }
    }

    std::cout << measure_csv_header() << "\n"
              << measure_csv_row(report, opt.state, opt.gamma_t, opt.bath_N)
              << "\n";
    if (report.argopt) {
        std::cout << "# argopt: " << report.argopt->describe() << "\n";
    }
    return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& out_override,
                  int threads) {
    const ParsedConfig parsed = load_sweep_config(config_path);
    if (!parsed.config) {
        std::cerr << "config errors:\n";
        for (const ConfigIssue& issue : parsed.issues) {
            std::cerr << "  ";
            if (issue.line > 0) std::cerr << "line " << issue.line << ", ";
            if (!issue.field.empty()) std::cerr << issue.field << ": ";
            std::cerr << issue.message << "\n";
        }
        return 1;
    }
    SweepConfig config = *parsed.config;
    if (!out_override.empty()) config.out_path = out_override;

    const SweepResult result = run_sweep(config, threads);

    if (config.out_path.empty()) {
        write_sweep_csv(result, std::cout);
    } else {
        std::ofstream out(config.out_path);
        if (!out) {
            std::cerr << "error: cannot open " << config.out_path << "\n";
            return 1;
        }
        write_sweep_csv(result, out);
        std::cout << "wrote " << result.rows.size() << " rows to "
                  << config.out_path << "\n";
    }
    for (const std::string& line : result.summary) {
        std::cout << line << "\n";
    }
    int failures = 0;
    for (const SweepRow& row : result.rows) {
        if (row.failed) {
            ++failures;
            std::cerr << "row failed: " << row.state_id << " gamma_t="
                      << row.gamma_t << " N=" << row.N << ": " << row.error
                      << "\n";
        }
    }
    if (failures) {
        std::cerr << failures << " row(s) failed\n";
    }
    return 0;
}

int run_selftest(int threads) {
    int failures = 0;
    const auto check = [&](const std::string& name, bool ok,
                           const std::string& detail) {
        std::cout << (ok ? "ok   " : "FAIL ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << "\n";
        if (!ok) ++failures;
    };
    const auto fmt = [](double v) {
        std::ostringstream os;
        os.precision(3);
        os << v;
        return os.str();
    };

    // Basis orthonormality at t = 0.
    {
        double worst = 0.0;
        for (const double N : {0.06, 0.5, 2.0}) {
            for (int k = 0; k <= 3; ++k) {
                for (int n = 0; n <= 8; ++n) {
                    for (int n0 = 0; n0 <= 8; ++n0) {
                        const double v =
                            propagator_basis_entry(n, k, n0, 0.0, N);
                        worst = std::max(
                            worst, std::abs(v - (n == n0 ? 1.0 : 0.0)));
                    }
                }
            }
        }
        check("basis orthonormality at t=0", worst <= 1e-12,
              "max defect " + fmt(worst));
    }

    // Closed form vs direct integration.
    {
        double worst = 0.0;
        struct Case { int n0; double N, gt; };
        for (const Case c : {Case{3, 0.5, 0.5}, Case{2, 0.0, 0.7},
                             Case{5, 0.06, 0.3}}) {
            const FockDensityMatrix initial = fock_state(c.n0, c.n0 + 1);
            const int trunc = suggested_evolution_trunc(initial, c.N);
            const FockDensityMatrix a =
                propagate(initial, BathParams(1.0, c.N), c.gt, trunc);
            const FockDensityMatrix b =
                ode_oracle(initial, BathParams(1.0, c.N), c.gt, trunc);
            worst = std::max(
                worst,
                (a.matrix() - b.matrix()).cwiseAbs().maxCoeff());
        }
        check("propagator matches direct integration", worst <= 1e-8,
              "max diff " + fmt(worst));
    }

    // Transformation-matrix inversion identity.
    {
        const DiagonalizationData data = DiagonalizationData::build(1, 80, 0.5);
        const double residual = data.identity_residual(10);
        check("T * T_inv identity (10x10 block)", residual <= 1e-8,
              "residual " + fmt(residual));
    }

    // Steady state.
    {
        const FockDensityMatrix evolved =
            propagate(fock_state(1, 2), BathParams(1.0, 0.5), 20.0, 60);
        const FockDensityMatrix th = thermal_state(0.5, 60);
        const double diff =
            (evolved.matrix() - th.matrix()).cwiseAbs().maxCoeff();
        check("thermal steady state", diff <= 1e-6, "max diff " + fmt(diff));
    }

    // Phase-space values and negativity.
    {
        const double w0 = wigner_at(fock_state(0, 4), 0.0, 0.0);
        const double w1 = wigner_at(fock_state(1, 4), 0.0, 0.0);
        const double inv_pi = 1.0 / std::numbers::pi;
        check("vacuum peak 1/pi", std::abs(w0 - inv_pi) <= 1e-12,
              fmt(w0));
        check("first excited dip -1/pi", std::abs(w1 + inv_pi) <= 1e-12,
              fmt(w1));
        NegativityOptions options;
        options.threads = threads;
        const NegativityResult coh =
            negativity(coherent_state(1.3, suggested_dim_coherent(1.3)),
                       options);
        check("coherent state nonnegative", coh.value <= 1e-4,
              "eta_W " + fmt(coh.value));
    }

    // Dodonov closed form at n = 1.
    {
        const FockDensityMatrix one = fock_state(1, 2);
        const FamilyDescriptor family = FamilyDescriptor::for_state(one);
        const MeasureReport report = dodonov_eta(one, family);
        const double expected = std::exp(-1.0);
        check("dodonov overlap closed form (n=1)",
              std::abs(report.value - expected) <= 1e-3,
              fmt(report.value) + " vs " + fmt(expected));
    }

    std::cout << (failures ? "FAILED" : "all ok") << "\n";
    return failures ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact decohering-oscillator evolution and non-classicality "
                 "measures"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    int threads = 1;
    int seed = 0;
    app.add_option("--threads", threads, "worker threads for sweeps/quadrature")
        ->capture_default_str();
    app.add_option("--seed", seed,
                   "reserved; current algorithms are deterministic")
        ->capture_default_str();

    CommonStateOptions state_opt;
    std::string out_path, measure_name, config_path;
    std::vector<std::string> family_names;
    long budget = 200;
    int grid_points = 16;

    CLI::App* evolve = app.add_subcommand("evolve",
                                          "evolve one state and print/serialize "
                                          "the density matrix");
    evolve->add_option("--state", state_opt.state,
                       "fock:N | coherent:RE[:IM] | thermal:NTH | "
                       "displaced:RE:IM:NTH | consecutive:N | skip:N | "
                       "equal:N | geometric:N")
        ->required();
    evolve->add_option("--gamma-t", state_opt.gamma_t, "dimensionless time");
    evolve->add_option("--bath-n", state_opt.bath_N, "mean thermal photons");
    evolve->add_option("--trunc", state_opt.trunc, "working truncation");
    evolve->add_option("--out", out_path, "output file (default stdout)");

    CLI::App* measure = app.add_subcommand("measure",
                                           "evaluate one measure on one state");
    measure->add_option("--state", state_opt.state, "state spec")->required();
    measure->add_option("--gamma-t", state_opt.gamma_t, "dimensionless time");
    measure->add_option("--bath-n", state_opt.bath_N, "mean thermal photons");
    measure->add_option("--trunc", state_opt.trunc, "working truncation");
    measure->add_option("--measure", measure_name,
                        "hillery | bures | dodonov | negativity")
        ->required();
    measure->add_option("--family", family_names,
                        "classical family members to search");
    measure->add_option("--budget", budget, "refinement evaluations per member");
    measure->add_option("--grid-points", grid_points, "coarse scan per axis");

    CLI::App* sweep = app.add_subcommand("sweep", "run a config-driven sweep");
    sweep->add_option("--config", config_path, "sweep config file")->required();
    sweep->add_option("--out", out_path, "override configured output path");

    CLI::App* selftest =
        app.add_subcommand("selftest", "run quick consistency checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(evolve)) return run_evolve(state_opt, out_path);
        if (app.got_subcommand(measure)) {
            return run_measure(state_opt, measure_name, family_names, budget,
                               grid_points, threads);
        }
        if (app.got_subcommand(sweep)) {
            return run_sweep_cmd(config_path, out_path, threads);
        }
        if (app.got_subcommand(selftest)) return run_selftest(threads);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
