// sweep.hpp — experiment sweeps: parse a plain-text config, evaluate one
// measure per (state, gamma_t, N) cell, emit deterministic CSV.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "oscnc/density_matrix.hpp"
#include "oscnc/measures.hpp"

namespace oscnc {

enum class Scenario {
    StaticMeasures,
    ZeroTempDynamics,
    FiniteTempNegativity,
    SuperpositionFamilies,
    SingleState,
};

std::string to_string(Scenario scenario);

struct FamilyFlags {
    bool coherent = false;
    bool thermal = false;
    bool displaced_thermal = false;
    bool rho_nu_plus = false;
    bool any() const { return coherent || thermal || displaced_thermal || rho_nu_plus; }
};

struct SweepConfig {
    Scenario scenario = Scenario::StaticMeasures;
    std::vector<int> n_values;
    std::vector<double> gamma_t{0.0};
    std::vector<double> bath_N{0.0};
    std::vector<MeasureKind> measures;
    FamilyFlags family;
    std::optional<SuperpositionFamily> family_kind;  // superposition_families
    std::string single_state;                        // single_state
    int truncation = 0;  // 0 = auto (max n + headroom)
    long budget = 200;
    int grid_points = 16;
    std::string out_path;
};

struct ConfigIssue {
    int line = 0;  // 0 when not tied to a specific line
    std::string field;
    std::string message;
};

struct ParsedConfig {
    std::optional<SweepConfig> config;
    std::vector<ConfigIssue> issues;
};

// Plain-text "key = value" lines; '#' starts a comment; repeated keys and
// whitespace-separated values form lists; "a..b" ranges allowed for n.
// Returns either a validated config or the complete list of violations.
ParsedConfig parse_sweep_config(std::istream& in);
ParsedConfig load_sweep_config(const std::string& path);

struct SweepRow {
    std::string state_id;
    double gamma_t = 0.0;
    double N = 0.0;
    MeasureReport report;
    bool failed = false;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> summary;  // peak line per (measure, gamma_t, N) curve
};

// Evaluates every cell in configuration order. Cells run in a work pool
// when threads > 1; results are buffered and written in order, so output
// bytes never depend on scheduling. A failing cell becomes a row with
// value nan / converged false and the sweep continues.
SweepResult run_sweep(const SweepConfig& config, int threads = 1);

// Header comment line carries a timestamp unless with_timestamp is false;
// every value is range-checked against its measure before writing.
void write_sweep_csv(const SweepResult& result, std::ostream& out,
                     bool with_timestamp = true);

// State specifier grammar shared by the CLI and single_state sweeps:
//   fock:N | coherent:RE[:IM] | thermal:NTH | displaced:RE:IM:NTH |
//   consecutive:N | skip:N | equal:N | geometric:N
// dim = 0 picks the suggested truncation for the state.
FockDensityMatrix parse_state_spec(const std::string& spec, int dim = 0);

}  // namespace oscnc
