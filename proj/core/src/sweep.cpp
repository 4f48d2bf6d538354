#include "oscnc/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "oscnc/evolution.hpp"

namespace oscnc {

namespace {

std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

std::string to_string(Scenario scenario) {
    switch (scenario) {
        case Scenario::StaticMeasures: return "static_measures";
        case Scenario::ZeroTempDynamics: return "zero_temp_dynamics";
        case Scenario::FiniteTempNegativity: return "finite_temp_negativity";
        case Scenario::SuperpositionFamilies: return "superposition_families";
        case Scenario::SingleState: return "single_state";
    }
    throw ValidationError("unknown scenario");
}

// ------------------------------- state parsing ------------------------------

FockDensityMatrix parse_state_spec(const std::string& spec, int dim) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string token;
    while (std::getline(ss, token, ':')) parts.push_back(token);
    if (parts.empty()) throw ValidationError("empty state spec");

    const auto number = [&](size_t i, const char* what) {
        if (i >= parts.size()) {
            throw ValidationError("state spec '" + spec + "' missing " + what);
        }
        try {
            size_t used = 0;
            const double v = std::stod(parts[i], &used);
            if (used != parts[i].size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ValidationError("state spec '" + spec +
                                  "': bad number '" + parts[i] + "'");
        }
    };
    const auto integer = [&](size_t i, const char* what) {
        const double v = number(i, what);
        if (v != std::floor(v)) {
            throw ValidationError("state spec '" + spec +
                                  "': expected integer for " + what);
        }
        return static_cast<int>(v);
    };

    const std::string& kind = parts[0];
    if (kind == "fock") {
        const int n0 = integer(1, "level");
        const int d = dim > 0 ? dim : suggested_dim_fock(n0);
        return fock_state(n0, d);
    }
    if (kind == "coherent") {
        const double re = number(1, "re(alpha)");
        const double im = parts.size() > 2 ? number(2, "im(alpha)") : 0.0;
        const Complex alpha(re, im);
        const int d = dim > 0 ? dim : suggested_dim_coherent(std::abs(alpha));
        return coherent_state(alpha, d);
    }
    if (kind == "thermal") {
        const double N_th = number(1, "N_th");
        const int d = dim > 0 ? dim : suggested_dim_thermal(N_th);
        return thermal_state(N_th, d);
    }
    if (kind == "displaced") {
        const double re = number(1, "re(alpha)");
        const double im = number(2, "im(alpha)");
        const double N_th = number(3, "N_th");
        const Complex alpha(re, im);
        const int d = dim > 0
                          ? dim
                          : suggested_dim_displaced_thermal(std::abs(alpha), N_th);
        return displaced_thermal_state(alpha, N_th, d);
    }
    // superposition families go by their own names
    const SuperpositionFamily family = superposition_family_from_string(kind);
    const int n = integer(1, "family index");
    const int d = dim > 0 ? dim : suggested_dim_superposition(family, n);
    return superposition_family(family, n, d);
}

// ------------------------------ config parsing ------------------------------

namespace {

struct RawConfig {
    // key -> list of (line, token)
    std::map<std::string, std::vector<std::pair<int, std::string>>> values;
};

const std::vector<std::string> kKnownKeys = {
    "scenario", "n",          "gamma_t", "N",     "measure", "family",
    "state",    "truncation", "budget",  "grid_points", "out"};

void parse_raw(std::istream& in, RawConfig& raw,
               std::vector<ConfigIssue>& issues) {
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)); };
        if (std::all_of(line.begin(), line.end(), is_space)) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            issues.push_back({line_no, "", "expected 'key = value'"});
            continue;
        }
        auto trim = [&](std::string s) {
            while (!s.empty() && is_space(s.front())) s.erase(s.begin());
            while (!s.empty() && is_space(s.back())) s.pop_back();
            return s;
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            issues.push_back({line_no, "", "missing key before '='"});
            continue;
        }
        if (std::find(kKnownKeys.begin(), kKnownKeys.end(), key) ==
            kKnownKeys.end()) {
            issues.push_back({line_no, key, "unknown key"});
            continue;
        }
        if (value.empty()) {
            issues.push_back({line_no, key, "missing value"});
            continue;
        }
        std::stringstream ss(value);
        std::string tok;
        while (ss >> tok) raw.values[key].push_back({line_no, tok});
    }
}

}  // namespace

ParsedConfig parse_sweep_config(std::istream& in) {
    ParsedConfig parsed;
    std::vector<ConfigIssue>& issues = parsed.issues;
    RawConfig raw;
    parse_raw(in, raw, issues);

    SweepConfig config;

    const auto tokens = [&](const char* key) {
        return raw.values.count(key) ? raw.values[key]
                                     : std::vector<std::pair<int, std::string>>{};
    };

    const auto parse_double = [&](const std::pair<int, std::string>& tok,
                                  const char* field, double& out) {
        try {
            size_t used = 0;
            out = std::stod(tok.second, &used);
            if (used != tok.second.size()) throw std::invalid_argument("");
            return true;
        } catch (const std::exception&) {
            issues.push_back({tok.first, field,
                              "cannot parse number '" + tok.second + "'"});
            return false;
        }
    };

    // scenario
    bool have_scenario = false;
    {
        const auto toks = tokens("scenario");
        if (toks.empty()) {
            issues.push_back({0, "scenario", "required key missing"});
        } else {
            const std::string& name = toks.front().second;
            if (toks.size() > 1) {
                issues.push_back(
                    {toks[1].first, "scenario", "given more than once"});
            }
            if (name == "static_measures") {
                config.scenario = Scenario::StaticMeasures;
                have_scenario = true;
            } else if (name == "zero_temp_dynamics") {
                config.scenario = Scenario::ZeroTempDynamics;
                have_scenario = true;
            } else if (name == "finite_temp_negativity") {
                config.scenario = Scenario::FiniteTempNegativity;
                have_scenario = true;
            } else if (name == "superposition_families") {
                config.scenario = Scenario::SuperpositionFamilies;
                have_scenario = true;
            } else if (name == "single_state") {
                config.scenario = Scenario::SingleState;
                have_scenario = true;
            } else {
                issues.push_back({toks.front().first, "scenario",
                                  "unknown scenario '" + name + "'"});
            }
        }
    }

    // n (integers and a..b ranges)
    for (const auto& tok : tokens("n")) {
        const size_t dots = tok.second.find("..");
        if (dots != std::string::npos) {
            try {
                const int lo = std::stoi(tok.second.substr(0, dots));
                const int hi = std::stoi(tok.second.substr(dots + 2));
                if (lo > hi) throw std::invalid_argument("");
                for (int v = lo; v <= hi; ++v) config.n_values.push_back(v);
            } catch (const std::exception&) {
                issues.push_back(
                    {tok.first, "n", "bad range '" + tok.second + "'"});
            }
        } else {
            double v = 0;
            if (parse_double(tok, "n", v)) {
                if (v != std::floor(v) || v < 0) {
                    issues.push_back(
                        {tok.first, "n", "'" + tok.second + "' not a level"});
                } else {
                    config.n_values.push_back(static_cast<int>(v));
                }
            }
        }
    }

    // gamma_t / N lists
    std::vector<double> gamma_t, bath_N;
    for (const auto& tok : tokens("gamma_t")) {
        double v = 0;
        if (parse_double(tok, "gamma_t", v)) {
            if (v < 0) {
                issues.push_back({tok.first, "gamma_t", "must be >= 0"});
            } else {
                gamma_t.push_back(v);
            }
        }
    }
    for (const auto& tok : tokens("N")) {
        double v = 0;
        if (parse_double(tok, "N", v)) {
            if (v < 0) {
                issues.push_back({tok.first, "N", "must be >= 0"});
            } else {
                bath_N.push_back(v);
            }
        }
    }
    if (!gamma_t.empty()) config.gamma_t = gamma_t;
    if (!bath_N.empty()) config.bath_N = bath_N;

    // measures
    for (const auto& tok : tokens("measure")) {
        try {
            config.measures.push_back(measure_kind_from_string(tok.second));
        } catch (const Error& e) {
            issues.push_back({tok.first, "measure", e.what()});
        }
    }

    // family members
    for (const auto& tok : tokens("family")) {
        const std::string& f = tok.second;
        if (f == "coherent") config.family.coherent = true;
        else if (f == "thermal") config.family.thermal = true;
        else if (f == "displaced_thermal") config.family.displaced_thermal = true;
        else if (f == "rho_nu_plus") config.family.rho_nu_plus = true;
        else issues.push_back({tok.first, "family", "unknown member '" + f + "'"});
    }

    // state
    {
        const auto toks = tokens("state");
        if (!toks.empty()) {
            if (have_scenario &&
                config.scenario == Scenario::SuperpositionFamilies) {
                try {
                    config.family_kind =
                        superposition_family_from_string(toks.front().second);
                } catch (const Error& e) {
                    issues.push_back({toks.front().first, "state", e.what()});
                }
            } else {
                config.single_state = toks.front().second;
            }
            if (toks.size() > 1) {
                issues.push_back({toks[1].first, "state", "given more than once"});
            }
        }
    }

    // scalars
    for (const auto& tok : tokens("truncation")) {
        double v = 0;
        if (parse_double(tok, "truncation", v)) {
            config.truncation = static_cast<int>(v);
        }
    }
    for (const auto& tok : tokens("budget")) {
        double v = 0;
        if (parse_double(tok, "budget", v)) config.budget = static_cast<long>(v);
    }
    for (const auto& tok : tokens("grid_points")) {
        double v = 0;
        if (parse_double(tok, "grid_points", v)) {
            config.grid_points = static_cast<int>(v);
        }
    }
    {
        const auto toks = tokens("out");
        if (!toks.empty()) config.out_path = toks.front().second;
    }

    // ---- scenario-level validation (collect everything) ----
    if (have_scenario) {
        const bool needs_n = config.scenario != Scenario::SingleState;
        if (needs_n && config.n_values.empty()) {
            issues.push_back({0, "n", "required for this scenario"});
        }
        switch (config.scenario) {
            case Scenario::StaticMeasures:
                if (config.measures.empty()) {
                    issues.push_back({0, "measure", "required for static_measures"});
                }
                break;
            case Scenario::ZeroTempDynamics:
                for (double v : config.bath_N) {
                    if (v != 0.0) {
                        issues.push_back(
                            {0, "N", "zero_temp_dynamics requires N = 0"});
                        break;
                    }
                }
                if (tokens("gamma_t").empty()) {
                    issues.push_back(
                        {0, "gamma_t", "required for zero_temp_dynamics"});
                }
                if (config.measures.empty()) {
                    config.measures = {MeasureKind::Negativity};
                }
                break;
            case Scenario::FiniteTempNegativity:
                if (tokens("N").empty()) {
                    issues.push_back(
                        {0, "N", "required for finite_temp_negativity"});
                }
                if (tokens("gamma_t").empty()) {
                    issues.push_back(
                        {0, "gamma_t", "required for finite_temp_negativity"});
                }
                config.measures = {MeasureKind::Negativity};
                break;
            case Scenario::SuperpositionFamilies:
                if (!config.family_kind.has_value()) {
                    issues.push_back(
                        {0, "state",
                         "superposition_families needs 'state = "
                         "consecutive|skip|equal|geometric'"});
                }
                if (config.measures.empty()) {
                    config.measures = {MeasureKind::Negativity};
                }
                break;
            case Scenario::SingleState:
                if (config.single_state.empty()) {
                    issues.push_back({0, "state", "required for single_state"});
                }
                if (config.measures.empty()) {
                    issues.push_back({0, "measure", "required for single_state"});
                }
                break;
        }
        const bool has_relative =
            std::any_of(config.measures.begin(), config.measures.end(),
                        [](MeasureKind m) {
                            return m != MeasureKind::Negativity;
                        });
        if (has_relative && !config.family.any()) {
            issues.push_back(
                {0, "family",
                 "relative measures need at least one classical family"});
        }
        if (!config.n_values.empty() && config.truncation > 0) {
            const int n_max =
                *std::max_element(config.n_values.begin(), config.n_values.end());
            const int required = n_max + 10;
            if (config.truncation < required) {
                issues.push_back(
                    {0, "truncation",
                     "truncation " + std::to_string(config.truncation) +
                         " below required " + std::to_string(required) +
                         " (max n + 10)"});
            }
        }
    }

    if (issues.empty()) parsed.config = config;
    return parsed;
}

ParsedConfig load_sweep_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ParsedConfig parsed;
        parsed.issues.push_back({0, "", "cannot open config file: " + path});
        return parsed;
    }
    return parse_sweep_config(in);
}

// --------------------------------- the sweep --------------------------------

namespace {

struct Cell {
    std::string state_id;
    int n = 0;  // family/fock index when applicable
    double gamma_t = 0.0;
    double N = 0.0;
    MeasureKind measure = MeasureKind::Negativity;
};

// dim <= 0 picks the smallest truncation holding the state.
FockDensityMatrix initial_state_for(const SweepConfig& config, const Cell& cell,
                                    int dim) {
    switch (config.scenario) {
        case Scenario::SuperpositionFamilies: {
            const int d = dim > 0 ? dim
                                  : suggested_dim_superposition(
                                        *config.family_kind, cell.n);
            return superposition_family(*config.family_kind, cell.n, d);
        }
        case Scenario::SingleState:
            return parse_state_spec(config.single_state, dim);
        default: {
            const int d = dim > 0 ? dim : suggested_dim_fock(cell.n);
            return fock_state(cell.n, d);
        }
    }
}

int working_truncation(const SweepConfig& config, const Cell& cell) {
    if (config.truncation > 0) return config.truncation;
    int support = cell.n + 1;
    if (config.scenario == Scenario::SuperpositionFamilies) {
        support = suggested_dim_superposition(*config.family_kind, cell.n);
    } else if (config.scenario == Scenario::SingleState) {
        support = parse_state_spec(config.single_state).dim();
    }
    if (cell.gamma_t == 0.0) return support + 2;
    return support + suggested_dim_thermal(cell.N) + 6;
}

SweepRow evaluate_cell(const SweepConfig& config, const Cell& cell) {
    SweepRow row;
    row.state_id = cell.state_id;
    row.gamma_t = cell.gamma_t;
    row.N = cell.N;
    row.report.measure = cell.measure;
    row.report.value = std::numeric_limits<double>::quiet_NaN();
    try {
        FockDensityMatrix state = initial_state_for(config, cell, 0);
        if (cell.gamma_t > 0.0) {
            const int trunc =
                std::max(working_truncation(config, cell), state.dim());
            state = propagate(state, BathParams(1.0, cell.N), cell.gamma_t,
                              trunc);
        }
        if (cell.measure == MeasureKind::Negativity) {
            row.report = negativity_report(state);
        } else {
            const FamilyDescriptor family = FamilyDescriptor::for_state(
                state, config.family.coherent, config.family.thermal,
                config.family.displaced_thermal, config.family.rho_nu_plus,
                BathParams(1.0, cell.N));
            SearchConfig search;
            search.max_evaluations = config.budget;
            search.grid_points = config.grid_points;
            switch (cell.measure) {
                case MeasureKind::Hillery:
                    row.report = hillery_eta(state, family, search);
                    break;
                case MeasureKind::Bures:
                    row.report = bures_eta(state, family, search);
                    break;
                case MeasureKind::Dodonov:
                    row.report = dodonov_eta(state, family, search);
                    break;
                case MeasureKind::Negativity:
                    break;  // handled above
            }
        }
    } catch (const std::exception& e) {
        row.failed = true;
        row.error = e.what();
        row.report.converged = false;
        row.report.value = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

std::string state_label(const SweepConfig& config, int n) {
    switch (config.scenario) {
        case Scenario::SuperpositionFamilies:
            return to_string(*config.family_kind) + ":" + std::to_string(n);
        case Scenario::SingleState:
            return config.single_state;
        default:
            return std::to_string(n);
    }
}

}  // namespace

SweepResult run_sweep(const SweepConfig& config, int threads) {
    std::vector<Cell> cells;
    std::vector<int> n_list = config.n_values;
    if (config.scenario == Scenario::SingleState) n_list = {0};
    for (const int n : n_list) {
        for (const double gt : config.gamma_t) {
            for (const double N : config.bath_N) {
                for (const MeasureKind m : config.measures) {
                    Cell cell;
                    cell.state_id = state_label(config, n);
                    cell.n = n;
                    cell.gamma_t = gt;
                    cell.N = N;
                    cell.measure = m;
                    cells.push_back(cell);
                }
            }
        }
    }

    SweepResult result;
    result.rows.resize(cells.size());
    if (threads <= 1) {
        for (size_t i = 0; i < cells.size(); ++i) {
            result.rows[i] = evaluate_cell(config, cells[i]);
        }
    } else {
        std::atomic<size_t> next{0};
        // Simple pool: each worker pulls the next cell index; results land
        // in their slot, so output order is configuration order.
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&]() {
                while (true) {
                    const size_t i = next.fetch_add(1);
                    if (i >= cells.size()) break;
                    result.rows[i] = evaluate_cell(config, cells[i]);
                }
            });
        }
        for (auto& t : pool) t.join();
    }

    // Peak summary per (measure, gamma_t, N) curve over the n axis.
    if (config.scenario != Scenario::SingleState) {
        std::map<std::tuple<MeasureKind, double, double>,
                 std::pair<double, std::string>>
            peaks;
        for (const SweepRow& row : result.rows) {
            if (row.failed || std::isnan(row.report.value)) continue;
            const auto key =
                std::make_tuple(row.report.measure, row.gamma_t, row.N);
            auto it = peaks.find(key);
            if (it == peaks.end() || row.report.value > it->second.first) {
                peaks[key] = {row.report.value, row.state_id};
            }
        }
        for (const auto& [key, best] : peaks) {
            std::ostringstream line;
            line << "peak measure=" << to_string(std::get<0>(key))
                 << " gamma_t=" << fmt12(std::get<1>(key))
                 << " N=" << fmt12(std::get<2>(key)) << ": argmax n="
                 << best.second << " (value=" << fmt12(best.first) << ")";
            result.summary.push_back(line.str());
        }
    }
    return result;
}

void write_sweep_csv(const SweepResult& result, std::ostream& out,
                     bool with_timestamp) {
    if (with_timestamp) {
        char stamp[64] = "unknown";
        const std::time_t now = std::time(nullptr);
        std::tm tm_utc{};
        if (gmtime_r(&now, &tm_utc)) {
            std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
        }
        out << "# oscnc sweep " << stamp << "\n";
    }
    out << measure_csv_header() << "\n";
    for (const SweepRow& row : result.rows) {
        out << measure_csv_row(row.report, row.state_id, row.gamma_t, row.N)
            << "\n";
    }
}

}  // namespace oscnc
