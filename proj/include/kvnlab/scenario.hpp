// scenario.hpp
// Canned experiments, flat key-value configuration, and report emission.

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kvnlab/state.hpp"

namespace kvn {

// Flat dotted-key configuration with per-scenario defaults. Unknown keys are
// rejected at parse time with their line number.
struct ScenarioConfig {
    std::string scenario;  // free_particle | harmonic | no_entanglement |
                           // entangling | conservation | static_compare | all

    // grid
    std::size_t n1 = 64;
    std::size_t n2 = 64;
    double length1 = 20.0;
    double length2 = 20.0;

    // physics
    double mass = 1.0;
    double k = 1.0;
    double lambda = 1.0;
    double alpha = 1.0;
    double lambda1 = 1.0;
    double lambda2 = 1.0;
    std::vector<double> quantum_potential{0.0, 0.0, 0.5};  // V(x) = x^2/2

    // initial condition
    double x0 = 0.0;
    double p0 = 0.0;
    bool gaussian = false;
    double sigma_x = 1.0;
    double sigma_p2 = 0.0;
    std::array<cplx, 2> qubit1{cplx(1, 0), cplx(0, 0)};
    std::array<cplx, 2> qubit2{cplx(1, 0), cplx(0, 0)};

    // time grid
    double t_max = 2.0;
    std::size_t samples = 33;
    std::vector<double> dt_list{1e-3, 5e-4, 2.5e-4};

    std::size_t trotter_steps = 512;
    std::uint64_t seed = 42;
    std::size_t sweep_draws = 20;

    std::string out_dir = "out";

    // raw key/value echo for provenance (after defaults)
    std::map<std::string, std::string> echo;
};

// Parses the documented schema; throws std::invalid_argument with a
// line-numbered message on unknown keys or malformed values.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Applies the named scenario's documented defaults to fields the text did
// not set (called by parse_config; exposed for tests).
void apply_scenario_defaults(ScenarioConfig& cfg, const std::map<std::string, std::string>& given);

struct Verdict {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double tolerance = 0.0;
    std::string detail;  // comparison direction, e.g. "<" or ">"
};

struct ReportRow {
    double t = 0.0;
    double exp_x1 = 0.0;
    double exp_p2 = 0.0;
    double var_x1 = 0.0;
    double negativity = 0.0;
    double entropy = 0.0;
    double c_drift = 0.0;
};

struct RunReport {
    std::string scenario;
    std::vector<ReportRow> rows;
    std::vector<Verdict> verdicts;
    std::map<std::string, std::string> provenance;
    std::vector<std::string> notes;
    double tol_scale = 1.0;

    bool all_pass() const;
};

// Multiplies verdict tolerances (KVNLAB_TOL_SCALE, debugging only).
double tolerance_scale();

RunReport run_free_particle(const ScenarioConfig& cfg);
RunReport run_harmonic(const ScenarioConfig& cfg);
RunReport run_no_entanglement(const ScenarioConfig& cfg);
RunReport run_entangling(const ScenarioConfig& cfg);
RunReport run_conservation(const ScenarioConfig& cfg);
RunReport run_static_compare(const ScenarioConfig& cfg);

RunReport run_scenario(const ScenarioConfig& cfg);  // dispatch on cfg.scenario

const std::vector<std::string>& scenario_names();

// Writes series.csv, report.json and optionally plot.svg under dir.
void emit_report(const RunReport& r, const std::string& dir, bool plot = false);

std::string version_string();

}  // namespace kvn
