#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "kvnlab/scenario.hpp"

namespace kvn {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& v, std::size_t line, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return d;
    } catch (...) {
        fail(line, "key '" + key + "': expected a number, got '" + v + "'");
    }
}

std::size_t parse_size(const std::string& v, std::size_t line, const std::string& key) {
    const double d = parse_double(v, line, key);
    if (d < 0 || d != std::floor(d)) fail(line, "key '" + key + "': expected a non-negative integer");
    return static_cast<std::size_t>(d);
}

std::vector<double> parse_list(const std::string& v, std::size_t line, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        out.push_back(parse_double(trim(item), line, key));
    }
    if (out.empty()) fail(line, "key '" + key + "': expected a comma-separated list");
    return out;
}

std::array<cplx, 2> parse_qubit(const std::string& v, std::size_t line, const std::string& key) {
    const std::string t = trim(v);
    const double s = 1.0 / std::sqrt(2.0);
    if (t == "0") return {cplx(1, 0), cplx(0, 0)};
    if (t == "1") return {cplx(0, 0), cplx(1, 0)};
    if (t == "+") return {cplx(s, 0), cplx(s, 0)};
    if (t == "-") return {cplx(s, 0), cplx(-s, 0)};
    const auto parts = parse_list(t, line, key);
    if (parts.size() != 4) {
        fail(line, "key '" + key + "': expected 0|1|+|- or four numbers re,im,re,im");
    }
    std::array<cplx, 2> q{cplx(parts[0], parts[1]), cplx(parts[2], parts[3])};
    const double n = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
    if (n < 1e-12) fail(line, "key '" + key + "': zero qubit vector");
    q[0] /= n;
    q[1] /= n;
    return q;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys = {
        "scenario",       "grid.n1",          "grid.n2",        "grid.length",
        "grid.length1",   "grid.length2",     "physics.mass",   "physics.k",
        "physics.lambda", "physics.alpha",    "physics.lambda1", "physics.lambda2",
        "physics.quantum_potential",          "init.x0",        "init.p0",
        "init.profile",   "init.sigma_x",     "init.sigma_p2",  "init.qubit1",
        "init.qubit2",    "time.t_max",       "time.samples",   "time.dt_list",
        "trotter.steps",  "seed",             "sweep.draws",    "out.dir",
    };
    return keys;
}

}  // namespace

void apply_scenario_defaults(ScenarioConfig& cfg, const std::map<std::string, std::string>& given) {
    auto unset = [&given](const char* key) { return given.find(key) == given.end(); };
    const std::string& s = cfg.scenario;

    if (s == "free_particle") {
        // delta profile, commensurate drift sampling handled by the runner
        if (unset("init.p0")) cfg.p0 = 8.0 * 2.0 * M_PI / cfg.length2;
        if (unset("time.t_max")) cfg.t_max = 1.9;
        if (unset("time.samples")) cfg.samples = 8;
    } else if (s == "harmonic") {
        if (unset("init.profile")) cfg.gaussian = true;
        if (unset("init.sigma_x")) cfg.sigma_x = 1.5;
        if (unset("init.sigma_p2")) cfg.sigma_p2 = 1.0;
        if (unset("init.x0")) cfg.x0 = 0.625;
        if (unset("init.p0")) cfg.p0 = 8.0 * 2.0 * M_PI / cfg.length2;
    } else if (s == "no_entanglement") {
        if (unset("grid.n1")) cfg.n1 = 32;
        if (unset("grid.n2")) cfg.n2 = 32;
        if (unset("time.t_max")) cfg.t_max = 5.0;
        if (unset("init.qubit1")) cfg.qubit1 = {cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0)};
        if (unset("init.qubit2")) cfg.qubit2 = cfg.qubit1;
    } else if (s == "entangling") {
        // operating point with a clear negativity window at t <= 2
        if (unset("grid.n1")) cfg.n1 = 8;
        if (unset("grid.n2")) cfg.n2 = 8;
        if (unset("grid.length") && unset("grid.length1")) cfg.length1 = 24.0;
        if (unset("grid.length") && unset("grid.length2")) cfg.length2 = 24.0;
        if (unset("physics.lambda")) cfg.lambda = 0.0;
        if (unset("init.profile")) cfg.gaussian = true;
        if (unset("init.sigma_x")) cfg.sigma_x = 4.0;
        if (unset("init.sigma_p2")) cfg.sigma_p2 = 0.25;
        if (unset("init.qubit2")) {
            cfg.qubit2 = {cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0)};
        }
        if (unset("time.t_max")) cfg.t_max = 2.0;
        if (unset("time.samples")) cfg.samples = 41;
    } else if (s == "conservation") {
        if (unset("grid.n1")) cfg.n1 = 32;
        if (unset("grid.n2")) cfg.n2 = 32;
        if (unset("time.t_max")) cfg.t_max = 1.0;
        if (unset("time.samples")) cfg.samples = 11;
        if (unset("init.qubit2")) {
            cfg.qubit2 = {cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0)};
        }
    } else if (s == "static_compare") {
        if (unset("grid.n1")) cfg.n1 = 256;
        if (unset("grid.length") && unset("grid.length1")) cfg.length1 = 20.0;
        if (unset("physics.lambda")) cfg.lambda = 0.5;
        if (unset("init.profile")) cfg.gaussian = true;
        if (unset("init.sigma_x")) cfg.sigma_x = 1.0;
        if (unset("init.qubit1")) {
            cfg.qubit1 = {cplx(1 / std::sqrt(2.0), 0), cplx(1 / std::sqrt(2.0), 0)};
        }
        if (unset("init.qubit2")) cfg.qubit2 = cfg.qubit1;
        if (unset("time.t_max")) cfg.t_max = 6.0;
        if (unset("time.samples")) cfg.samples = 25;
        if (unset("trotter.steps")) cfg.trotter_steps = 1024;
    }
}

ScenarioConfig parse_config(const std::string& text) {
    ScenarioConfig cfg;
    std::map<std::string, std::string> given;
    std::map<std::string, std::size_t> lines;

    std::istringstream is(text);
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(is, raw)) {
        ++lineno;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty()) fail(lineno, "empty key");
        if (val.empty()) fail(lineno, "key '" + key + "': empty value");
        if (known_keys().find(key) == known_keys().end()) {
            fail(lineno, "unknown key '" + key + "'");
        }
        if (given.count(key)) fail(lineno, "duplicate key '" + key + "'");
        given[key] = val;
        lines[key] = lineno;
    }

    auto ln = [&lines](const std::string& k) { return lines[k]; };

    if (!given.count("scenario")) {
        throw std::invalid_argument("config: missing required key 'scenario'");
    }
    cfg.scenario = given["scenario"];
    {
        const auto& names = scenario_names();
        if (cfg.scenario != "all" &&
            std::find(names.begin(), names.end(), cfg.scenario) == names.end()) {
            fail(ln("scenario"), "unknown scenario '" + cfg.scenario + "'");
        }
    }

    if (given.count("grid.length")) {
        cfg.length1 = cfg.length2 = parse_double(given["grid.length"], ln("grid.length"), "grid.length");
        if (given.count("grid.length1") || given.count("grid.length2")) {
            fail(ln("grid.length"), "grid.length conflicts with grid.length1/grid.length2");
        }
    }
    if (given.count("grid.length1")) {
        cfg.length1 = parse_double(given["grid.length1"], ln("grid.length1"), "grid.length1");
    }
    if (given.count("grid.length2")) {
        cfg.length2 = parse_double(given["grid.length2"], ln("grid.length2"), "grid.length2");
    }
    if (given.count("grid.n1")) cfg.n1 = parse_size(given["grid.n1"], ln("grid.n1"), "grid.n1");
    if (given.count("grid.n2")) cfg.n2 = parse_size(given["grid.n2"], ln("grid.n2"), "grid.n2");

    if (given.count("physics.mass")) cfg.mass = parse_double(given["physics.mass"], ln("physics.mass"), "physics.mass");
    if (given.count("physics.k")) cfg.k = parse_double(given["physics.k"], ln("physics.k"), "physics.k");
    if (given.count("physics.lambda")) cfg.lambda = parse_double(given["physics.lambda"], ln("physics.lambda"), "physics.lambda");
    if (given.count("physics.alpha")) cfg.alpha = parse_double(given["physics.alpha"], ln("physics.alpha"), "physics.alpha");
    if (given.count("physics.lambda1")) cfg.lambda1 = parse_double(given["physics.lambda1"], ln("physics.lambda1"), "physics.lambda1");
    if (given.count("physics.lambda2")) cfg.lambda2 = parse_double(given["physics.lambda2"], ln("physics.lambda2"), "physics.lambda2");
    if (given.count("physics.quantum_potential")) {
        cfg.quantum_potential = parse_list(given["physics.quantum_potential"],
                                           ln("physics.quantum_potential"), "physics.quantum_potential");
    }

    if (given.count("init.x0")) cfg.x0 = parse_double(given["init.x0"], ln("init.x0"), "init.x0");
    if (given.count("init.p0")) cfg.p0 = parse_double(given["init.p0"], ln("init.p0"), "init.p0");
    if (given.count("init.profile")) {
        const std::string p = given["init.profile"];
        if (p == "delta") cfg.gaussian = false;
        else if (p == "gaussian") cfg.gaussian = true;
        else fail(ln("init.profile"), "init.profile must be 'delta' or 'gaussian'");
    }
    if (given.count("init.sigma_x")) cfg.sigma_x = parse_double(given["init.sigma_x"], ln("init.sigma_x"), "init.sigma_x");
    if (given.count("init.sigma_p2")) cfg.sigma_p2 = parse_double(given["init.sigma_p2"], ln("init.sigma_p2"), "init.sigma_p2");
    if (given.count("init.qubit1")) cfg.qubit1 = parse_qubit(given["init.qubit1"], ln("init.qubit1"), "init.qubit1");
    if (given.count("init.qubit2")) cfg.qubit2 = parse_qubit(given["init.qubit2"], ln("init.qubit2"), "init.qubit2");

    if (given.count("time.t_max")) cfg.t_max = parse_double(given["time.t_max"], ln("time.t_max"), "time.t_max");
    if (given.count("time.samples")) cfg.samples = parse_size(given["time.samples"], ln("time.samples"), "time.samples");
    if (given.count("time.dt_list")) cfg.dt_list = parse_list(given["time.dt_list"], ln("time.dt_list"), "time.dt_list");

    if (given.count("trotter.steps")) cfg.trotter_steps = parse_size(given["trotter.steps"], ln("trotter.steps"), "trotter.steps");
    if (given.count("seed")) cfg.seed = parse_size(given["seed"], ln("seed"), "seed");
    if (given.count("sweep.draws")) cfg.sweep_draws = parse_size(given["sweep.draws"], ln("sweep.draws"), "sweep.draws");
    if (given.count("out.dir")) cfg.out_dir = given["out.dir"];

    if (cfg.t_max < 0.0) fail(ln("time.t_max"), "time.t_max must be >= 0");
    if (cfg.samples < 1) fail(ln("time.samples"), "time.samples must be >= 1");
    if (cfg.trotter_steps < 1) fail(ln("trotter.steps"), "trotter.steps must be >= 1");

    apply_scenario_defaults(cfg, given);
    cfg.echo = given;
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("config: cannot open '" + path + "'");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

double tolerance_scale() {
    const char* env = std::getenv("KVNLAB_TOL_SCALE");
    if (env == nullptr) return 1.0;
    try {
        const double v = std::stod(env);
        if (v > 0.0 && std::isfinite(v)) return v;
    } catch (...) {
    }
    return 1.0;
}

const std::vector<std::string>& scenario_names() {
    static const std::vector<std::string> names = {
        "free_particle", "harmonic", "no_entanglement", "entangling", "conservation",
        "static_compare"};
    return names;
}

std::string version_string() {
    return "kvnlab 0.1.0";
}

bool RunReport::all_pass() const {
    for (const auto& v : verdicts) {
        if (!v.pass) return false;
    }
    return true;
}

}  // namespace kvn
