#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <utility>

#include "collapselab/errors.hpp"
#include "collapselab/rng.hpp"
#include "collapselab/scenario.hpp"

namespace collapselab {

namespace {

constexpr double pi = 3.14159265358979323846;

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
    throw ValidationError(path + ": " + message);
}

void require_known_keys(const json& obj, const std::string& path,
                        const std::set<std::string>& known) {
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) fail(path.empty() ? key : path + "." + key, "unknown field");
    }
}

const json& require_field(const json& obj, const std::string& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(path.empty() ? key : path + "." + key, "missing required field");
    return *it;
}

double to_number(const json& j, const std::string& path) {
    if (!j.is_number()) fail(path, "expected a number");
    const double value = j.get<double>();
    if (!std::isfinite(value)) fail(path, "value must be finite");
    return value;
}

std::uint64_t to_count(const json& j, const std::string& path) {
    if (!j.is_number_unsigned()) fail(path, "expected a nonnegative integer");
    return j.get<std::uint64_t>();
}

cplx to_complex(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 2) fail(path, "complex entries must be [re, im] pairs");
    return {to_number(j[0], path + "[0]"), to_number(j[1], path + "[1]")};
}

ComplexMatrix to_matrix(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
    const std::size_t d = j.size();
    ComplexMatrix m(d);
    for (std::size_t i = 0; i < d; ++i) {
        const json& row = j[i];
        if (!row.is_array() || row.size() != d)
            fail(path, "row " + std::to_string(i) + " must have " + std::to_string(d) +
                           " entries");
        for (std::size_t k = 0; k < d; ++k)
            m(i, k) = to_complex(row[k], path + "[" + std::to_string(i) + "][" +
                                             std::to_string(k) + "]");
    }
    return m;
}

std::vector<double> to_number_vector(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(to_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

DensityMatrix parse_state(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    require_known_keys(j, path, {"matrix", "qubit"});
    if (j.contains("matrix") == j.contains("qubit"))
        fail(path, "exactly one of 'matrix' or 'qubit' is required");
    try {
        if (j.contains("matrix")) {
            return DensityMatrix(to_matrix(j["matrix"], path + ".matrix"));
        }
        const json& q = j["qubit"];
        if (!q.is_object()) fail(path + ".qubit", "expected an object");
        require_known_keys(q, path + ".qubit", {"p", "gamma"});
        QubitParams params;
        params.p = to_number(require_field(q, path + ".qubit", "p"), path + ".qubit.p");
        params.gamma =
            to_complex(require_field(q, path + ".qubit", "gamma"), path + ".qubit.gamma");
        return qubit_state(params);
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

Observable parse_observable(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    require_known_keys(j, path, {"matrix", "angles"});
    if (j.contains("matrix") == j.contains("angles"))
        fail(path, "exactly one of 'matrix' or 'angles' is required");
    try {
        if (j.contains("matrix")) {
            return Observable(to_matrix(j["matrix"], path + ".matrix"));
        }
        const json& a = j["angles"];
        if (!a.is_object()) fail(path + ".angles", "expected an object");
        require_known_keys(a, path + ".angles", {"theta", "phi"});
        const double theta =
            to_number(require_field(a, path + ".angles", "theta"), path + ".angles.theta");
        const double phi =
            a.contains("phi") ? to_number(a["phi"], path + ".angles.phi") : 0.0;
        return qubit_observable_y(theta, phi);
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

std::vector<double> parse_t_grid(const json& j, const std::string& path) {
    if (j.is_array()) {
        return to_number_vector(j, path);
    }
    if (!j.is_object()) fail(path, "expected an array of times or a geometric spec");
    require_known_keys(j, path, {"geometric"});
    const json& g = require_field(j, path, "geometric");
    if (!g.is_object()) fail(path + ".geometric", "expected an object");
    require_known_keys(g, path + ".geometric", {"from", "to", "points"});
    const double from = to_number(require_field(g, path + ".geometric", "from"),
                                  path + ".geometric.from");
    const double to = to_number(require_field(g, path + ".geometric", "to"),
                                path + ".geometric.to");
    const std::uint64_t points = to_count(require_field(g, path + ".geometric", "points"),
                                          path + ".geometric.points");
    if (!(from > to && to > 0.0)) fail(path + ".geometric", "need from > to > 0");
    if (points < 2) fail(path + ".geometric.points", "need at least 2 points");
    std::vector<double> grid(points);
    const double ratio = std::log(to / from) / static_cast<double>(points - 1);
    for (std::uint64_t i = 0; i < points; ++i)
        grid[i] = from * std::exp(ratio * static_cast<double>(i));
    grid.back() = to;
    return grid;
}

FlowSchedule parse_flow(const json& j, const std::string& path, std::size_t size) {
    if (!j.is_object()) fail(path, "expected an object");
    require_known_keys(j, path, {"schedule"});
    std::vector<std::pair<double, std::vector<std::size_t>>> schedule;
    if (j.contains("schedule")) {
        const json& entries = j["schedule"];
        if (!entries.is_array()) fail(path + ".schedule", "expected an array");
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const std::string entry_path = path + ".schedule[" + std::to_string(i) + "]";
            const json& entry = entries[i];
            if (!entry.is_object()) fail(entry_path, "expected an object");
            require_known_keys(entry, entry_path, {"t", "permutation"});
            const double t = to_number(require_field(entry, entry_path, "t"), entry_path + ".t");
            const json& perm_json = require_field(entry, entry_path, "permutation");
            if (!perm_json.is_array()) fail(entry_path + ".permutation", "expected an array");
            std::vector<std::size_t> perm;
            perm.reserve(perm_json.size());
            for (std::size_t k = 0; k < perm_json.size(); ++k)
                perm.push_back(static_cast<std::size_t>(to_count(
                    perm_json[k], entry_path + ".permutation[" + std::to_string(k) + "]")));
            schedule.emplace_back(t, std::move(perm));
        }
    }
    try {
        return FlowSchedule(size, std::move(schedule));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

ClassicalSystem parse_classical(const json& j, const std::string& path, std::uint64_t seed) {
    if (!j.is_object()) fail(path, "expected an object");
    if (j.contains("random")) {
        require_known_keys(j, path, {"random"});
        const json& r = j["random"];
        if (!r.is_object()) fail(path + ".random", "expected an object");
        require_known_keys(r, path + ".random", {"size", "x_cells", "y_cells"});
        const std::uint64_t size =
            to_count(require_field(r, path + ".random", "size"), path + ".random.size");
        const std::uint64_t x_cells =
            to_count(require_field(r, path + ".random", "x_cells"), path + ".random.x_cells");
        const std::uint64_t y_cells =
            to_count(require_field(r, path + ".random", "y_cells"), path + ".random.y_cells");
        try {
            return random_classical_system(seed, size, x_cells, y_cells);
        } catch (const Error& e) {
            fail(path + ".random", e.what());
        }
    }
    require_known_keys(j, path, {"size", "distribution", "partition_x", "partition_y", "flow"});
    const std::uint64_t size = to_count(require_field(j, path, "size"), path + ".size");
    if (size < 1) fail(path + ".size", "space must have at least one point");

    std::vector<double> distribution;
    const json& dist = require_field(j, path, "distribution");
    if (dist.is_string() && dist.get<std::string>() == "uniform") {
        distribution.assign(size, 1.0 / static_cast<double>(size));
    } else {
        distribution = to_number_vector(dist, path + ".distribution");
    }
    std::vector<double> px =
        to_number_vector(require_field(j, path, "partition_x"), path + ".partition_x");
    std::vector<double> py =
        to_number_vector(require_field(j, path, "partition_y"), path + ".partition_y");
    FlowSchedule flow = j.contains("flow")
                            ? parse_flow(j["flow"], path + ".flow", size)
                            : FlowSchedule(size, {});
    try {
        return ClassicalSystem(std::move(distribution), std::move(px), std::move(py),
                               std::move(flow));
    } catch (const Error& e) {
        fail(path, e.what());
    }
}

SweepGrid parse_sweep(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    require_known_keys(j, path, {"p", "gamma_abs", "gamma_arg", "theta", "phi"});
    SweepGrid grid = SweepGrid::defaults();
    if (j.contains("p")) grid.p = to_number_vector(j["p"], path + ".p");
    if (j.contains("gamma_abs"))
        grid.gamma_abs = to_number_vector(j["gamma_abs"], path + ".gamma_abs");
    if (j.contains("gamma_arg"))
        grid.gamma_arg = to_number_vector(j["gamma_arg"], path + ".gamma_arg");
    if (j.contains("theta")) grid.theta = to_number_vector(j["theta"], path + ".theta");
    if (j.contains("phi")) grid.phi = to_number_vector(j["phi"], path + ".phi");
    return grid;
}

OutputSpec parse_output(const json& j, const std::string& path) {
    if (!j.is_object()) fail(path, "expected an object");
    require_known_keys(j, path, {"format", "path"});
    OutputSpec spec;
    if (j.contains("format")) {
        const json& f = j["format"];
        if (!f.is_string()) fail(path + ".format", "expected \"json\" or \"csv\"");
        const std::string name = f.get<std::string>();
        if (name == "json") {
            spec.format = OutputFormat::json;
        } else if (name == "csv") {
            spec.format = OutputFormat::csv;
        } else {
            fail(path + ".format", "expected \"json\" or \"csv\", got \"" + name + "\"");
        }
    }
    if (j.contains("path")) {
        if (!j["path"].is_string()) fail(path + ".path", "expected a string");
        spec.path = j["path"].get<std::string>();
    }
    return spec;
}

ScenarioKind parse_kind(const json& j) {
    if (!j.is_string()) fail("kind", "expected a string");
    const std::string name = j.get<std::string>();
    if (name == "cmo-probe") return ScenarioKind::cmo_probe;
    if (name == "two-measurement") return ScenarioKind::two_measurement;
    if (name == "classical-check") return ScenarioKind::classical_check;
    if (name == "coherence-audit") return ScenarioKind::coherence_audit;
    if (name == "qubit-sweep") return ScenarioKind::qubit_sweep;
    fail("kind", "unknown scenario kind \"" + name + "\"");
}

void require_section(bool present, const char* key, const char* kind) {
    if (!present)
        throw ValidationError(std::string(key) + ": required for kind \"" + kind + "\"");
}

}  // namespace

const char* to_string(ScenarioKind kind) {
    switch (kind) {
        case ScenarioKind::cmo_probe: return "cmo-probe";
        case ScenarioKind::two_measurement: return "two-measurement";
        case ScenarioKind::classical_check: return "classical-check";
        case ScenarioKind::coherence_audit: return "coherence-audit";
        case ScenarioKind::qubit_sweep: return "qubit-sweep";
    }
    return "unknown";
}

SweepGrid SweepGrid::defaults() {
    SweepGrid grid;
    for (int i = 0; i <= 10; ++i) grid.p.push_back(static_cast<double>(i) / 10.0);
    grid.gamma_abs = {0.0, 0.5, 1.0};
    grid.gamma_arg = {0.0, pi / 3.0, pi};
    for (int i = 0; i <= 6; ++i) grid.theta.push_back(static_cast<double>(i) * pi / 6.0);
    for (int i = 0; i <= 8; ++i) grid.phi.push_back(static_cast<double>(i) * pi / 4.0);
    return grid;
}

std::size_t SweepGrid::size() const {
    return p.size() * gamma_abs.size() * gamma_arg.size() * theta.size() * phi.size();
}

std::vector<double> default_t_grid() {
    json spec = {{"geometric", {{"from", 1e-1}, {"to", 1e-4}, {"points", 16u}}}};
    return parse_t_grid(spec, "t_grid");
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    if (!in.good() && !in.eof()) {
        throw IoError("cannot read config file: " + path);
    }
    return parse_config(buffer.str(), path);
}

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t last_newline = 0;
        const std::size_t stop = e.byte > 0 ? std::min(text.size(), e.byte - 1) : 0;
        for (std::size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                last_newline = i + 1;
            }
        }
        const std::size_t column = stop - last_newline + 1;
        throw ParseError(origin + ":" + std::to_string(line) + ":" + std::to_string(column) +
                         ": " + e.what());
    }
    if (!doc.is_object()) {
        throw ValidationError("config: top level must be a JSON object");
    }
    require_known_keys(doc, "", {"kind", "seed", "shots", "state", "observables", "hamiltonian",
                                 "t_grid", "classical", "sweep", "tolerance", "output"});

    ScenarioConfig config;
    config.echo = doc;
    config.kind = parse_kind(require_field(doc, "", "kind"));
    if (doc.contains("seed")) config.seed = to_count(doc["seed"], "seed");
    if (doc.contains("shots")) {
        config.shots = to_count(doc["shots"], "shots");
        if (config.shots < 1) fail("shots", "must be at least 1");
    }
    if (doc.contains("state")) config.state = parse_state(doc["state"], "state");
    if (doc.contains("observables")) {
        const json& obs = doc["observables"];
        if (!obs.is_object()) fail("observables", "expected an object");
        require_known_keys(obs, "observables", {"first", "second"});
        if (obs.contains("first"))
            config.first = parse_observable(obs["first"], "observables.first");
        if (obs.contains("second"))
            config.second = parse_observable(obs["second"], "observables.second");
    }
    if (doc.contains("hamiltonian")) {
        ComplexMatrix h = to_matrix(doc["hamiltonian"], "hamiltonian");
        if (!h.is_hermitian(1e-10)) fail("hamiltonian", "matrix fails hermitian check");
        config.hamiltonian = std::move(h);
    }
    if (doc.contains("t_grid")) config.t_grid = parse_t_grid(doc["t_grid"], "t_grid");
    if (doc.contains("classical"))
        config.classical = parse_classical(doc["classical"], "classical", config.seed);
    if (doc.contains("sweep")) config.sweep = parse_sweep(doc["sweep"], "sweep");
    if (doc.contains("tolerance")) {
        config.coherence_tolerance = to_number(doc["tolerance"], "tolerance");
        if (config.coherence_tolerance < 0.0) fail("tolerance", "must be >= 0");
    }
    if (doc.contains("output")) config.output = parse_output(doc["output"], "output");

    const char* kind_name = to_string(config.kind);
    switch (config.kind) {
        case ScenarioKind::cmo_probe:
            require_section(config.state.has_value(), "state", kind_name);
            require_section(config.first.has_value(), "observables.first", kind_name);
            require_section(config.hamiltonian.has_value(), "hamiltonian", kind_name);
            break;
        case ScenarioKind::two_measurement:
            require_section(config.state.has_value(), "state", kind_name);
            require_section(config.first.has_value(), "observables.first", kind_name);
            require_section(config.second.has_value(), "observables.second", kind_name);
            break;
        case ScenarioKind::classical_check:
            require_section(config.classical.has_value(), "classical", kind_name);
            break;
        case ScenarioKind::coherence_audit:
            require_section(config.state.has_value(), "state", kind_name);
            require_section(config.first.has_value(), "observables.first", kind_name);
            if (config.state->dim() > 2)
                require_section(config.second.has_value(), "observables.second", kind_name);
            break;
        case ScenarioKind::qubit_sweep:
            break;
    }

    auto check_dim = [&](std::size_t dim, const char* key) {
        if (config.state && config.state->dim() != dim)
            fail(key, "dimension does not match state");
    };
    if (config.first) check_dim(config.first->dim(), "observables.first");
    if (config.second) check_dim(config.second->dim(), "observables.second");
    if (config.hamiltonian) check_dim(config.hamiltonian->dim(), "hamiltonian");
    if (config.first && config.second && config.first->dim() != config.second->dim())
        fail("observables.second", "dimension does not match observables.first");

    return config;
}

}  // namespace collapselab
