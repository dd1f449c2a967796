#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "collapselab/classical.hpp"
#include "collapselab/coherence.hpp"
#include "collapselab/complex_matrix.hpp"
#include "collapselab/quantum.hpp"

namespace collapselab {

enum class ScenarioKind {
    cmo_probe,
    two_measurement,
    classical_check,
    coherence_audit,
    qubit_sweep,
};

const char* to_string(ScenarioKind kind);

enum class OutputFormat { json, csv };

struct OutputSpec {
    OutputFormat format = OutputFormat::json;
    std::string path = "-";  // "-" means stdout; for csv, a directory
};

// Sweep axes for the qubit-sweep kind; defaults cover the full closed-form
// comparison grid.
struct SweepGrid {
    std::vector<double> p;
    std::vector<double> gamma_abs;
    std::vector<double> gamma_arg;
    std::vector<double> theta;
    std::vector<double> phi;

    static SweepGrid defaults();
    std::size_t size() const;
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::qubit_sweep;
    std::uint64_t seed = 42;
    std::uint64_t shots = 100000;
    std::optional<DensityMatrix> state;
    std::optional<Observable> first;
    std::optional<Observable> second;
    std::optional<ComplexMatrix> hamiltonian;
    std::optional<std::vector<double>> t_grid;
    std::optional<ClassicalSystem> classical;
    SweepGrid sweep = SweepGrid::defaults();
    double coherence_tolerance = default_gap_threshold;
    OutputSpec output;

    // Original JSON document, echoed into reports.
    nlohmann::json echo;
};

// Default probe grid: geometric, 16 points from 1e-1 down to 1e-4.
std::vector<double> default_t_grid();

ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& text, const std::string& origin);

struct ResultTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct RunReport {
    std::string kind;
    std::uint64_t seed = 0;
    std::uint64_t shots = 0;
    std::vector<ResultTable> tables;
    std::optional<CoherenceReport> coherence;
    nlohmann::json scenario;
    double wall_time_seconds = 0.0;

    nlohmann::json to_json() const;
};

RunReport run(const ScenarioConfig& config);

// JSON: a single document at path ("-" for stdout). CSV: one file per table
// inside the path directory ("-" streams all tables to stdout).
void emit(const RunReport& report, OutputFormat format, const std::string& path);

}  // namespace collapselab
