#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "collapselab/errors.hpp"
#include "collapselab/scenario.hpp"
#include "collapselab/version.hpp"

namespace collapselab {

namespace {

// Full-precision decimal, shortest form that round-trips a double.
std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string quoted = "\"";
    for (char c : field) {
        if (c == '"') quoted += '"';
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

void write_table_csv(std::ostream& out, const ResultTable& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c > 0) out << ',';
        out << csv_quote(table.columns[c]);
    }
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c > 0) out << ',';
            out << format_number(row[c]);
        }
        out << '\n';
    }
}

nlohmann::json coherence_to_json(const CoherenceReport& report) {
    return {
        {"variance_lhs", report.variance_lhs},
        {"variance_rhs", report.variance_rhs},
        {"variance_gap", report.variance_gap},
        {"trace_distance", report.trace_distance},
        {"max_total_prob_violation", report.max_total_prob_violation},
        {"incoherent", report.incoherent},
        {"tolerance_used", report.tolerance_used},
    };
}

}  // namespace

nlohmann::json RunReport::to_json() const {
    nlohmann::json doc;
    doc["version"] = version;
    doc["kind"] = kind;
    doc["seed"] = seed;
    doc["shots"] = shots;
    doc["scenario"] = scenario;
    nlohmann::json table_map = nlohmann::json::object();
    for (const ResultTable& table : tables) {
        nlohmann::json entry;
        entry["columns"] = table.columns;
        entry["rows"] = table.rows;
        table_map[table.name] = std::move(entry);
    }
    doc["tables"] = std::move(table_map);
    if (coherence.has_value()) doc["coherence_report"] = coherence_to_json(*coherence);
    doc["wall_time_seconds"] = wall_time_seconds;
    return doc;
}

void emit(const RunReport& report, OutputFormat format, const std::string& path) {
    if (format == OutputFormat::json) {
        const std::string payload = report.to_json().dump(2) + "\n";
        if (path == "-") {
            std::cout << payload;
            return;
        }
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw IoError("cannot open output file: " + path);
        }
        out << payload;
        if (!out.good()) {
            throw IoError("failed writing output file: " + path);
        }
        return;
    }

    if (path == "-") {
        for (const ResultTable& table : report.tables) {
            std::cout << "# " << table.name << '\n';
            write_table_csv(std::cout, table);
        }
        return;
    }
    std::error_code ec;
    std::filesystem::create_directories(path, ec);
    if (ec) {
        throw IoError("cannot create output directory " + path + ": " + ec.message());
    }
    for (const ResultTable& table : report.tables) {
        const std::filesystem::path file =
            std::filesystem::path(path) / (table.name + ".csv");
        std::ofstream out(file, std::ios::binary);
        if (!out) {
            throw IoError("cannot open output file: " + file.string());
        }
        write_table_csv(out, table);
        if (!out.good()) {
            throw IoError("failed writing output file: " + file.string());
        }
    }
}

}  // namespace collapselab
