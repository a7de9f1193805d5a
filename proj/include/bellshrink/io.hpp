#pragma once

// File formats: CSV datasets and simulation tables, JSON simulation configs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bellshrink/bell_glm.hpp"
#include "bellshrink/monte_carlo.hpp"

namespace bellshrink {

inline constexpr std::string_view kToolVersion = "0.1.0";
inline constexpr std::string_view kReportSchemaVersion = "1.0";

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

/// RFC-4180 style: comma separated, optional double quotes with "" escapes,
/// LF or CRLF line ends. A header row is required; blank lines are skipped.
CsvTable parse_csv(std::string_view text);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

std::string csv_escape(std::string_view field);

/// Shortest text that parses back to exactly the same double.
std::string format_double(double value);
/// Fixed 4 decimal places for human-readable tables.
std::string format_fixed4(double value);

/// 64-bit FNV-1a, hex encoded.
std::string fnv1a64_hex(std::string_view bytes);

/// Reads a dataset from CSV. `features` empty selects every column except the
/// response, in file order. Errors: missing column -> schema; non-numeric cell
/// or non-integer/negative response -> validation (1-based data row in the
/// message); rank deficiency -> collinearity-failure.
Dataset parse_dataset(const std::filesystem::path& path, const std::string& response,
                      const std::vector<std::string>& features, bool intercept);

/// Writes `response_name` first and then the non-intercept columns of x,
/// with round-trip exact number formatting.
std::string dataset_to_csv(const Dataset& data, const std::string& response_name = "y");

struct SimulationPlan {
    std::vector<SimConfig> cells;
    nlohmann::json echo;  // normalized config, written back with the results
};

/// Parses the simulate config document. Scalars or arrays are accepted for
/// "n", "p" and "rho"; the grid is their cartesian product (rho outermost,
/// then n, then p). Unknown keys and type errors are schema errors.
SimulationPlan parse_sim_config(const nlohmann::json& doc);
SimulationPlan load_sim_config(const std::filesystem::path& path);

std::string grid_to_csv(const std::vector<GridRow>& rows, const std::vector<EstimatorKind>& estimators);
/// Inverse of grid_to_csv.
std::vector<GridRow> grid_from_csv(std::string_view text);
nlohmann::json grid_to_json(const std::vector<GridRow>& rows, const SimulationPlan& plan);
/// Tables 1-4 style layout, 4 decimal places.
std::string grid_to_table(const std::vector<GridRow>& rows, const std::vector<EstimatorKind>& estimators);

}  // namespace bellshrink
