#pragma once

// Subcommand implementations behind the bellshrink executable. Each returns
// the machine-readable report plus its table / CSV renderings; the caller
// decides where they go.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellshrink/io.hpp"
#include "bellshrink/shrinkage.hpp"

namespace bellshrink {

struct DatasetArgs {
    std::filesystem::path input;
    std::string response = "y";
    std::vector<std::string> features;  // empty: all but the response
    std::optional<bool> intercept;      // unset: the command's default
};

struct RunOptions {
    DatasetArgs data;
    std::vector<EstimatorKind> estimators{kAllEstimators, kAllEstimators + 4};
    std::optional<double> k;
    std::optional<double> d;
    FitConfig fit;
    std::optional<std::uint64_t> seed;  // echoed only; fitting is deterministic
    double warn_threshold = 30.0;       // condition number warning level
    bool timestamp = false;             // add wall-clock time (breaks byte reproducibility)
};

struct Report {
    nlohmann::json json;
    std::string table;
    std::string csv;
};

/// Intercept on unless disabled.
Report cmd_fit(const RunOptions& options);
/// Eigenvalues of X'WX at the MLE, condition number and indices.
Report cmd_diagnose(const RunOptions& options);
/// Intercept off unless enabled. Always all four estimators; theorem verdicts
/// at the AULTE-selected (k, d), with --k / --d overriding either.
Report cmd_compare(const RunOptions& options);

struct CurveOptions {
    double from = -1.0;
    double to = 1.0;
    int points = 201;
};

/// (d, scalar MSE per estimator) grid at fixed k for external plotting.
std::string mse_curve_csv(const SpectralModel& spec, double k, const CurveOptions& curve);

/// Fits like cmd_compare and returns the curve at k = --k or 1 / (alpha' alpha).
std::string cmd_curve(const RunOptions& options, const CurveOptions& curve);

struct SimulateOptions {
    std::filesystem::path config;
    std::filesystem::path out_prefix;  // writes <prefix>.csv and <prefix>.json
    std::optional<std::uint64_t> seed;  // overrides the config seed
    int threads = 0;
    bool timestamp = false;
};

struct SimulateOutcome {
    std::vector<GridRow> rows;
    std::vector<EstimatorKind> estimators;
    std::string csv;
    nlohmann::json json;
    std::string table;
    int failed_cells = 0;
};

SimulateOutcome cmd_simulate(const SimulateOptions& options);

struct SampleOptions {
    int n = 100;
    int p = 4;
    double rho = 0.9;
    std::string beta = "unit";  // "unit", "ones" or a comma-separated list
    std::uint64_t seed = 1;
    std::filesystem::path out;
};

/// Synthetic dataset drawn like one simulation repetition; returns the CSV text
/// that was written.
std::string cmd_sample(const SampleOptions& options);

}  // namespace bellshrink
