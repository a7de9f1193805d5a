#pragma once

// Simulation harness: AR(1)-correlated Gaussian designs, Bell responses,
// repeated fits, and aggregation of simulated MSE / squared bias per
// estimator.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bellshrink/bell_glm.hpp"
#include "bellshrink/shrinkage.hpp"

namespace bellshrink {

struct SimConfig {
    int n_reps = 1000;
    int n = 100;
    int p = 4;
    double rho = 0.9;
    Vector beta_true;  // empty: unit-norm 1/sqrt(q) for each of the q design columns
    std::uint64_t seed = 1;
    std::vector<EstimatorKind> estimators{kAllEstimators, kAllEstimators + 4};
    bool intercept = false;    // prepend a ones column (beta_true then has p + 1 entries)
    bool standardize = false;  // scale design columns to unit length
    FitConfig fit;
};

/// Throws invalid-input when the config breaks n > p, 0 <= rho < 1, n_reps >= 1
/// or supplies beta_true of the wrong length.
void validate(const SimConfig& config);

/// beta_true as configured, or the unit-norm default.
Vector effective_beta(const SimConfig& config);

struct EstimatorCellResult {
    EstimatorKind kind = EstimatorKind::mle;
    double sim_mse = 0.0;     // mean over used reps of ||beta_hat - beta||^2
    double mse_spread = 0.0;  // sample standard deviation of the same
    double sim_sb = 0.0;      // ||mean(beta_hat) - beta||^2
    int n_used = 0;
    int n_failed = 0;
};

struct SimCellResult {
    std::vector<EstimatorCellResult> estimators;  // in SimConfig::estimators order
    int n_reps = 0;
    int n_fit_failed = 0;         // reps whose MLE fit failed or did not converge
    double mean_mle_trace = 0.0;  // across-rep mean of sum 1/lambda_j (used reps)

    const EstimatorCellResult& at(EstimatorKind kind) const;
};

/// Draws the design; optionally standardized to unit column length.
Matrix gen_design(Rng& rng, int n, int p, double rho, bool standardize = false);

/// Independent Bell draws with mean exp(x_i' beta).
Vector gen_response(Rng& rng, const Matrix& x, const Vector& beta);

/// Outcome of one repetition; exposed for oracle tests.
struct RepOutcome {
    bool fit_ok = false;
    std::string failure;
    double mle_trace = 0.0;                  // sum 1/lambda_j
    std::vector<std::optional<Vector>> beta;  // per configured estimator
};

RepOutcome run_repetition(const SimConfig& config, int rep);

/// Threads used by run_cell: BELLSHRINK_THREADS if set (>= 1), else hardware concurrency.
int default_thread_count();

/// Repetitions run on up to `threads` threads; results are aggregated in
/// repetition order, so output does not depend on the thread count.
SimCellResult run_cell(const SimConfig& config, int threads = 0);

struct GridRow {
    double rho = 0.0;
    int n = 0;
    int p = 0;
    std::uint64_t seed = 0;
    std::optional<SimCellResult> result;
    std::string error;  // non-empty when the cell failed
};

std::vector<GridRow> run_grid(const std::vector<SimConfig>& configs, int threads = 0);

/// Seed for a grid cell, a function of the base seed and the cell's (rho, n, p).
std::uint64_t cell_seed(std::uint64_t base_seed, double rho, int n, int p);

}  // namespace bellshrink
