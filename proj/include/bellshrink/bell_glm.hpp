#pragma once

// Bell regression with log link: likelihood, score, Fisher-scoring IRLS,
// canonical (spectral) form and collinearity diagnostics.

#include <string>
#include <vector>

#include "bellshrink/numeric.hpp"

namespace bellshrink {

struct Dataset {
    Matrix x;                        // n x p design, intercept column included if requested
    Vector y;                        // nonnegative integer counts stored as doubles
    std::vector<std::string> names;  // one label per column of x
    bool intercept = false;          // true when column 0 of x is the added ones column
};

/// Validates and assembles a dataset: n > p, y integer-valued and >= 0,
/// finite covariates, and full column rank (ratio of extreme singular
/// values of X above 1e-10, else collinearity-failure).
Dataset make_dataset(Matrix x, Vector y, std::vector<std::string> names, bool intercept = false);

/// Prepends a column of ones named "(Intercept)".
Dataset with_intercept(const Dataset& data);

enum class InitStrategy { zeros, log_moment };

struct FitConfig {
    double tol = 1e-8;
    int max_iter = 100;
    InitStrategy init = InitStrategy::log_moment;
};

inline constexpr double kEtaClamp = 30.0;

struct FitResult {
    Vector beta_mle;
    Vector weights;           // diag of W at beta_mle
    Vector working_response;  // z at beta_mle
    Vector mu_hat;
    int iterations = 0;
    bool converged = false;
    double loglik = 0.0;
    std::vector<double> loglik_trace;  // one entry per iterate, starting at beta^(0)
    bool loglik_monotone = true;       // false if any step decreased loglik by > 1e-10
    bool eta_clamped = false;          // clamp was active in some iteration
    bool weights_reevaluated = true;   // W and z recomputed at the converged beta
};

/// Working quantities of the log-link Bell model at a given linear predictor.
struct WorkingState {
    Vector mu;
    Vector weights;           // mu / (1 + W0(mu))
    Vector working_response;  // eta + (y - mu) / mu
};

WorkingState working_state(const Vector& eta, const Vector& y);

/// sum_i [ y_i log W0(mu_i) - exp(W0(mu_i)) ], mu_i = exp(x_i' beta).
double log_likelihood(const Vector& beta, const Dataset& data);

/// X' (y - mu) / (1 + W0(mu)), i.e. X' W^{1/2} V^{-1/2} (y - mu).
Vector score(const Vector& beta, const Dataset& data);

FitResult irls_fit(const Dataset& data, const FitConfig& config = {});

struct SpectralModel {
    Vector lambda;     // eigenvalues of X' W X, descending
    Matrix q;          // matching orthonormal eigenvectors
    Vector alpha_hat;  // q' beta_mle
};

Matrix weighted_cross_product(const Matrix& x, const Vector& weights);

SpectralModel spectral(const Dataset& data, const FitResult& fit);

/// sum_j 1 / lambda_j
double mse_mle(const Vector& lambda);
inline double mse_mle(const SpectralModel& spec) { return mse_mle(spec.lambda); }

struct CollinearityDiagnostics {
    double condition_number;   // sqrt(lambda_max / lambda_min)
    Vector condition_indices;  // sqrt(lambda_j / lambda_min)
};

CollinearityDiagnostics collinearity_diagnostics(const Vector& lambda);
inline CollinearityDiagnostics collinearity_diagnostics(const SpectralModel& spec) {
    return collinearity_diagnostics(spec.lambda);
}

}  // namespace bellshrink
