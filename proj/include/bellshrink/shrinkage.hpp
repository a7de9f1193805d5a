#pragma once

// Liu-type shrinkage estimators for the Bell model and their plug-in risks.
//
// All risk functions work in canonical coordinates: `lambda` holds the
// eigenvalues of X'WX and `alpha` the canonical coefficients (the plug-in
// estimate alpha_hat in practice). Covariances are the usual asymptotic
// ones, Cov(beta_mle) = (X'WX)^{-1}.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bellshrink/bell_glm.hpp"

namespace bellshrink {

enum class EstimatorKind { mle, lte, aulte, maulte };

inline constexpr EstimatorKind kAllEstimators[] = {EstimatorKind::mle, EstimatorKind::lte,
                                                   EstimatorKind::aulte, EstimatorKind::maulte};

std::string_view to_string(EstimatorKind kind) noexcept;
/// Accepts "mle", "lte", "aulte", "maulte" (case-insensitive).
EstimatorKind parse_estimator(std::string_view name);
std::vector<EstimatorKind> parse_estimator_list(std::string_view comma_separated);

struct BiasingParams {
    double k = 0.0;  // > 0
    double d = 0.0;  // any finite value
};

/// How (k, d) were obtained, for reports.
enum class ParamSource { none, rule, optimized, override_value };
std::string_view to_string(ParamSource source) noexcept;

struct ShrinkageEstimate {
    EstimatorKind kind = EstimatorKind::mle;
    BiasingParams params;
    ParamSource k_source = ParamSource::none;
    ParamSource d_source = ParamSource::none;
    Vector beta;
    double scalar_mse = 0.0;
    double squared_bias = 0.0;
};

/// Per-component canonical multiplier c_j such that alpha_est_j = c_j * alpha_hat_j.
double shrink_factor(EstimatorKind kind, double lambda, const BiasingParams& params);

/// Estimator in original coordinates: Q diag(c) Q' beta_mle.
Vector estimate(EstimatorKind kind, const SpectralModel& spec, const Vector& beta_mle,
                const BiasingParams& params);

Vector bias_vector(EstimatorKind kind, const Vector& lambda, const BiasingParams& params,
                   const Vector& alpha);
/// Trace of the canonical covariance diag(c_j^2 / lambda_j).
double variance_part(EstimatorKind kind, const Vector& lambda, const BiasingParams& params);
/// Closed-form trace of the MMSE matrix.
double scalar_mse(EstimatorKind kind, const Vector& lambda, const BiasingParams& params,
                  const Vector& alpha);
/// Canonical Cov + bias bias'.
Matrix mmse_matrix(EstimatorKind kind, const Vector& lambda, const BiasingParams& params,
                   const Vector& alpha);
double squared_bias(EstimatorKind kind, const Vector& lambda, const BiasingParams& params,
                    const Vector& alpha);

/// LTE: 1 / (alpha' alpha); AULTE and MAULTE: 1 / min_j alpha_j^2.
double select_k(EstimatorKind kind, const Vector& alpha_hat);

/// d for the LTE from the ratio rule
///   sum (1 - k a_j^2)/(l_j + k)^2  /  sum (1 + l_j a_j^2)/(l_j (l_j + k)^2).
double d_lte(const Vector& lambda, const Vector& alpha_hat, double k);

/// median_j of  -k + (lambda_j + k) / sqrt(1 + lambda_j alpha_j^2).
/// Even p takes the mean of the two middle order statistics.
double d_opt_seed(const Vector& lambda, const Vector& alpha_hat, double k);

inline constexpr double kBracketOffset = 1e-6;

/// Minimizes scalar_mse(kind, ., k) over d in [-k + 1e-6, lambda_max + k],
/// seeded at d_opt_seed. Only AULTE and MAULTE.
double select_d(EstimatorKind kind, const Vector& lambda, const Vector& alpha_hat, double k);

/// Selects (k, d) by the rules above unless `override_params` fixes them, and
/// evaluates the estimator and its plug-in risk.
ShrinkageEstimate shrink(EstimatorKind kind, const SpectralModel& spec, const Vector& beta_mle,
                         std::optional<double> k_override = std::nullopt,
                         std::optional<double> d_override = std::nullopt);

}  // namespace bellshrink
