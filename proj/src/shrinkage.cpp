#include "bellshrink/shrinkage.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "bellshrink/error.hpp"

namespace bellshrink {

namespace {

void validate(EstimatorKind kind, const Vector& lambda, const BiasingParams& params) {
    if (lambda.size() == 0 || !(lambda.minCoeff() > 0.0) || !lambda.allFinite()) {
        throw Error(ErrorKind::domain, "eigenvalues must be finite and positive");
    }
    if (kind == EstimatorKind::mle) return;
    if (!(params.k > 0.0) || !std::isfinite(params.k)) {
        throw Error(ErrorKind::domain, "biasing parameter k must be finite and > 0");
    }
    if (!std::isfinite(params.d)) throw Error(ErrorKind::domain, "biasing parameter d must be finite");
}

void validate_alpha(const Vector& lambda, const Vector& alpha) {
    if (alpha.size() != lambda.size()) {
        throw Error(ErrorKind::invalid_input, "alpha and lambda lengths differ");
    }
}

}  // namespace

std::string_view to_string(EstimatorKind kind) noexcept {
    switch (kind) {
        case EstimatorKind::mle: return "MLE";
        case EstimatorKind::lte: return "LTE";
        case EstimatorKind::aulte: return "AULTE";
        case EstimatorKind::maulte: return "MAULTE";
    }
    return "?";
}

EstimatorKind parse_estimator(std::string_view name) {
    std::string lower;
    for (char c : name) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
    }
    for (EstimatorKind kind : kAllEstimators) {
        std::string candidate(to_string(kind));
        std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (candidate == lower) return kind;
    }
    throw Error(ErrorKind::invalid_input, "unknown estimator '" + std::string(name) + "'");
}

std::vector<EstimatorKind> parse_estimator_list(std::string_view comma_separated) {
    std::vector<EstimatorKind> out;
    std::size_t start = 0;
    while (start <= comma_separated.size()) {
        const std::size_t end = std::min(comma_separated.find(',', start), comma_separated.size());
        const auto token = comma_separated.substr(start, end - start);
        const EstimatorKind kind = parse_estimator(token);
        if (std::find(out.begin(), out.end(), kind) == out.end()) out.push_back(kind);
        start = end + 1;
    }
    return out;
}

std::string_view to_string(ParamSource source) noexcept {
    switch (source) {
        case ParamSource::none: return "none";
        case ParamSource::rule: return "rule";
        case ParamSource::optimized: return "optimized";
        case ParamSource::override_value: return "override";
    }
    return "?";
}

double shrink_factor(EstimatorKind kind, double lambda, const BiasingParams& params) {
    const double kd = params.k + params.d;
    const double lk = lambda + params.k;
    switch (kind) {
        case EstimatorKind::mle: return 1.0;
        case EstimatorKind::lte: return (lambda - params.d) / lk;
        case EstimatorKind::aulte: return 1.0 - (kd * kd) / (lk * lk);
        case EstimatorKind::maulte: return (1.0 - (kd * kd) / (lk * lk)) * (1.0 - kd / lk);
    }
    return 1.0;
}

Vector estimate(EstimatorKind kind, const SpectralModel& spec, const Vector& beta_mle,
                const BiasingParams& params) {
    validate(kind, spec.lambda, params);
    if (beta_mle.size() != spec.lambda.size()) {
        throw Error(ErrorKind::invalid_input, "estimate: beta length does not match spectral model");
    }
    if (kind == EstimatorKind::mle) return beta_mle;
    Vector alpha = spec.q.transpose() * beta_mle;
    for (Eigen::Index j = 0; j < alpha.size(); ++j) alpha(j) *= shrink_factor(kind, spec.lambda(j), params);
    return spec.q * alpha;
}

Vector bias_vector(EstimatorKind kind, const Vector& lambda, const BiasingParams& params,
                   const Vector& alpha) {
    validate(kind, lambda, params);
    validate_alpha(lambda, alpha);
    const double kd = params.k + params.d;
    Vector b(lambda.size());
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const double lk = lambda(j) + params.k;
        switch (kind) {
            case EstimatorKind::mle: b(j) = 0.0; break;
            case EstimatorKind::lte: b(j) = -kd * alpha(j) / lk; break;
            case EstimatorKind::aulte: b(j) = -kd * kd * alpha(j) / (lk * lk); break;
            case EstimatorKind::maulte:
                b(j) = -kd * alpha(j) * (lk * lk + kd * (lambda(j) - params.d)) / (lk * lk * lk);
                break;
        }
    }
    return b;
}

double variance_part(EstimatorKind kind, const Vector& lambda, const BiasingParams& params) {
    validate(kind, lambda, params);
    double total = 0.0;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const double c = shrink_factor(kind, lambda(j), params);
        total += c * c / lambda(j);
    }
    return total;
}

double scalar_mse(EstimatorKind kind, const Vector& lambda, const BiasingParams& params,
                  const Vector& alpha) {
    validate(kind, lambda, params);
    validate_alpha(lambda, alpha);
    const double k = params.k;
    const double d = params.d;
    const double kd = k + d;
    double variance = 0.0;
    double bias = 0.0;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const double l = lambda(j);
        const double a2 = alpha(j) * alpha(j);
        const double lk = l + k;
        const double lk2 = lk * lk;
        const double ld = l - d;
        const double ld2k = l + d + 2.0 * k;
        switch (kind) {
            case EstimatorKind::mle:
                variance += 1.0 / l;
                break;
            case EstimatorKind::lte:
                variance += ld * ld / (l * lk2);
                bias += a2 / lk2;
                break;
            case EstimatorKind::aulte:
                variance += ld * ld * ld2k * ld2k / (l * lk2 * lk2);
                bias += a2 / (lk2 * lk2);
                break;
            case EstimatorKind::maulte: {
                const double inner = lk2 + kd * ld;
                variance += ld * ld * ld * ld * ld2k * ld2k / (l * lk2 * lk2 * lk2);
                bias += a2 * inner * inner / (lk2 * lk2 * lk2);
                break;
            }
        }
    }
    switch (kind) {
        case EstimatorKind::mle: return variance;
        case EstimatorKind::lte: return variance + kd * kd * bias;
        case EstimatorKind::aulte: return variance + kd * kd * kd * kd * bias;
        case EstimatorKind::maulte: return variance + kd * kd * bias;
    }
    return variance;
}

Matrix mmse_matrix(EstimatorKind kind, const Vector& lambda, const BiasingParams& params,
                   const Vector& alpha) {
    const Vector b = bias_vector(kind, lambda, params, alpha);
    Matrix m = b * b.transpose();
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const double c = shrink_factor(kind, lambda(j), params);
        m(j, j) += c * c / lambda(j);
    }
    return m;
}

double squared_bias(EstimatorKind kind, const Vector& lambda, const BiasingParams& params,
                    const Vector& alpha) {
    return bias_vector(kind, lambda, params, alpha).squaredNorm();
}

double select_k(EstimatorKind kind, const Vector& alpha_hat) {
    if (alpha_hat.size() == 0 || !alpha_hat.allFinite()) {
        throw Error(ErrorKind::invalid_input, "select_k: alpha_hat must be non-empty and finite");
    }
    switch (kind) {
        case EstimatorKind::lte: {
            const double ss = alpha_hat.squaredNorm();
            if (!(ss > 0.0)) throw Error(ErrorKind::degenerate_input, "select_k: alpha_hat is zero");
            return 1.0 / ss;
        }
        case EstimatorKind::aulte:
        case EstimatorKind::maulte: {
            const double m = alpha_hat.cwiseAbs2().minCoeff();
            if (!(m > 0.0)) {
                throw Error(ErrorKind::degenerate_input, "select_k: a component of alpha_hat is zero");
            }
            return 1.0 / m;
        }
        case EstimatorKind::mle: break;
    }
    throw Error(ErrorKind::invalid_input, "select_k: MLE has no biasing parameter");
}

double d_lte(const Vector& lambda, const Vector& alpha_hat, double k) {
    validate(EstimatorKind::lte, lambda, {k, 0.0});
    validate_alpha(lambda, alpha_hat);
    double num = 0.0;
    double den = 0.0;
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const double l = lambda(j);
        const double a2 = alpha_hat(j) * alpha_hat(j);
        const double lk2 = (l + k) * (l + k);
        num += (1.0 - k * a2) / lk2;
        den += (1.0 + l * a2) / (l * lk2);
    }
    return num / den;
}

double d_opt_seed(const Vector& lambda, const Vector& alpha_hat, double k) {
    validate(EstimatorKind::aulte, lambda, {k, 0.0});
    validate_alpha(lambda, alpha_hat);
    std::vector<double> values(static_cast<std::size_t>(lambda.size()));
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const double l = lambda(j);
        values[static_cast<std::size_t>(j)] = -k + (l + k) / std::sqrt(1.0 + l * alpha_hat(j) * alpha_hat(j));
    }
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double select_d(EstimatorKind kind, const Vector& lambda, const Vector& alpha_hat, double k) {
    if (kind != EstimatorKind::aulte && kind != EstimatorKind::maulte) {
        throw Error(ErrorKind::invalid_input, "select_d: only AULTE and MAULTE are optimized in d");
    }
    const double seed = d_opt_seed(lambda, alpha_hat, k);
    const double lower = -k + kBracketOffset;
    const double upper = lambda.maxCoeff() + k;
    auto objective = [&](double d) { return scalar_mse(kind, lambda, {k, d}, alpha_hat); };
    return minimize_scalar(objective, seed, lower, upper, 1e-12 * (upper - lower));
}

ShrinkageEstimate shrink(EstimatorKind kind, const SpectralModel& spec, const Vector& beta_mle,
                         std::optional<double> k_override, std::optional<double> d_override) {
    ShrinkageEstimate out;
    out.kind = kind;
    if (kind != EstimatorKind::mle) {
        if (k_override) {
            out.params.k = *k_override;
            out.k_source = ParamSource::override_value;
        } else {
            out.params.k = select_k(kind, spec.alpha_hat);
            out.k_source = ParamSource::rule;
        }
        if (d_override) {
            out.params.d = *d_override;
            out.d_source = ParamSource::override_value;
        } else if (kind == EstimatorKind::lte) {
            out.params.d = d_lte(spec.lambda, spec.alpha_hat, out.params.k);
            out.d_source = ParamSource::rule;
        } else {
            out.params.d = select_d(kind, spec.lambda, spec.alpha_hat, out.params.k);
            out.d_source = ParamSource::optimized;
        }
    }
    out.beta = estimate(kind, spec, beta_mle, out.params);
    out.scalar_mse = scalar_mse(kind, spec.lambda, out.params, spec.alpha_hat);
    out.squared_bias = squared_bias(kind, spec.lambda, out.params, spec.alpha_hat);
    return out;
}

}  // namespace bellshrink
