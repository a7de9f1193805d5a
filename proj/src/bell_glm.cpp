#include "bellshrink/bell_glm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bellshrink/error.hpp"

namespace bellshrink {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kMonotoneSlack = 1e-10;

void check_dims(const Vector& beta, const Dataset& data) {
    if (beta.size() != data.x.cols()) {
        throw Error(ErrorKind::invalid_input, "beta length " + std::to_string(beta.size()) +
                                                  " does not match " + std::to_string(data.x.cols()) +
                                                  " design columns");
    }
}

// mu_i = exp(eta_i); throws with the offending row when mu is not a finite positive number.
Vector mean_from_eta(const Vector& eta) {
    Vector mu = eta.array().exp().matrix();
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        if (!std::isfinite(mu(i)) || !(mu(i) > 0.0)) {
            throw Error(ErrorKind::numeric_failure,
                        "mean is not finite and positive at row " + std::to_string(i) +
                            " (linear predictor " + std::to_string(eta(i)) + ")");
        }
    }
    return mu;
}

double loglik_from_mu(const Vector& mu, const Vector& y) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < mu.size(); ++i) {
        const double theta = lambert_w0(mu(i));
        if (y(i) != 0.0) total += y(i) * std::log(theta);
        total -= std::exp(theta);
    }
    return total;
}

Vector clamp_eta(const Vector& eta, bool& clamped) {
    Vector out = eta;
    for (Eigen::Index i = 0; i < out.size(); ++i) {
        if (std::abs(out(i)) > kEtaClamp) {
            out(i) = std::copysign(kEtaClamp, out(i));
            clamped = true;
        }
    }
    return out;
}

Vector initial_beta(const Dataset& data, InitStrategy init) {
    const Eigen::Index p = data.x.cols();
    if (init == InitStrategy::zeros) return Vector::Zero(p);
    const Vector target = (data.y.array() + 0.5).log().matrix();
    return data.x.householderQr().solve(target);
}

}  // namespace

Dataset make_dataset(Matrix x, Vector y, std::vector<std::string> names, bool intercept) {
    const Eigen::Index n = x.rows();
    const Eigen::Index p = x.cols();
    if (p < 1 || n < 1) throw Error(ErrorKind::invalid_input, "dataset: empty design");
    if (y.size() != n) throw Error(ErrorKind::invalid_input, "dataset: response length differs from rows");
    if (n <= p) {
        throw Error(ErrorKind::invalid_input, "dataset: need more rows (" + std::to_string(n) +
                                                  ") than columns (" + std::to_string(p) + ")");
    }
    if (names.empty()) {
        for (Eigen::Index j = 0; j < p; ++j) names.push_back("x" + std::to_string(j + 1));
    }
    if (static_cast<Eigen::Index>(names.size()) != p) {
        throw Error(ErrorKind::invalid_input, "dataset: one name per column required");
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        if (!std::isfinite(y(i)) || y(i) < 0.0 || y(i) != std::floor(y(i))) {
            throw Error(ErrorKind::validation,
                        "dataset: response at row " + std::to_string(i) + " is not a nonnegative integer");
        }
        for (Eigen::Index j = 0; j < p; ++j) {
            if (!std::isfinite(x(i, j))) {
                throw Error(ErrorKind::validation, "dataset: non-finite covariate at row " + std::to_string(i));
            }
        }
    }
    const Vector sv = Eigen::JacobiSVD<Matrix>(x).singularValues();
    if (!(sv(sv.size() - 1) > kRankTolerance * sv(0))) {
        throw Error(ErrorKind::collinearity_failure, "dataset: design matrix is rank deficient");
    }
    return Dataset{std::move(x), std::move(y), std::move(names), intercept};
}

Dataset with_intercept(const Dataset& data) {
    Matrix x(data.x.rows(), data.x.cols() + 1);
    x.col(0).setOnes();
    x.rightCols(data.x.cols()) = data.x;
    std::vector<std::string> names{"(Intercept)"};
    names.insert(names.end(), data.names.begin(), data.names.end());
    return make_dataset(std::move(x), data.y, std::move(names), true);
}

WorkingState working_state(const Vector& eta, const Vector& y) {
    WorkingState s;
    s.mu = mean_from_eta(eta);
    s.weights.resize(eta.size());
    s.working_response.resize(eta.size());
    for (Eigen::Index i = 0; i < eta.size(); ++i) {
        const double mu = s.mu(i);
        s.weights(i) = mu / (1.0 + lambert_w0(mu));
        s.working_response(i) = eta(i) + (y(i) - mu) / mu;
    }
    return s;
}

double log_likelihood(const Vector& beta, const Dataset& data) {
    check_dims(beta, data);
    return loglik_from_mu(mean_from_eta(data.x * beta), data.y);
}

Vector score(const Vector& beta, const Dataset& data) {
    check_dims(beta, data);
    const Vector mu = mean_from_eta(data.x * beta);
    Vector r(mu.size());
    for (Eigen::Index i = 0; i < mu.size(); ++i) r(i) = (data.y(i) - mu(i)) / (1.0 + lambert_w0(mu(i)));
    return data.x.transpose() * r;
}

Matrix weighted_cross_product(const Matrix& x, const Vector& weights) {
    return x.transpose() * weights.asDiagonal() * x;
}

FitResult irls_fit(const Dataset& data, const FitConfig& config) {
    if (!(config.tol > 0.0) || config.max_iter < 1) {
        throw Error(ErrorKind::invalid_input, "irls_fit: require tol > 0 and max_iter >= 1");
    }
    FitResult out;
    Vector beta = initial_beta(data, config.init);
    bool clamped = false;
    Vector eta = clamp_eta(data.x * beta, clamped);
    WorkingState state = working_state(eta, data.y);
    out.loglik_trace.push_back(loglik_from_mu(state.mu, data.y));

    for (int it = 1; it <= config.max_iter; ++it) {
        const Matrix xtwx = weighted_cross_product(data.x, state.weights);
        const Vector rhs = data.x.transpose() * state.weights.cwiseProduct(state.working_response);
        Vector next;
        try {
            next = solve_spd(xtwx, rhs);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::not_positive_definite) throw;
            throw Error(ErrorKind::collinearity_failure,
                        "irls_fit: weighted cross-product is singular at iteration " + std::to_string(it));
        }
        if (!next.allFinite()) {
            throw Error(ErrorKind::numeric_failure, "irls_fit: non-finite coefficients at iteration " +
                                                        std::to_string(it));
        }
        const double change = (next - beta).norm() / std::max(next.norm(), 1.0);
        beta = std::move(next);
        eta = clamp_eta(data.x * beta, clamped);
        state = working_state(eta, data.y);
        const double ll = loglik_from_mu(state.mu, data.y);
        if (std::isnan(ll)) {
            throw Error(ErrorKind::numeric_failure, "irls_fit: log-likelihood is NaN at iteration " +
                                                        std::to_string(it));
        }
        if (ll < out.loglik_trace.back() - kMonotoneSlack * (1.0 + std::abs(ll))) out.loglik_monotone = false;
        out.loglik_trace.push_back(ll);
        out.iterations = it;
        if (change <= config.tol) {
            out.converged = true;
            break;
        }
    }

    // The final fit must sit strictly inside the clamp.
    if ((data.x * beta).cwiseAbs().maxCoeff() > kEtaClamp) out.converged = false;

    out.beta_mle = beta;
    out.weights = state.weights;
    out.working_response = state.working_response;
    out.mu_hat = state.mu;
    out.loglik = out.loglik_trace.back();
    out.eta_clamped = clamped;
    return out;
}

SpectralModel spectral(const Dataset& data, const FitResult& fit) {
    if (fit.beta_mle.size() != data.x.cols() || fit.weights.size() != data.x.rows()) {
        throw Error(ErrorKind::invalid_input, "spectral: fit does not match dataset");
    }
    EigenDecomposition eig = symmetric_eigen(weighted_cross_product(data.x, fit.weights));
    if (!(eig.values(eig.values.size() - 1) > 0.0)) {
        throw Error(ErrorKind::collinearity_failure, "spectral: X'WX has a nonpositive eigenvalue");
    }
    SpectralModel spec;
    spec.alpha_hat = eig.vectors.transpose() * fit.beta_mle;
    spec.lambda = std::move(eig.values);
    spec.q = std::move(eig.vectors);
    return spec;
}

double mse_mle(const Vector& lambda) {
    if (lambda.size() == 0 || !(lambda.minCoeff() > 0.0)) {
        throw Error(ErrorKind::domain, "mse_mle: eigenvalues must be positive");
    }
    return lambda.cwiseInverse().sum();
}

CollinearityDiagnostics collinearity_diagnostics(const Vector& lambda) {
    if (lambda.size() == 0 || !(lambda.minCoeff() > 0.0)) {
        throw Error(ErrorKind::domain, "collinearity_diagnostics: eigenvalues must be positive");
    }
    const double lmin = lambda.minCoeff();
    CollinearityDiagnostics out;
    out.condition_indices = (lambda / lmin).cwiseSqrt();
    out.condition_number = std::sqrt(lambda.maxCoeff() / lmin);
    return out;
}

}  // namespace bellshrink
