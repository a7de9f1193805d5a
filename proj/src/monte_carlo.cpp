#include "bellshrink/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>
#include <thread>

#include "bellshrink/bell_distribution.hpp"
#include "bellshrink/error.hpp"

namespace bellshrink {

namespace {

int design_columns(const SimConfig& c) { return c.p + (c.intercept ? 1 : 0); }

}  // namespace

void validate(const SimConfig& c) {
    if (c.n_reps < 1) throw Error(ErrorKind::invalid_input, "simulation: n_reps must be >= 1");
    if (c.p < 1) throw Error(ErrorKind::invalid_input, "simulation: p must be >= 1");
    if (c.n <= design_columns(c)) throw Error(ErrorKind::invalid_input, "simulation: need n > p");
    if (!(c.rho >= 0.0 && c.rho < 1.0)) throw Error(ErrorKind::invalid_input, "simulation: rho must lie in [0, 1)");
    if (c.estimators.empty()) throw Error(ErrorKind::invalid_input, "simulation: no estimators requested");
    if (c.beta_true.size() != 0 && c.beta_true.size() != design_columns(c)) {
        throw Error(ErrorKind::invalid_input, "simulation: beta_true must have " +
                                                  std::to_string(design_columns(c)) + " entries");
    }
}

Vector effective_beta(const SimConfig& c) {
    if (c.beta_true.size() != 0) return c.beta_true;
    const int q = design_columns(c);
    return Vector::Constant(q, 1.0 / std::sqrt(static_cast<double>(q)));
}

const EstimatorCellResult& SimCellResult::at(EstimatorKind kind) const {
    for (const auto& e : estimators)
        if (e.kind == kind) return e;
    throw Error(ErrorKind::invalid_input, "simulation cell has no " + std::string(to_string(kind)) + " result");
}

Matrix gen_design(Rng& rng, int n, int p, double rho, bool standardize) {
    Matrix x = mvn_ar1_sample(rng, n, p, rho);
    if (standardize) {
        for (int j = 0; j < p; ++j) x.col(j) /= x.col(j).norm();
    }
    return x;
}

Vector gen_response(Rng& rng, const Matrix& x, const Vector& beta) {
    if (beta.size() != x.cols()) throw Error(ErrorKind::invalid_input, "gen_response: beta length mismatch");
    const Vector eta = x * beta;
    Vector y(x.rows());
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const double mu = std::exp(eta(i));
        if (!std::isfinite(mu) || !(mu > 0.0)) {
            throw Error(ErrorKind::numeric_failure, "gen_response: mean not finite at row " + std::to_string(i));
        }
        y(i) = static_cast<double>(sample(rng, BellParam::from_mean(mu)));
    }
    return y;
}

RepOutcome run_repetition(const SimConfig& config, int rep) {
    RepOutcome out;
    out.beta.resize(config.estimators.size());
    Rng rng = Rng(config.seed).substream(static_cast<std::uint64_t>(rep));
    const Vector beta = effective_beta(config);

    Matrix x = gen_design(rng, config.n, config.p, config.rho, config.standardize);
    if (config.intercept) {
        Matrix with_ones(x.rows(), x.cols() + 1);
        with_ones.col(0).setOnes();
        with_ones.rightCols(x.cols()) = x;
        x = std::move(with_ones);
    }
    Vector y = gen_response(rng, x, beta);

    SpectralModel spec;
    FitResult fit;
    try {
        const Dataset data = make_dataset(std::move(x), std::move(y), {}, config.intercept);
        fit = irls_fit(data, config.fit);
        if (!fit.converged) {
            out.failure = "IRLS did not converge";
            return out;
        }
        spec = spectral(data, fit);
    } catch (const Error& e) {
        out.failure = e.what();
        return out;
    }
    out.fit_ok = true;
    out.mle_trace = mse_mle(spec.lambda);

    for (std::size_t i = 0; i < config.estimators.size(); ++i) {
        try {
            out.beta[i] = shrink(config.estimators[i], spec, fit.beta_mle).beta;
        } catch (const Error&) {
            out.beta[i].reset();
        }
    }
    return out;
}

int default_thread_count() {
    if (const char* env = std::getenv("BELLSHRINK_THREADS")) {
        const int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

SimCellResult run_cell(const SimConfig& config, int threads) {
    validate(config);
    if (threads <= 0) threads = default_thread_count();
    threads = std::min(threads, config.n_reps);

    std::vector<RepOutcome> reps(static_cast<std::size_t>(config.n_reps));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r = next++; r < config.n_reps; r = next++) reps[static_cast<std::size_t>(r)] = run_repetition(config, r);
    };
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    }

    const Vector beta = effective_beta(config);
    SimCellResult out;
    out.n_reps = config.n_reps;
    int fit_ok = 0;
    double trace_sum = 0.0;
    for (const auto& r : reps) {
        if (!r.fit_ok) {
            ++out.n_fit_failed;
            continue;
        }
        ++fit_ok;
        trace_sum += r.mle_trace;
    }
    if (fit_ok == 0) {
        throw Error(ErrorKind::cell_failure, "simulation cell: every repetition failed (" +
                                                 (reps.empty() ? std::string() : reps.front().failure) + ")");
    }
    out.mean_mle_trace = trace_sum / fit_ok;

    for (std::size_t i = 0; i < config.estimators.size(); ++i) {
        EstimatorCellResult cell;
        cell.kind = config.estimators[i];
        Vector beta_sum = Vector::Zero(beta.size());
        double err_sum = 0.0;
        std::vector<double> errors;
        for (const auto& r : reps) {
            if (!r.fit_ok || !r.beta[i]) {
                ++cell.n_failed;
                continue;
            }
            const double err = (*r.beta[i] - beta).squaredNorm();
            errors.push_back(err);
            err_sum += err;
            beta_sum += *r.beta[i];
        }
        cell.n_used = static_cast<int>(errors.size());
        if (cell.n_used == 0) {
            cell.sim_mse = cell.mse_spread = cell.sim_sb = std::numeric_limits<double>::quiet_NaN();
        } else {
            cell.sim_mse = err_sum / cell.n_used;
            double ss = 0.0;
            for (double e : errors) ss += (e - cell.sim_mse) * (e - cell.sim_mse);
            cell.mse_spread = cell.n_used > 1 ? std::sqrt(ss / (cell.n_used - 1)) : 0.0;
            cell.sim_sb = (beta_sum / cell.n_used - beta).squaredNorm();
        }
        out.estimators.push_back(cell);
    }
    return out;
}

std::uint64_t cell_seed(std::uint64_t base_seed, double rho, int n, int p) {
    std::uint64_t h = mix_seed(base_seed);
    h = mix_seed(h ^ std::bit_cast<std::uint64_t>(rho));
    h = mix_seed(h ^ (static_cast<std::uint64_t>(static_cast<std::uint32_t>(n)) << 32 |
                      static_cast<std::uint32_t>(p)));
    return h;
}

std::vector<GridRow> run_grid(const std::vector<SimConfig>& configs, int threads) {
    if (configs.empty()) throw Error(ErrorKind::invalid_input, "run_grid: no cells");
    std::vector<GridRow> rows;
    for (const auto& c : configs) {
        GridRow row;
        row.rho = c.rho;
        row.n = c.n;
        row.p = c.p;
        row.seed = c.seed;
        try {
            row.result = run_cell(c, threads);
        } catch (const Error& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace bellshrink
