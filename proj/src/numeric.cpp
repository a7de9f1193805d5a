#include "bellshrink/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "bellshrink/error.hpp"

namespace bellshrink {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxJacobiSweeps = 100;
constexpr int kMaxHalleyIterations = 100;

void require_finite(const Matrix& a, const char* what) {
    if (!a.allFinite()) {
        throw Error(ErrorKind::invalid_input, std::string(what) + ": non-finite entry");
    }
}

}  // namespace

EigenDecomposition symmetric_eigen(const Matrix& a) {
    const Eigen::Index p = a.rows();
    if (p < 1 || a.cols() != p) {
        throw Error(ErrorKind::invalid_input, "symmetric_eigen: matrix must be square and non-empty");
    }
    require_finite(a, "symmetric_eigen");
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    if ((a - a.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw Error(ErrorKind::invalid_input, "symmetric_eigen: matrix is not symmetric");
    }

    Matrix m = 0.5 * (a + a.transpose());
    Matrix v = Matrix::Identity(p, p);
    const double norm = m.norm();

    auto off_norm = [&] {
        double s = 0.0;
        for (Eigen::Index i = 0; i < p; ++i)
            for (Eigen::Index j = i + 1; j < p; ++j) s += 2.0 * m(i, j) * m(i, j);
        return std::sqrt(s);
    };

    bool converged = off_norm() <= kEps * norm;
    for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
        for (Eigen::Index i = 0; i < p - 1; ++i) {
            for (Eigen::Index j = i + 1; j < p; ++j) {
                const double aij = m(i, j);
                if (aij == 0.0) continue;
                const double tau = (m(j, j) - m(i, i)) / (2.0 * aij);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // m <- J^T m J, rotating rows/columns i and j.
                for (Eigen::Index r = 0; r < p; ++r) {
                    const double mri = m(r, i);
                    const double mrj = m(r, j);
                    m(r, i) = c * mri - s * mrj;
                    m(r, j) = s * mri + c * mrj;
                }
                for (Eigen::Index r = 0; r < p; ++r) {
                    const double mir = m(i, r);
                    const double mjr = m(j, r);
                    m(i, r) = c * mir - s * mjr;
                    m(j, r) = s * mir + c * mjr;
                }
                m(i, j) = 0.0;
                m(j, i) = 0.0;
                for (Eigen::Index r = 0; r < p; ++r) {
                    const double vri = v(r, i);
                    const double vrj = v(r, j);
                    v(r, i) = c * vri - s * vrj;
                    v(r, j) = s * vri + c * vrj;
                }
            }
        }
        converged = off_norm() <= kEps * norm;
    }
    if (!converged) {
        throw Error(ErrorKind::numeric_failure, "symmetric_eigen: Jacobi sweeps did not converge");
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index x, Eigen::Index y) { return m(x, x) > m(y, y); });

    EigenDecomposition out{Vector(p), Matrix(p, p)};
    for (Eigen::Index j = 0; j < p; ++j) {
        const Eigen::Index src = order[static_cast<std::size_t>(j)];
        out.values(j) = m(src, src);
        Vector col = v.col(src);
        Eigen::Index arg = 0;
        col.cwiseAbs().maxCoeff(&arg);
        if (col(arg) < 0.0) col = -col;
        out.vectors.col(j) = col;
    }
    return out;
}

Vector solve_spd(const Matrix& a, const Vector& b) {
    if (a.rows() != a.cols() || a.rows() != b.size() || a.rows() == 0) {
        throw Error(ErrorKind::invalid_input, "solve_spd: dimension mismatch");
    }
    require_finite(a, "solve_spd");
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::not_positive_definite, "solve_spd: matrix is not positive definite");
    }
    // Eigen's LLT does not flag tiny/negative pivots that round to positive;
    // check the factor diagonal explicitly.
    const Matrix l = llt.matrixL();
    const double max_diag = l.diagonal().maxCoeff();
    if (!(l.diagonal().minCoeff() > 1e-15 * max_diag)) {
        throw Error(ErrorKind::not_positive_definite, "solve_spd: matrix is numerically singular");
    }
    return llt.solve(b);
}

double lambert_w0(double x) {
    if (std::isnan(x) || x < 0.0) {
        throw Error(ErrorKind::domain, "lambert_w0: argument must be >= 0");
    }
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return x;

    // Start: short series near zero, log(1 + x) elsewhere.
    double w = x < 0.25 ? x * (1.0 - x) : std::log1p(x);
    for (int it = 0; it < kMaxHalleyIterations; ++it) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 4.0 * kEps * (1.0 + std::abs(w))) break;
    }
    return std::max(w, 0.0);
}

std::uint64_t mix_seed(std::uint64_t value) noexcept {
    std::uint64_t z = value + 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix_seed(seed)) {}

double Rng::uniform() {
    // 53 random bits, shifted by half an ulp so neither 0 nor 1 is produced.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u = 0.0;
    double v = 0.0;
    double s = 0.0;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double factor = std::sqrt(-2.0 * std::log(s) / s);
    spare_normal_ = v * factor;
    has_spare_ = true;
    return u * factor;
}

Rng Rng::substream(std::uint64_t index) const {
    return Rng(mix_seed(seed_ ^ mix_seed(index + 0x632BE59BD9B4E019ULL)));
}

Matrix mvn_ar1_sample(Rng& rng, int n, int p, double rho) {
    if (n < 1 || p < 1) {
        throw Error(ErrorKind::invalid_input, "mvn_ar1_sample: n and p must be >= 1");
    }
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw Error(ErrorKind::domain, "mvn_ar1_sample: rho must lie in [0, 1)");
    }
    Matrix sigma(p, p);
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j) sigma(i, j) = std::pow(rho, std::abs(i - j));
    Eigen::LLT<Matrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw Error(ErrorKind::numeric_failure, "mvn_ar1_sample: covariance factorization failed");
    }
    const Matrix l = llt.matrixL();

    Matrix x(n, p);
    Vector z(p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) z(j) = rng.normal();
        x.row(i) = (l * z).transpose();
    }
    return x;
}

namespace {

std::uint64_t poisson_inversion(Rng& rng, double lambda) {
    const double u = rng.uniform();
    std::uint64_t k = 0;
    double prob = std::exp(-lambda);
    double cdf = prob;
    while (u > cdf) {
        ++k;
        prob *= lambda / static_cast<double>(k);
        if (prob == 0.0) break;
        cdf += prob;
    }
    return k;
}

// Hormann's transformed rejection with squeeze (PTRS), valid for lambda >= 10.
std::uint64_t poisson_ptrs(Rng& rng, double lambda) {
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::abs(u);
        const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
        if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            -lambda + k * loglam - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

}  // namespace

std::uint64_t poisson_sample(Rng& rng, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::domain, "poisson_sample: lambda must be finite and > 0");
    }
    return lambda < 10.0 ? poisson_inversion(rng, lambda) : poisson_ptrs(rng, lambda);
}

std::uint64_t ztp_sample(Rng& rng, double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw Error(ErrorKind::domain, "ztp_sample: theta must be finite and > 0");
    }
    if (theta >= 1.0) {
        // Acceptance probability 1 - e^-theta >= 0.63.
        for (;;) {
            const std::uint64_t k = poisson_sample(rng, theta);
            if (k >= 1) return k;
        }
    }
    const double target = rng.uniform() * -std::expm1(-theta);
    std::uint64_t k = 1;
    double prob = theta * std::exp(-theta);
    double cdf = prob;
    while (target > cdf) {
        ++k;
        prob *= theta / static_cast<double>(k);
        if (prob == 0.0) break;
        cdf += prob;
    }
    return k;
}

namespace {

double checked_eval(const std::function<double(double)>& f, double x) {
    const double fx = f(x);
    if (!std::isfinite(fx)) {
        throw Error(ErrorKind::numeric_failure,
                    "minimize_scalar: objective is not finite at " + std::to_string(x));
    }
    return fx;
}

struct Point {
    double x;
    double fx;
};

// Brent's method on [a, b] starting from the interior point x.
Point brent(const std::function<double(double)>& f, double a, double b, Point start, double tol) {
    constexpr double kGolden = 0.3819660112501051;
    constexpr int kMaxIter = 200;
    const double rel = std::sqrt(kEps);

    double x = start.x, w = start.x, v = start.x;
    double fx = start.fx, fw = start.fx, fv = start.fx;
    double d = 0.0, e = 0.0;
    for (int it = 0; it < kMaxIter; ++it) {
        const double xm = 0.5 * (a + b);
        const double tol1 = rel * std::abs(x) + tol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::abs(x - xm) <= tol2 - 0.5 * (b - a)) break;

        bool golden = true;
        if (std::abs(e) > tol1) {
            const double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::abs(q);
            const double e_prev = e;
            e = d;
            if (!(std::abs(p) >= std::abs(0.5 * q * e_prev) || p <= q * (a - x) || p >= q * (b - x))) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = std::copysign(tol1, xm - x);
                golden = false;
            }
        }
        if (golden) {
            e = (x >= xm) ? a - x : b - x;
            d = kGolden * e;
        }
        const double u = std::abs(d) >= tol1 ? x + d : x + std::copysign(tol1, d);
        const double fu = checked_eval(f, u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return {x, fx};
}

}  // namespace

double minimize_scalar(const std::function<double(double)>& f, double init, double lower,
                       double upper, double tol) {
    if (!(lower < upper) || !std::isfinite(lower) || !std::isfinite(upper)) {
        throw Error(ErrorKind::invalid_input, "minimize_scalar: require finite lower < upper");
    }
    if (!(tol > 0.0)) {
        throw Error(ErrorKind::invalid_input, "minimize_scalar: tol must be > 0");
    }
    constexpr int kUniform = 128;
    constexpr int kGeometric = 48;
    const double width = upper - lower;

    std::vector<double> xs;
    xs.reserve(kUniform + 2 * kGeometric + 2);
    for (int i = 0; i <= kUniform; ++i) xs.push_back(lower + width * i / kUniform);
    // Geometric refinement toward both ends of the bracket.
    for (int i = 0; i < kGeometric; ++i) {
        const double frac = std::pow(10.0, -12.0 + 12.0 * i / kGeometric);
        xs.push_back(lower + width * frac);
        xs.push_back(upper - width * frac);
    }
    const bool init_inside = init >= lower && init <= upper;
    if (init_inside) xs.push_back(init);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    std::vector<double> fs(xs.size());
    std::size_t best = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fs[i] = checked_eval(f, xs[i]);
        if (fs[i] < fs[best]) best = i;
    }

    const double a = xs[best == 0 ? 0 : best - 1];
    const double b = xs[std::min(best + 1, xs.size() - 1)];
    Point result{xs[best], fs[best]};
    if (b > a) {
        const Point polished = brent(f, a, b, result, tol);
        if (polished.fx <= result.fx) result = polished;
    }
    if (init_inside) {
        const double f_init = checked_eval(f, init);
        if (f_init < result.fx) result = {init, f_init};
    }
    return result.x;
}

}  // namespace bellshrink
