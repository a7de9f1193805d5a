#include "bellshrink/theory.hpp"

#include <cmath>

#include "bellshrink/error.hpp"

namespace bellshrink {

namespace {

// Relative slack for declaring a computed MMSE difference positive definite.
constexpr double kPdSlack = 1e-10;

template <typename Pred>
bool for_all(const Vector& lambda, Pred pred) {
    for (Eigen::Index j = 0; j < lambda.size(); ++j)
        if (!pred(lambda(j))) return false;
    return true;
}

void validate(const Vector& lambda, const BiasingParams& params) {
    if (lambda.size() == 0 || !(lambda.minCoeff() > 0.0)) {
        throw Error(ErrorKind::domain, "theorem check: eigenvalues must be positive");
    }
    if (!(params.k > 0.0) || !std::isfinite(params.d)) {
        throw Error(ErrorKind::domain, "theorem check: require k > 0 and finite d");
    }
}

double kd(const BiasingParams& p) { return p.k + p.d; }

double min_eigenvalue(const Matrix& m) {
    return symmetric_eigen(0.5 * (m + m.transpose())).values.minCoeff();
}

}  // namespace

std::string_view to_string(TheoremId id) noexcept {
    switch (id) {
        case TheoremId::t1: return "T1";
        case TheoremId::t2: return "T2";
        case TheoremId::t3: return "T3";
        case TheoremId::t4: return "T4";
        case TheoremId::t5: return "T5";
        case TheoremId::t6: return "T6";
        case TheoremId::t7: return "T7";
    }
    return "?";
}

bool check_t1(const Vector& lambda, const BiasingParams& params) {
    validate(lambda, params);
    return for_all(lambda, [&](double l) { return (l - params.d) * (l + params.d + 2.0 * params.k) > 0.0; });
}

double t2_expression(double l, const BiasingParams& p) {
    const double d = p.d;
    const double k = p.k;
    return (l - d) * (k + d) * (d * d - d * (l - k) - 2.0 * l * l - 5.0 * k * l - 2.0 * k * k);
}

double t3_expression(double l, const BiasingParams& p) {
    const double d = p.d;
    const double k = p.k;
    return (d * d - 2.0 * d * l - 2.0 * k * k - 4.0 * k * l - l * l) * (l - d) * (2.0 * k + d + l);
}

bool check_t2(const Vector& lambda, const BiasingParams& params) {
    validate(lambda, params);
    return for_all(lambda, [&](double l) { return t2_expression(l, params) > 0.0; });
}

bool check_t3(const Vector& lambda, const BiasingParams& params) {
    validate(lambda, params);
    return for_all(lambda, [&](double l) { return t3_expression(l, params) > 0.0; });
}

bool check_t4(const Vector& lambda, const BiasingParams& params) {
    validate(lambda, params);
    return for_all(lambda, [&](double l) {
        return -kd(params) * (2.0 * l + 3.0 * params.k + params.d) > 0.0;
    });
}

bool check_t6(const Vector& lambda, const BiasingParams& params) {
    validate(lambda, params);
    const double d = params.d;
    const double k = params.k;
    return for_all(lambda, [&](double l) { return -d * d - 2.0 * k * d + 2.0 * l * l + 4.0 * k * l + k * k > 0.0; });
}

bool check_t7(const Vector& lambda, const BiasingParams& params) {
    validate(lambda, params);
    return for_all(lambda, [&](double l) { return kd(params) * (2.0 * l + params.k - params.d) > 0.0; });
}

bool t2_stated_interval(const Vector& lambda, const BiasingParams& params) {
    const double d = params.d;
    const double k = params.k;
    return for_all(lambda, [&](double l) { return d > 2.0 * l + k || (-k < d && d < l) || d < -l - 2.0 * k; });
}

bool t3_stated_interval(const Vector& lambda, const BiasingParams& params) {
    const double d = params.d;
    const double k = params.k;
    return for_all(lambda, [&](double l) {
        const double r = std::sqrt(2.0 * (l + k));
        return d < -2.0 * k - l || (l - r < d && d < l) || d > l + r;
    });
}

bool t6_stated_interval(const Vector& lambda, const BiasingParams& params) {
    const double d = params.d;
    const double k = params.k;
    return for_all(lambda, [&](double l) {
        const double r = std::sqrt(2.0 * (l + k));
        return k - r < d && d < k + r;
    });
}

TrenklerResult trenkler_check(const Matrix& d, const Vector& a1, const Vector& a2) {
    const Eigen::Index p = d.rows();
    if (d.cols() != p || a1.size() != p || a2.size() != p || p == 0) {
        throw Error(ErrorKind::invalid_input, "trenkler_check: dimension mismatch");
    }
    TrenklerResult out;
    Eigen::LLT<Matrix> llt(d);
    out.pd = llt.info() == Eigen::Success;
    if (out.pd) {
        const Matrix l = llt.matrixL();
        out.pd = l.diagonal().minCoeff() > 1e-15 * l.diagonal().maxCoeff();
    }
    const Matrix m = d + a1 * a1.transpose();
    Eigen::FullPivLU<Matrix> lu(m);
    if (!lu.isInvertible()) {
        throw Error(ErrorKind::numeric_failure, "trenkler_check: D + a1 a1' is singular");
    }
    out.value = a2.dot(lu.solve(a2));
    out.superior = out.pd && out.value < 1.0;
    return out;
}

Vector covariance_difference_diagonal(MmsePair pair, const Vector& lambda, const BiasingParams& params) {
    validate(lambda, params);
    const double k = params.k;
    const double d = params.d;
    const double s = k + d;
    Vector out(lambda.size());
    for (Eigen::Index j = 0; j < lambda.size(); ++j) {
        const double l = lambda(j);
        const double lk = l + k;
        const double ld2 = (l - d) * (l - d);
        const double lk2 = lk * lk;
        switch (pair) {
            case MmsePair::lte_aulte:
                out(j) = ld2 / (l * lk2 * lk2) * (-s * (2.0 * l + 3.0 * k + d));
                break;
            case MmsePair::lte_maulte:
                out(j) = ld2 * s * s * (2.0 * lk2 - s * s) / (l * lk2 * lk2 * lk2);
                break;
            case MmsePair::aulte_maulte: {
                const double t = l + 2.0 * k + d;
                out(j) = ld2 * t * t / (l * lk2 * lk2 * lk2) * s * (2.0 * l + k - d);
                break;
            }
        }
    }
    return out;
}

TheoremVerdict mmse_superiority(MmsePair pair, const Vector& lambda, const BiasingParams& params,
                                const Vector& alpha) {
    validate(lambda, params);
    if (alpha.size() != lambda.size()) {
        throw Error(ErrorKind::invalid_input, "mmse_superiority: alpha and lambda lengths differ");
    }
    EstimatorKind first = EstimatorKind::lte;
    EstimatorKind second = EstimatorKind::aulte;
    TheoremVerdict v;
    switch (pair) {
        case MmsePair::lte_aulte:
            v.id = TheoremId::t5;
            v.condition_holds = check_t4(lambda, params);
            break;
        case MmsePair::lte_maulte:
            v.id = TheoremId::t6;
            second = EstimatorKind::maulte;
            v.condition_holds = check_t6(lambda, params);
            v.stated_interval_holds = t6_stated_interval(lambda, params);
            v.interval_agrees = *v.stated_interval_holds == v.condition_holds;
            break;
        case MmsePair::aulte_maulte:
            v.id = TheoremId::t7;
            first = EstimatorKind::aulte;
            second = EstimatorKind::maulte;
            v.condition_holds = check_t7(lambda, params);
            break;
    }
    const Vector a1 = bias_vector(first, lambda, params, alpha);
    const Vector a2 = bias_vector(second, lambda, params, alpha);
    const Matrix s = covariance_difference_diagonal(pair, lambda, params).asDiagonal();
    v.degenerate = kd(params) == 0.0;

    try {
        const TrenklerResult t = trenkler_check(s, a1, a2);
        v.trenkler_value = t.value;
        v.covariance_difference_pd = t.pd;
        v.trenkler_superior = t.superior;
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::numeric_failure) throw;
        v.covariance_difference_pd = false;
        v.trenkler_superior = false;
        v.degenerate = true;
    }

    const Matrix diff = mmse_matrix(first, lambda, params, alpha) - mmse_matrix(second, lambda, params, alpha);
    v.difference_value = diff.trace();
    v.difference_min_eigenvalue = min_eigenvalue(diff);
    const double scale = diff.cwiseAbs().maxCoeff();
    const bool claimed = v.condition_holds && *v.trenkler_superior && !v.degenerate;
    v.consistent = !claimed || *v.difference_min_eigenvalue > -kPdSlack * scale;
    return v;
}

TheoremVerdict evaluate_theorem(TheoremId id, const Vector& lambda, const BiasingParams& params,
                                const Vector& alpha) {
    switch (id) {
        case TheoremId::t5: return mmse_superiority(MmsePair::lte_aulte, lambda, params, alpha);
        case TheoremId::t6: return mmse_superiority(MmsePair::lte_maulte, lambda, params, alpha);
        case TheoremId::t7: return mmse_superiority(MmsePair::aulte_maulte, lambda, params, alpha);
        default: break;
    }
    validate(lambda, params);
    TheoremVerdict v;
    v.id = id;
    const bool alpha_zero = alpha.cwiseAbs().maxCoeff() == 0.0;
    v.degenerate = kd(params) == 0.0 || alpha_zero;
    switch (id) {
        case TheoremId::t1:
            v.condition_holds = check_t1(lambda, params);
            v.difference_value = squared_bias(EstimatorKind::lte, lambda, params, alpha) -
                                 squared_bias(EstimatorKind::aulte, lambda, params, alpha);
            break;
        case TheoremId::t2:
            v.condition_holds = check_t2(lambda, params);
            v.stated_interval_holds = t2_stated_interval(lambda, params);
            v.difference_value = squared_bias(EstimatorKind::lte, lambda, params, alpha) -
                                 squared_bias(EstimatorKind::maulte, lambda, params, alpha);
            break;
        case TheoremId::t3:
            v.condition_holds = check_t3(lambda, params);
            v.stated_interval_holds = t3_stated_interval(lambda, params);
            v.difference_value = squared_bias(EstimatorKind::aulte, lambda, params, alpha) -
                                 squared_bias(EstimatorKind::maulte, lambda, params, alpha);
            break;
        case TheoremId::t4:
            v.condition_holds = check_t4(lambda, params);
            v.degenerate = kd(params) == 0.0 || (lambda.array() == params.d).all();
            v.difference_value = variance_part(EstimatorKind::lte, lambda, params) -
                                 variance_part(EstimatorKind::aulte, lambda, params);
            break;
        default: break;
    }
    if (v.stated_interval_holds) v.interval_agrees = *v.stated_interval_holds == v.condition_holds;
    v.consistent = !v.condition_holds || v.degenerate || v.difference_value > 0.0;
    return v;
}

std::vector<TheoremVerdict> evaluate_all_theorems(const Vector& lambda, const BiasingParams& params,
                                                  const Vector& alpha) {
    std::vector<TheoremVerdict> out;
    for (int i = 1; i <= 7; ++i) out.push_back(evaluate_theorem(static_cast<TheoremId>(i), lambda, params, alpha));
    return out;
}

}  // namespace bellshrink
