#pragma once

// Superiority conditions between the MLE, LTE, AULTE and MAULTE.
//
//   T1  SB(LTE)   > SB(AULTE)    iff-ish  (l_j - d)(l_j + d + 2k) > 0
//   T2  SB(LTE)   > SB(MAULTE)            f_j(d) > 0
//   T3  SB(AULTE) > SB(MAULTE)            g_j(d) > 0
//   T4  Var(LTE)  > Var(AULTE)            -(k + d)(2 l_j + 3k + d) > 0
//   T5  MMSE(LTE)   - MMSE(AULTE)  PD     T4 condition and Trenkler criterion
//   T6  MMSE(LTE)   - MMSE(MAULTE) PD     2(l_j + k)^2 - (k + d)^2 > 0 and Trenkler
//   T7  MMSE(AULTE) - MMSE(MAULTE) PD     (k + d)(2 l_j + k - d) > 0 and Trenkler
//
// Conditions are evaluated from the sign expressions directly, strictly, for
// every j. The stated interval forms for T2, T3 and T6 are evaluated as
// well and reported next to the expression verdict; they do not agree with
// the expressions everywhere.

#include <optional>
#include <string_view>
#include <vector>

#include "bellshrink/shrinkage.hpp"

namespace bellshrink {

enum class TheoremId { t1 = 1, t2, t3, t4, t5, t6, t7 };

std::string_view to_string(TheoremId id) noexcept;

struct TheoremVerdict {
    TheoremId id = TheoremId::t1;
    bool condition_holds = false;
    // Directly computed difference: SB / variance difference for T1-T4,
    // trace of the MMSE difference for T5-T7.
    double difference_value = 0.0;
    // Whether the claim actually holds numerically whenever the condition
    // does (and the instance is nondegenerate, see `degenerate`).
    bool consistent = true;
    // k + d == 0, alpha == 0 or lambda_j == d for all j: the claimed difference
    // is identically zero, so a strict claim cannot hold.
    bool degenerate = false;

    // T5-T7 only.
    std::optional<double> trenkler_value;
    std::optional<bool> covariance_difference_pd;
    std::optional<bool> trenkler_superior;
    std::optional<double> difference_min_eigenvalue;

    // T2, T3, T6: the stated interval form and whether it matches.
    std::optional<bool> stated_interval_holds;
    std::optional<bool> interval_agrees;
};

bool check_t1(const Vector& lambda, const BiasingParams& params);
bool check_t2(const Vector& lambda, const BiasingParams& params);
bool check_t3(const Vector& lambda, const BiasingParams& params);
bool check_t4(const Vector& lambda, const BiasingParams& params);
bool check_t6(const Vector& lambda, const BiasingParams& params);
bool check_t7(const Vector& lambda, const BiasingParams& params);

/// Per-j factors whose signs decide the conditions.
double t2_expression(double lambda, const BiasingParams& params);  // f_j(d)
double t3_expression(double lambda, const BiasingParams& params);  // g_j(d)

/// Stated interval forms for T2, T3 and T6.
bool t2_stated_interval(const Vector& lambda, const BiasingParams& params);
bool t3_stated_interval(const Vector& lambda, const BiasingParams& params);
bool t6_stated_interval(const Vector& lambda, const BiasingParams& params);

struct TrenklerResult {
    bool pd = false;     // D positive definite
    double value = 0.0;  // a2' (D + a1 a1')^{-1} a2
    bool superior = false;
};

/// MMSE comparison criterion: with D = Cov(b1) - Cov(b2) positive definite,
/// MMSE(b1) - MMSE(b2) is PD iff a2' (D + a1 a1')^{-1} a2 < 1.
TrenklerResult trenkler_check(const Matrix& d, const Vector& a1, const Vector& a2);

enum class MmsePair { lte_aulte, lte_maulte, aulte_maulte };

/// Diagonal of S1 / S2 / S3 = Cov(first) - Cov(second) in canonical
/// coordinates, from the factored closed forms.
Vector covariance_difference_diagonal(MmsePair pair, const Vector& lambda, const BiasingParams& params);

TheoremVerdict mmse_superiority(MmsePair pair, const Vector& lambda, const BiasingParams& params,
                                const Vector& alpha);

TheoremVerdict evaluate_theorem(TheoremId id, const Vector& lambda, const BiasingParams& params,
                                const Vector& alpha);

std::vector<TheoremVerdict> evaluate_all_theorems(const Vector& lambda, const BiasingParams& params,
                                                  const Vector& alpha);

}  // namespace bellshrink
