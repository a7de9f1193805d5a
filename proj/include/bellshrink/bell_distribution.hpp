#pragma once

#include <cstdint>
#include <vector>

#include "bellshrink/numeric.hpp"

namespace bellshrink {

/// Bell law parameterized by its mean mu = theta * e^theta, theta = W0(mu).
class BellParam {
public:
    static BellParam from_mean(double mu);
    static BellParam from_theta(double theta);

    double mean() const noexcept { return mu_; }
    double theta() const noexcept { return theta_; }

private:
    BellParam(double mu, double theta) : mu_(mu), theta_(theta) {}

    double mu_;
    double theta_;
};

inline constexpr int kDefaultMaxBellIndex = 400;

/// log B_0 .. log B_cap from the Bell-triangle recurrence, carried out in
/// log space with long double accumulation.
class BellNumberTable {
public:
    explicit BellNumberTable(int max_index = kDefaultMaxBellIndex);

    int max_index() const noexcept { return static_cast<int>(log_bell_.size()) - 1; }
    double log_bell(std::uint64_t y) const;

private:
    std::vector<double> log_bell_;
};

/// log B_y from a shared table capped at kDefaultMaxBellIndex.
double log_bell_number(std::uint64_t y);

double log_pmf(std::uint64_t y, const BellParam& param);

struct BellMoments {
    double mean;
    double variance;
};

BellMoments moments(const BellParam& param);

/// Compound-Poisson draw: N ~ Poisson(e^theta - 1), then the sum of N
/// zero-truncated Poisson(theta) variates.
std::uint64_t sample(Rng& rng, const BellParam& param);

}  // namespace bellshrink
