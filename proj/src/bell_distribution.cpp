#include "bellshrink/bell_distribution.hpp"

#include <cmath>
#include <string>

#include "bellshrink/error.hpp"

namespace bellshrink {

namespace {

long double log_add(long double a, long double b) {
    if (a < b) std::swap(a, b);
    return a + std::log1p(std::exp(b - a));
}

}  // namespace

BellParam BellParam::from_mean(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw Error(ErrorKind::domain, "BellParam: mean must be finite and > 0");
    }
    return BellParam(mu, lambert_w0(mu));
}

BellParam BellParam::from_theta(double theta) {
    if (!(theta > 0.0) || !std::isfinite(theta)) {
        throw Error(ErrorKind::domain, "BellParam: theta must be finite and > 0");
    }
    const double mu = theta * std::exp(theta);
    if (!std::isfinite(mu)) {
        throw Error(ErrorKind::domain, "BellParam: theta too large, mean overflows");
    }
    return BellParam(mu, theta);
}

BellNumberTable::BellNumberTable(int max_index) {
    if (max_index < 0) {
        throw Error(ErrorKind::invalid_input, "BellNumberTable: max_index must be >= 0");
    }
    log_bell_.resize(static_cast<std::size_t>(max_index) + 1);
    // Bell triangle: row n starts with B_n; each entry adds its left neighbour
    // and the entry above-left. The last entry of row n is B_{n+1}.
    std::vector<long double> row{0.0L};  // row 0: [B_0 = 1]
    log_bell_[0] = 0.0;
    for (int n = 1; n <= max_index; ++n) {
        std::vector<long double> next(static_cast<std::size_t>(n) + 1);
        next[0] = row.back();
        for (std::size_t j = 1; j < next.size(); ++j) next[j] = log_add(next[j - 1], row[j - 1]);
        log_bell_[static_cast<std::size_t>(n)] = static_cast<double>(next[0]);
        row = std::move(next);
    }
}

double BellNumberTable::log_bell(std::uint64_t y) const {
    if (y >= log_bell_.size()) {
        throw Error(ErrorKind::overflow_guard,
                    "log_bell: index " + std::to_string(y) + " beyond table cap " +
                        std::to_string(max_index()));
    }
    return log_bell_[static_cast<std::size_t>(y)];
}

double log_bell_number(std::uint64_t y) {
    static const BellNumberTable table;
    return table.log_bell(y);
}

double log_pmf(std::uint64_t y, const BellParam& param) {
    const double theta = param.theta();
    const double yd = static_cast<double>(y);
    return yd * std::log(theta) + 1.0 - std::exp(theta) + log_bell_number(y) - std::lgamma(yd + 1.0);
}

BellMoments moments(const BellParam& param) {
    return {param.mean(), param.mean() * (1.0 + param.theta())};
}

std::uint64_t sample(Rng& rng, const BellParam& param) {
    const double theta = param.theta();
    const double rate = std::expm1(theta);
    const std::uint64_t clusters = poisson_sample(rng, rate);
    std::uint64_t y = 0;
    for (std::uint64_t i = 0; i < clusters; ++i) y += ztp_sample(rng, theta);
    return y;
}

}  // namespace bellshrink
