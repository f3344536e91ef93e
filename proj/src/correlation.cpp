#include "gbsmock/correlation.hpp"

#include <cmath>
#include <vector>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/rng.hpp"

namespace gbsmock {

namespace {

// Returns NaN on zero variance.
double pearson_raw(std::span<const double> x, std::span<const double> y) {
    const auto n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) return NAN;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

}  // namespace

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw DimensionError(fmt::format("lengths {} and {} differ", x.size(), y.size()));
    if (x.size() < 2) throw DimensionError("Pearson correlation needs at least two points");
    const double r = pearson_raw(x, y);
    if (std::isnan(r)) throw DomainError("Pearson correlation undefined: zero variance input");
    return r;
}

PearsonResult pearson_bootstrap(std::span<const double> x, std::span<const double> y, int resamples,
                                std::uint64_t seed) {
    PearsonResult out;
    out.r = pearson(x, y);
    if (resamples < 1) return out;
    Rng rng(derive_seed(seed, "bootstrap"));
    const std::size_t n = x.size();
    std::vector<double> bx(n), by(n), rs;
    rs.reserve(resamples);
    for (int b = 0; b < resamples; ++b) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto j = uniform_index(rng, n);
            bx[i] = x[j];
            by[i] = y[j];
        }
        const double r = pearson_raw(bx, by);
        if (!std::isnan(r)) rs.push_back(r);
    }
    out.resamples = static_cast<int>(rs.size());
    if (rs.size() > 1) {
        double m = 0;
        for (double r : rs) m += r;
        m /= static_cast<double>(rs.size());
        double v = 0;
        for (double r : rs) v += (r - m) * (r - m);
        out.stddev = std::sqrt(v / static_cast<double>(rs.size() - 1));
    }
    return out;
}

DeltaBounds delta_bounds(double delta_e_hat, double delta_m_hat) {
    if (!(delta_e_hat >= 0.0) || !(delta_m_hat >= 0.0)) {
        throw DomainError("distance estimates must be non-negative");
    }
    const double d = delta_m_hat - delta_e_hat;
    if (d < 0.0) return {-delta_e_hat, d};
    if (d > 0.0) return {d, delta_m_hat};
    return {-delta_e_hat, delta_m_hat};
}

}  // namespace gbsmock
