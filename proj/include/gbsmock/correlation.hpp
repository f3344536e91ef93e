#pragma once

#include <cstdint>
#include <span>

namespace gbsmock {

/// Pearson correlation; throws DomainError when x or y has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct PearsonResult {
    double r = 0.0;
    /// Standard deviation of r over paired bootstrap resamples (degenerate
    /// resamples with zero variance are skipped).
    double stddev = 0.0;
    int resamples = 0;
};

PearsonResult pearson_bootstrap(std::span<const double> x, std::span<const double> y, int resamples = 500,
                                std::uint64_t seed = 0);

/// Heuristic interval for Delta delta = delta_m - delta_e from finite-sample
/// estimates, which are biased towards zero:
///   Delta < 0: [-delta_e, Delta];  Delta > 0: [Delta, delta_m];  Delta == 0: [-delta_e, delta_m].
struct DeltaBounds {
    double lower = 0.0;
    double upper = 0.0;
};

DeltaBounds delta_bounds(double delta_e_hat, double delta_m_hat);

}  // namespace gbsmock
