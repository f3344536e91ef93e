#pragma once

#include <cstdint>
#include <vector>

#include "gbsmock/probability.hpp"
#include "gbsmock/sample_set.hpp"

namespace gbsmock {

/// Number of surjections from k' labelled items onto l labelled blocks,
/// sum_i (-1)^i C(l, i) (l - i)^k'.
std::uint64_t surjection_count(int kp, int l);

/// {mean, variance, third central moment, ...} truncated to `order` entries.
using ClickMoments = std::vector<double>;

/// Moments of the click number from all-ones marginals of every subset of size <= order:
///   E[X^k'] = sum_l t(k', l) sum_{a1 < ... < al} P(z_a1 = ... = z_al = 1).
/// order <= 3 (cost C(N, order) tables).
ClickMoments click_moments_theoretical(const MarginalOracle& oracle, int n_modes, int order);

/// Population central moments of the per-sample click counts.
ClickMoments click_moments_empirical(const SampleSet& samples, int order);

/// Counts of samples with 0..n clicks.
std::vector<std::uint64_t> click_histogram(const SampleSet& samples);

/// w(x) = exp(A + B x + C x^2) on x = 0..n, normalized by A.
struct ClickGaussian {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
};

/// Fits (B, C) so that w has mean mu1 and variance mu2 (damped Newton).
ClickGaussian fit_click_gaussian(double mu1, double mu2, int n_modes);

/// Normalized w(0..n).
std::vector<double> click_gaussian_pmf(const ClickGaussian& fit, int n_modes);

}  // namespace gbsmock
