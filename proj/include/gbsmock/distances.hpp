#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>

#include "gbsmock/gaussian_state.hpp"
#include "gbsmock/probability.hpp"
#include "gbsmock/sample_set.hpp"

namespace gbsmock {

// Natural logarithms throughout.

/// (1/2) sum |p - q|. Both vectors must sum to 1 within 1e-6.
double tvd(std::span<const double> p, std::span<const double> q);

/// sum p log(p / q); p = 0 terms vanish. Throws DomainError naming the first
/// outcome with p > 0 and q = 0.
double kl(std::span<const double> p, std::span<const double> q);

/// -sum p log q.
double cross_entropy(std::span<const double> p, std::span<const double> q);

/// -sum p log p.
double entropy(std::span<const double> p);

/// log q(z) for a click pattern.
using LogProb = std::function<double(const ClickPattern&)>;

/// log of the exact probability under a state.
LogProb state_logprob(std::shared_ptr<const GaussianState> state, ProbabilityOptions options = {});

struct XeEstimate {
    double mean = 0.0;
    double stderr_mean = 0.0;
    std::size_t count = 0;
};

/// -(1/n) sum log q(z_i) with the standard error of the mean (sample standard
/// deviation over sqrt(n)). Throws DomainError identifying a sample with q = 0.
XeEstimate xe_estimate(const SampleSet& samples, const LogProb& ideal_logprob);

/// 1 / (1 + exp(-n (xe_mockup - xe_experiment))). Saturates to 0 or 1 for large n.
double hog_rate(double xe_experiment, double xe_mockup, std::size_t n);

}  // namespace gbsmock
