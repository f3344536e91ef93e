#include "gbsmock/distances.hpp"

#include <cmath>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/kernels/kernels.hpp"
#include "summation.hpp"

namespace gbsmock {

namespace {

void check_pair(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw DimensionError(fmt::format("vectors of length {} and {}", p.size(), q.size()));
    if (p.empty()) throw DimensionError("empty probability vectors");
    for (auto v : {p, q}) {
        PairwiseSum s;
        for (double x : v) {
            if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("probabilities must be finite and non-negative");
            s.add(x);
        }
        if (std::abs(s.total() - 1.0) > 1e-6) {
            throw DomainError(fmt::format("probability vector sums to {:.12g}", s.total()));
        }
    }
}

}  // namespace

double tvd(std::span<const double> p, std::span<const double> q) {
    check_pair(p, q);
    return 0.5 * kernels::abs_diff_sum(p, q);
}

double kl(std::span<const double> p, std::span<const double> q) {
    check_pair(p, q);
    PairwiseSum s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) {
            throw DomainError(fmt::format("KL divergence undefined: outcome {} has p = {} but q = 0", i, p[i]));
        }
        s.add(p[i] * std::log(p[i] / q[i]));
    }
    return std::max(0.0, s.total());
}

double cross_entropy(std::span<const double> p, std::span<const double> q) {
    check_pair(p, q);
    PairwiseSum s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0.0) continue;
        if (q[i] == 0.0) return INFINITY;
        s.add(-p[i] * std::log(q[i]));
    }
    return s.total();
}

double entropy(std::span<const double> p) {
    check_pair(p, p);
    PairwiseSum s;
    for (double x : p)
        if (x > 0.0) s.add(-x * std::log(x));
    return s.total();
}

LogProb state_logprob(std::shared_ptr<const GaussianState> state, ProbabilityOptions options) {
    return [state = std::move(state), options](const ClickPattern& z) {
        return std::log(bitstring_probability(*state, z, options));
    };
}

XeEstimate xe_estimate(const SampleSet& samples, const LogProb& ideal_logprob) {
    if (samples.empty()) throw DomainError("cross-entropy estimate needs at least one sample");
    const std::size_t n = samples.size();
    std::vector<double> v(n);
    PairwiseSum s;
    for (std::size_t i = 0; i < n; ++i) {
        const double lp = ideal_logprob(samples.pattern(i));
        if (!std::isfinite(lp)) {
            throw DomainError(fmt::format("sample {} ({}) has zero ideal probability", i, samples.row_string(i)));
        }
        v[i] = -lp;
        s.add(v[i]);
    }
    XeEstimate est;
    est.count = n;
    est.mean = s.total() / static_cast<double>(n);
    if (n > 1) {
        PairwiseSum ss;
        for (double x : v) ss.add((x - est.mean) * (x - est.mean));
        est.stderr_mean = std::sqrt(ss.total() / static_cast<double>(n - 1) / static_cast<double>(n));
    }
    return est;
}

double hog_rate(double xe_experiment, double xe_mockup, std::size_t n) {
    if (n == 0) throw DomainError("HOG rate needs n >= 1");
    const double x = static_cast<double>(n) * (xe_mockup - xe_experiment);
    return 1.0 / (1.0 + std::exp(-x));
}

}  // namespace gbsmock
