#pragma once

// Independent oracles shared by the unit tests. Nothing here calls the
// library's probability code; determinants come from a plain LU.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "gbsmock/gaussian_state.hpp"
#include "gbsmock/instance.hpp"
#include "gbsmock/probability.hpp"
#include "gbsmock/sample_set.hpp"

namespace testsupport {

using namespace gbsmock;

inline std::shared_ptr<const GaussianState> random_state(int n, std::uint64_t seed, int k = 0) {
    if (k == 0) k = n + (n % 2);
    return std::make_shared<const GaussianState>(build_output_covariance(random_instance(n, k, seed)));
}

// 1/sqrt(det sigma_U) with sigma_U built by hand and an LU determinant.
inline double no_click(const GaussianState& s, const std::vector<int>& modes) {
    const int n = s.n_modes();
    const int k = static_cast<int>(modes.size());
    if (k == 0) return 1.0;
    ComplexMatrix sub(2 * k, 2 * k);
    for (int r = 0; r < 2 * k; ++r) {
        const int gr = r < k ? modes[r] : modes[r - k] + n;
        for (int c = 0; c < 2 * k; ++c) {
            const int gc = c < k ? modes[c] : modes[c - k] + n;
            sub(r, c) = s.sigma()(gr, gc);
        }
    }
    return 1.0 / std::sqrt(sub.partialPivLu().determinant().real());
}

// p(z) by inclusion-exclusion over no-click probabilities: with S the clicking
// modes, p = sum_{V subset S} (-1)^|V| P(no click on (not S) and V).
inline double oracle_probability(const GaussianState& s, const std::vector<std::uint8_t>& z) {
    std::vector<int> off, on;
    for (int a = 0; a < static_cast<int>(z.size()); ++a) (z[a] ? on : off).push_back(a);
    double p = 0.0;
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << on.size()); ++v) {
        std::vector<int> modes = off;
        int size = 0;
        for (std::size_t i = 0; i < on.size(); ++i)
            if (v >> i & 1) {
                modes.push_back(on[i]);
                ++size;
            }
        p += (size % 2 ? -1.0 : 1.0) * no_click(s, modes);
    }
    return p;
}

inline std::vector<std::uint8_t> bits_of(std::size_t x, int n) {
    std::vector<std::uint8_t> z(n);
    for (int a = 0; a < n; ++a) z[a] = x >> (n - 1 - a) & 1u;
    return z;
}

// Full distribution, mode 0 most significant.
inline std::vector<double> oracle_full(const GaussianState& s) {
    const int n = s.n_modes();
    std::vector<double> p(std::size_t{1} << n);
    for (std::size_t x = 0; x < p.size(); ++x) p[x] = oracle_probability(s, bits_of(x, n));
    return p;
}

// Marginal of a full distribution by brute-force summation.
inline std::vector<double> oracle_marginal(const std::vector<double>& full, int n, const std::vector<int>& modes) {
    std::vector<double> t(std::size_t{1} << modes.size(), 0.0);
    for (std::size_t x = 0; x < full.size(); ++x) {
        std::size_t idx = 0;
        for (int m : modes) idx = (idx << 1) | (x >> (n - 1 - m) & 1u);
        t[idx] += full[x];
    }
    return t;
}

// Inverse-CDF sampling from an explicit distribution.
inline SampleSet draw_exact(const std::vector<double>& p, int n, std::size_t L, std::uint64_t seed) {
    std::vector<double> cdf(p.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) cdf[i] = acc += p[i];
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, acc);
    SampleSet out(n);
    for (std::size_t i = 0; i < L; ++i) {
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u(rng));
        out.push_back(bits_of(std::min<std::size_t>(it - cdf.begin(), p.size() - 1), n));
    }
    return out;
}

inline MarginalTable random_table(int k, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    MarginalTable t;
    for (int i = 0; i < k; ++i) t.modes.push_back(i);
    double s = 0.0;
    for (int i = 0; i < (1 << k); ++i) {
        t.probs.push_back(u(rng));
        s += t.probs.back();
    }
    for (auto& p : t.probs) p /= s;
    return t;
}

// Empirical distribution over all 2^n outcomes.
inline std::vector<double> empirical_full(const SampleSet& s) {
    std::vector<int> all(s.n_modes());
    for (int a = 0; a < s.n_modes(); ++a) all[a] = a;
    return s.empirical_table(all).probs;
}

}  // namespace testsupport
