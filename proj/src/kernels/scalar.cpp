#include <cmath>

#include "variants.hpp"

namespace gbsmock::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += std::abs(a[i] - b[i]);
    return s;
}

GainPair greedy_gain(const double* counts, const double* ideal, const std::int64_t* index,
                     std::size_t n, double rows) {
    GainPair g;
    for (std::size_t t = 0; t < n; ++t) {
        const auto i0 = index[t];
        const double d0 = counts[i0] - rows * ideal[i0];
        const double d1 = counts[i0 + 1] - rows * ideal[i0 + 1];
        g.zero += std::abs(d0 + 1.0) - std::abs(d0);
        g.one += std::abs(d1 + 1.0) - std::abs(d1);
    }
    return g;
}

}  // namespace gbsmock::kernels::scalar
