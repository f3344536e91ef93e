#include <arm_neon.h>

#include <cmath>

#include "variants.hpp"

namespace gbsmock::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vfmaq_f64(acc0, vld1q_f64(a + i), vld1q_f64(b + i));
        acc1 = vfmaq_f64(acc1, vld1q_f64(a + i + 2), vld1q_f64(b + i + 2));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
    float64x2_t acc0 = vdupq_n_f64(0.0);
    float64x2_t acc1 = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        acc0 = vaddq_f64(acc0, vabdq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc1 = vaddq_f64(acc1, vabdq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double s = vaddvq_f64(vaddq_f64(acc0, acc1));
    for (; i < n; ++i) s += std::abs(a[i] - b[i]);
    return s;
}

GainPair greedy_gain(const double* counts, const double* ideal, const std::int64_t* index,
                     std::size_t n, double rows) {
    // No gather on NEON: each lane pair is the (bit 0, bit 1) entry of one subset.
    const float64x2_t r = vdupq_n_f64(rows);
    const float64x2_t one = vdupq_n_f64(1.0);
    float64x2_t g = vdupq_n_f64(0.0);
    for (std::size_t t = 0; t < n; ++t) {
        const auto i0 = index[t];
        float64x2_t d = vfmsq_f64(vld1q_f64(counts + i0), r, vld1q_f64(ideal + i0));
        g = vaddq_f64(g, vsubq_f64(vabsq_f64(vaddq_f64(d, one)), vabsq_f64(d)));
    }
    return GainPair{vgetq_lane_f64(g, 0), vgetq_lane_f64(g, 1)};
}

}  // namespace gbsmock::kernels::neon
