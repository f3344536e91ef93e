#include <immintrin.h>

#include <cmath>

#include "variants.hpp"

namespace gbsmock::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d sh = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

inline __m256d vabs(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
    }
    if (i + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double abs_diff_sum(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        acc0 = _mm256_add_pd(acc0, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
        acc1 = _mm256_add_pd(
            acc1, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4))));
    }
    if (i + 4 <= n) {
        acc0 = _mm256_add_pd(acc0, vabs(_mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i))));
        i += 4;
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) s += std::abs(a[i] - b[i]);
    return s;
}

GainPair greedy_gain(const double* counts, const double* ideal, const std::int64_t* index,
                     std::size_t n, double rows) {
    const __m256d r = _mm256_set1_pd(rows);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256i step = _mm256_set1_epi64x(1);
    __m256d g0 = _mm256_setzero_pd();
    __m256d g1 = _mm256_setzero_pd();
    std::size_t t = 0;
    for (; t + 4 <= n; t += 4) {
        __m256i i0 = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(index + t));
        __m256i i1 = _mm256_add_epi64(i0, step);
        __m256d d0 = _mm256_fnmadd_pd(r, _mm256_i64gather_pd(ideal, i0, 8), _mm256_i64gather_pd(counts, i0, 8));
        __m256d d1 = _mm256_fnmadd_pd(r, _mm256_i64gather_pd(ideal, i1, 8), _mm256_i64gather_pd(counts, i1, 8));
        g0 = _mm256_add_pd(g0, _mm256_sub_pd(vabs(_mm256_add_pd(d0, one)), vabs(d0)));
        g1 = _mm256_add_pd(g1, _mm256_sub_pd(vabs(_mm256_add_pd(d1, one)), vabs(d1)));
    }
    GainPair g{hsum(g0), hsum(g1)};
    for (; t < n; ++t) {
        const auto i0 = index[t];
        const double d0 = counts[i0] - rows * ideal[i0];
        const double d1 = counts[i0 + 1] - rows * ideal[i0 + 1];
        g.zero += std::abs(d0 + 1.0) - std::abs(d0);
        g.one += std::abs(d1 + 1.0) - std::abs(d1);
    }
    return g;
}

}  // namespace gbsmock::kernels::avx2
