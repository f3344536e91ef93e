#pragma once

#include "gbsmock/kernels/kernels.hpp"

namespace gbsmock::kernels {

namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double abs_diff_sum(const double* a, const double* b, std::size_t n);
GainPair greedy_gain(const double* counts, const double* ideal, const std::int64_t* index,
                     std::size_t n, double rows);
}  // namespace scalar

#ifdef GBSMOCK_HAVE_AVX2
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double abs_diff_sum(const double* a, const double* b, std::size_t n);
GainPair greedy_gain(const double* counts, const double* ideal, const std::int64_t* index,
                     std::size_t n, double rows);
}  // namespace avx2
#endif

#ifdef GBSMOCK_HAVE_NEON
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double abs_diff_sum(const double* a, const double* b, std::size_t n);
GainPair greedy_gain(const double* counts, const double* ideal, const std::int64_t* index,
                     std::size_t n, double rows);
}  // namespace neon
#endif

}  // namespace gbsmock::kernels
