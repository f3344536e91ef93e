#pragma once

#include <cstdint>
#include <vector>

#include "gbsmock/types.hpp"

namespace gbsmock {

/// C(n, k) saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

/// All size-k subsets of {0..n-1} in lexicographic order.
std::vector<ModeList> all_subsets(int n, int k);

/// `count` distinct sorted size-k subsets drawn uniformly without replacement
/// from derive_seed(seed, "subsets", k). When count >= C(n, k) every subset is
/// returned in lexicographic order instead.
std::vector<ModeList> random_subsets(int n, int k, std::size_t count, std::uint64_t seed);

}  // namespace gbsmock
