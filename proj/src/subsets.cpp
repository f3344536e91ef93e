#include "gbsmock/subsets.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/rng.hpp"

namespace gbsmock {

std::uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 c = 1;
    for (int i = 1; i <= k; ++i) {
        c = c * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
        if (c > UINT64_MAX) return UINT64_MAX;
    }
    return static_cast<std::uint64_t>(c);
}

std::vector<ModeList> all_subsets(int n, int k) {
    std::vector<ModeList> out;
    if (k < 0 || k > n) return out;
    ModeList c(k);
    std::iota(c.begin(), c.end(), 0);
    while (true) {
        out.push_back(c);
        int i = k - 1;
        while (i >= 0 && c[i] == n - k + i) --i;
        if (i < 0) break;
        ++c[i];
        for (int t = i + 1; t < k; ++t) c[t] = c[t - 1] + 1;
    }
    return out;
}

std::vector<ModeList> random_subsets(int n, int k, std::size_t count, std::uint64_t seed) {
    if (k < 1 || k > n) throw DomainError(fmt::format("subset size {} invalid for {} modes", k, n));
    if (count >= binomial(n, k)) return all_subsets(n, k);
    Rng rng(derive_seed(seed, "subsets", static_cast<std::uint64_t>(k)));
    std::vector<int> pool(n);
    std::set<ModeList> seen;
    std::vector<ModeList> out;
    out.reserve(count);
    while (out.size() < count) {
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < k; ++i) std::swap(pool[i], pool[i + uniform_index(rng, n - i)]);
        ModeList s(pool.begin(), pool.begin() + k);
        std::sort(s.begin(), s.end());
        if (seen.insert(s).second) out.push_back(std::move(s));
    }
    return out;
}

}  // namespace gbsmock
