#include "gbsmock/ursell.hpp"

#include <bit>
#include <cmath>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"

namespace gbsmock {

namespace {

void check_table(const MarginalTable& t) {
    if (t.probs.size() != (std::size_t{1} << t.modes.size())) {
        throw DimensionError(fmt::format("table over {} modes has {} entries", t.modes.size(), t.probs.size()));
    }
    if (t.modes.empty()) throw DimensionError("Ursell function of an empty mode set");
}

}  // namespace

double ursell_unshifted(const MarginalTable& table, int max_order) {
    check_table(table);
    const int k = table.order();
    if (k > max_order || k > 20) throw BudgetError(fmt::format("Ursell order {} exceeds the cap {}", k, max_order));
    const std::size_t full = std::size_t{1} << k;

    // Moments E[prod_{a in U} z_a]: superset sums of the table, masks in table bit order.
    std::vector<double> moment(table.probs);
    for (int b = 0; b < k; ++b) {
        const std::size_t bit = std::size_t{1} << b;
        for (std::size_t x = 0; x < full; ++x)
            if (!(x & bit)) moment[x] += moment[x | bit];
    }

    // dbar[U] and P[U] = sum over all partitions of U of prod dbar, built from
    // smaller sets; blocks are enumerated as the one holding U's lowest element.
    std::vector<double> dbar(full, 0.0), part(full, 0.0);
    part[0] = 1.0;
    for (std::size_t u = 1; u < full; ++u) {
        const std::size_t low = u & (~u + 1);
        const std::size_t rest = u ^ low;
        if (rest == 0) {
            dbar[u] = moment[u];
            part[u] = moment[u];
            continue;
        }
        double split = 0.0;
        for (std::size_t s = rest;; s = (s - 1) & rest) {
            const std::size_t block = low | s;
            if (block != u) split += dbar[block] * part[u ^ block];
            if (s == 0) break;
        }
        dbar[u] = moment[u] - split;
        part[u] = split + dbar[u];
    }
    return dbar[full - 1];
}

UrsellValue ursell(const MarginalTable& table, int max_order) {
    UrsellValue v;
    v.modes = table.modes;
    v.order = table.order();
    v.value = ursell_unshifted(table, max_order);
    if (v.order == 1) v.value -= 0.5;
    return v;
}

double ursell_mgf_step(int order) {
    // Truncation error shrinks as h^4 after Richardson; round-off grows as
    // 2^k eps / h^k, so higher orders need larger steps.
    static constexpr double steps[] = {1e-3, 1e-3, 1e-3, 1e-2, 2e-2, 4e-2};
    return steps[std::clamp(order, 0, 5)];
}

namespace {

long double mixed_derivative(const MarginalTable& t, long double h) {
    const int k = t.order();
    const std::size_t full = std::size_t{1} << k;
    long double acc = 0.0L;
    for (std::size_t e = 0; e < full; ++e) {
        // Bit b of e set <-> epsilon_b = -1 for table bit b.
        long double top = -INFINITY;
        std::vector<long double> ex(full);
        for (std::size_t x = 0; x < full; ++x) {
            const int plus = std::popcount(x & ~e);
            const int minus = std::popcount(x & e);
            ex[x] = h * static_cast<long double>(plus - minus);
            top = std::max(top, ex[x]);
        }
        long double s = 0.0L;
        for (std::size_t x = 0; x < full; ++x) s += static_cast<long double>(t.probs[x]) * std::exp(ex[x] - top);
        const long double f = top + std::log(s);
        acc += (std::popcount(e) % 2 ? -f : f);
    }
    return acc / std::pow(2.0L * h, static_cast<long double>(k));
}

}  // namespace

UrsellValue ursell_mgf(const MarginalTable& table) {
    check_table(table);
    const int k = table.order();
    if (k > 5) throw BudgetError(fmt::format("log-MGF Ursell limited to 5 modes, got {}", k));
    const long double h = ursell_mgf_step(k);
    const long double coarse = mixed_derivative(table, h);
    const long double fine = mixed_derivative(table, h / 2);
    UrsellValue v;
    v.modes = table.modes;
    v.order = k;
    v.value = static_cast<double>((4.0L * fine - coarse) / 3.0L);
    return v;
}

UrsellValue ursell_empirical(const SampleSet& samples, std::span<const int> modes, int max_order) {
    return ursell(samples.empirical_table(modes), max_order);
}

}  // namespace gbsmock
