#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/kernels/kernels.hpp"
#include "gbsmock/samplers.hpp"
#include "gbsmock/subsets.hpp"

namespace gbsmock {

namespace {

// Index of the smallest value; near-ties (within tol) broken uniformly at random.
std::size_t pick_min(std::span<const double> v, double tol, Rng& rng) {
    double best = v[0];
    for (double x : v) best = std::min(best, x);
    std::size_t n_best = 0;
    std::size_t chosen = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] <= best + tol) {
            // Reservoir choice keeps the pick uniform over the tied set.
            ++n_best;
            if (n_best == 1 || uniform_index(rng, n_best) == 0) chosen = i;
        }
    }
    return chosen;
}

std::vector<double> checked_table(const MarginalOracle& oracle, const ModeList& modes) {
    auto t = oracle(modes);
    if (t.probs.size() != (std::size_t{1} << modes.size())) {
        throw DimensionError(fmt::format("oracle returned {} entries for {} modes", t.probs.size(), modes.size()));
    }
    return std::move(t.probs);
}

}  // namespace

GreedyBuilder::GreedyBuilder(MarginalOracle oracle, int n_modes, int order, std::size_t n_samples, Rng& rng)
    : oracle_(std::move(oracle)), n_modes_(n_modes), order_(order), rows_(n_samples), rng_(rng) {
    if (order < 1) throw DomainError(fmt::format("greedy order must be at least 1, got {}", order));
    if (order > n_modes) throw DomainError(fmt::format("greedy order {} exceeds the mode count {}", order, n_modes));
    if (order > 20) throw BudgetError(fmt::format("greedy order {} is too large", order));
    if (n_samples == 0) throw DomainError("sample count must be at least 1");
    columns_.assign(n_modes, std::vector<std::uint8_t>(n_samples, 0));
}

void GreedyBuilder::fill_prefix() {
    if (filled_ != 0) throw DomainError("greedy prefix already filled");
    const int k = order_;
    ModeList modes(k);
    std::iota(modes.begin(), modes.end(), 0);
    const auto ideal = checked_table(oracle_, modes);
    const std::size_t np = ideal.size();
    std::vector<double> counts(np, 0.0);
    std::vector<double> gain(np);
    for (std::size_t i = 0; i < rows_; ++i) {
        const double rows = static_cast<double>(i + 1);
        for (std::size_t p = 0; p < np; ++p) {
            const double target = rows * ideal[p];
            gain[p] = std::abs(counts[p] + 1.0 - target) - std::abs(counts[p] - target);
        }
        const auto p = pick_min(gain, 1e-12, rng_);
        counts[p] += 1.0;
        for (int t = 0; t < k; ++t) columns_[t][i] = p >> (k - 1 - t) & 1u;
    }
    subsets_ = {modes};
    counts_ = std::move(counts);
    filled_ = k;
}

void GreedyBuilder::fill_next_column() {
    if (filled_ < order_) throw DomainError("greedy prefix must be filled first");
    if (done()) throw DomainError("all greedy columns are filled");
    const int j = filled_;
    const int k = order_;
    const std::size_t np = std::size_t{1} << k;

    auto prefixes = all_subsets(j, k - 1);
    const std::size_t n_sub = prefixes.size();
    subsets_.clear();
    subsets_.reserve(n_sub);
    std::vector<double> ideal(n_sub * np);
    for (std::size_t t = 0; t < n_sub; ++t) {
        ModeList modes = prefixes[t];
        modes.push_back(j);
        const auto table = checked_table(oracle_, modes);
        std::copy(table.begin(), table.end(), ideal.begin() + static_cast<std::ptrdiff_t>(t * np));
        subsets_.push_back(std::move(modes));
    }
    counts_.assign(n_sub * np, 0.0);

    std::vector<std::size_t> order(rows_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order.begin(), order.end(), rng_);

    std::vector<std::int64_t> index(n_sub);
    const double tol = 1e-9 * std::max<double>(1.0, static_cast<double>(n_sub));
    auto& column = columns_[j];
    for (std::size_t i = 0; i < rows_; ++i) {
        const std::size_t r = order[i];
        for (std::size_t t = 0; t < n_sub; ++t) {
            std::size_t pre = 0;
            for (int m : prefixes[t]) pre = (pre << 1) | columns_[m][r];
            index[t] = static_cast<std::int64_t>(t * np + (pre << 1));
        }
        const auto g = kernels::greedy_gain(counts_, ideal, index, static_cast<double>(i + 1));
        const double gains[2] = {g.zero, g.one};
        const auto b = pick_min(gains, tol, rng_);
        column[r] = static_cast<std::uint8_t>(b);
        for (std::size_t t = 0; t < n_sub; ++t) counts_[index[t] + static_cast<std::int64_t>(b)] += 1.0;
    }
    ++filled_;
}

std::vector<double> GreedyBuilder::tracked_counts(std::size_t subset) const {
    const std::size_t np = std::size_t{1} << order_;
    if (subset >= subsets_.size()) throw IndexError(fmt::format("tracked subset {} out of range", subset));
    return {counts_.begin() + static_cast<std::ptrdiff_t>(subset * np),
            counts_.begin() + static_cast<std::ptrdiff_t>((subset + 1) * np)};
}

SampleSet GreedyBuilder::finish() {
    if (!done()) throw DomainError("greedy columns are not all filled");
    std::vector<std::size_t> order(rows_);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(order.begin(), order.end(), rng_);
    SampleSet out(n_modes_);
    out.reserve(rows_);
    std::vector<std::uint8_t> bits(n_modes_);
    for (std::size_t r : order) {
        for (int a = 0; a < n_modes_; ++a) bits[a] = columns_[a][r];
        out.push_back(bits);
    }
    return out;
}

namespace {

SampleSet greedy_run(const MarginalOracle& oracle, int n_modes, int order, std::size_t rows, Rng& rng) {
    GreedyBuilder builder(oracle, n_modes, order, rows, rng);
    builder.fill_prefix();
    while (!builder.done()) builder.fill_next_column();
    return builder.finish();
}

}  // namespace

SampleSet greedy_sample(const MarginalOracle& oracle, int n_modes, int order, std::size_t n_samples,
                        std::uint64_t seed, const GreedyOptions& options) {
    SampleSet out(n_modes);
    if (!options.iid) {
        Rng rng(derive_seed(seed, "greedy"));
        out = greedy_run(oracle, n_modes, order, n_samples, rng);
    } else {
        if (n_samples == 0) throw DomainError("sample count must be at least 1");
        const std::size_t rows = options.iid_rows ? options.iid_rows : n_samples;
        out.reserve(n_samples);
        for (std::size_t s = 0; s < n_samples; ++s) {
            Rng rng(derive_seed(seed, "greedy-iid", s));
            auto run = greedy_run(oracle, n_modes, order, rows, rng);
            out.push_back(run.row(uniform_index(rng, rows)));
        }
        out.metadata.extra["iid_rows"] = std::to_string(rows);
    }
    out.metadata.sampler = "greedy";
    out.metadata.order = order;
    out.metadata.seed = seed;
    return out;
}

}  // namespace gbsmock
