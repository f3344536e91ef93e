#include "gbsmock/probability.hpp"

#include <bit>
#include <cmath>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/log.hpp"
#include "gbsmock/torontonian.hpp"
#include "summation.hpp"

namespace gbsmock {

ClickPattern::ClickPattern(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto b : bits_) {
        if (b > 1) throw DomainError("click pattern entries must be 0 or 1");
    }
}

ClickPattern ClickPattern::from_string(std::string_view text) {
    std::vector<std::uint8_t> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c != '0' && c != '1') throw DomainError(fmt::format("invalid click character '{}'", c));
        bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return ClickPattern(std::move(bits));
}

ClickPattern ClickPattern::from_clicks(int n_modes, std::span<const int> clicks) {
    check_modes(clicks, n_modes);
    std::vector<std::uint8_t> bits(n_modes, 0);
    for (int c : clicks) bits[c] = 1;
    return ClickPattern(std::move(bits));
}

ModeList ClickPattern::clicks() const {
    ModeList s;
    for (int i = 0; i < size(); ++i)
        if (bits_[i]) s.push_back(i);
    return s;
}

int ClickPattern::click_count() const {
    int c = 0;
    for (auto b : bits_) c += b;
    return c;
}

std::string ClickPattern::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
    return s;
}

MarginalTable MarginalTable::drop_last() const {
    if (modes.empty()) throw DimensionError("cannot drop a mode from an empty table");
    MarginalTable out;
    out.modes.assign(modes.begin(), modes.end() - 1);
    out.probs.resize(probs.size() / 2);
    for (std::size_t i = 0; i < out.probs.size(); ++i) out.probs[i] = probs[2 * i] + probs[2 * i + 1];
    out.clamped = clamped;
    return out;
}

double bitstring_probability(const GaussianState& state, const ClickPattern& z, const ProbabilityOptions& options) {
    if (z.size() != state.n_modes()) {
        throw DimensionError(fmt::format("click pattern has {} modes, state has {}", z.size(), state.n_modes()));
    }
    ModeList s = z.clicks();
    if (static_cast<int>(s.size()) > options.click_budget) {
        std::string msg = fmt::format("click count {} exceeds the budget of {} (cost grows as 2^clicks)",
                                      s.size(), options.click_budget);
        if (options.strict) throw BudgetError(msg);
        warn(msg);
    }
    // I - O_S = (sigma^-1)_S
    ComplexMatrix b = doubled_submatrix(state.inverse(), state.n_modes(), s);
    return torontonian_from_complement(b) * state.vacuum_probability();
}

MarginalTable marginal_table(const GaussianState& state, std::span<const int> modes, const MarginalOptions& options) {
    const int k = static_cast<int>(modes.size());
    if (k > options.max_modes) {
        throw BudgetError(fmt::format("marginal over {} modes exceeds the cap of {}", k, options.max_modes));
    }
    GaussianState reduced = reduce_state(state, modes);

    const std::size_t size = std::size_t{1} << k;
    const std::uint64_t full = size - 1;
    // f[X] = probability that no mode outside X clicks.
    std::vector<double> f(size, 0.0);
    for_each_subset_log_det(reduced.sigma(), [&](std::uint64_t mask, double log_det) {
        f[full ^ mask] = std::exp(-0.5 * log_det);
    });
    // Moebius inversion: p(clicks exactly on S) = sum_{X subset S} (-1)^{|S|-|X|} f[X].
    for (int bit = 0; bit < k; ++bit) {
        const std::uint64_t b = std::uint64_t{1} << bit;
        for (std::uint64_t x = 0; x < size; ++x)
            if (x & b) f[x] -= f[x ^ b];
    }

    MarginalTable table;
    table.modes.assign(modes.begin(), modes.end());
    table.probs.assign(size, 0.0);
    for (std::uint64_t s = 0; s < size; ++s) {
        std::size_t idx = 0;
        for (int j = 0; j < k; ++j)
            if (s >> j & 1) idx |= std::size_t{1} << (k - 1 - j);
        double p = f[s];
        if (p < 0.0) {
            if (p < -options.negative_tolerance) {
                throw ConditioningError(fmt::format("marginal probability {:.3g} is negative beyond round-off", p));
            }
            p = 0.0;
            ++table.clamped;
        }
        table.probs[idx] = p;
    }
    if (table.clamped > 0) {
        double total = 0.0;
        for (double p : table.probs) total += p;
        for (double& p : table.probs) p /= total;
    }
    return table;
}

std::vector<double> full_distribution(const GaussianState& state, const MarginalOptions& options) {
    ModeList all(state.n_modes());
    for (int i = 0; i < state.n_modes(); ++i) all[i] = i;
    return marginal_table(state, all, options).probs;
}

MarginalTable marginalize(std::span<const double> full, int n_modes, std::span<const int> modes) {
    if (full.size() != std::size_t{1} << n_modes) {
        throw DimensionError(fmt::format("distribution has {} entries, expected 2^{}", full.size(), n_modes));
    }
    check_modes(modes, n_modes);
    const int k = static_cast<int>(modes.size());
    MarginalTable t;
    t.modes.assign(modes.begin(), modes.end());
    t.probs.assign(std::size_t{1} << k, 0.0);
    for (std::size_t x = 0; x < full.size(); ++x) {
        std::size_t idx = 0;
        for (int j = 0; j < k; ++j) idx = (idx << 1) | ((x >> (n_modes - 1 - modes[j])) & 1u);
        t.probs[idx] += full[x];
    }
    return t;
}

SpinMoments spin_moments(const GaussianState& state) {
    const int n = state.n_modes();
    SpinMoments m;
    m.means.resize(n);
    m.covariance = RealMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        int mode[1] = {a};
        m.means(a) = 2.0 * marginal_table(state, mode).probs[1] - 1.0;
        m.covariance(a, a) = 1.0 - m.means(a) * m.means(a);
    }
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            int pair[2] = {a, b};
            auto t = marginal_table(state, pair);
            double ss = t.probs[0] + t.probs[3] - t.probs[1] - t.probs[2];
            double c = ss - m.means(a) * m.means(b);
            m.covariance(a, b) = c;
            m.covariance(b, a) = c;
        }
    }
    return m;
}

MarginalOracle state_oracle(std::shared_ptr<const GaussianState> state, MarginalOptions options) {
    return [state = std::move(state), options](std::span<const int> modes) {
        return marginal_table(*state, modes, options);
    };
}

std::vector<double> click_probabilities(const GaussianState& state) {
    std::vector<double> p(state.n_modes());
    for (int a = 0; a < state.n_modes(); ++a) {
        const int m[1] = {a};
        p[a] = marginal_table(state, m).probs[1];
    }
    return p;
}

double mean_click_number(const GaussianState& state) {
    PairwiseSum s;
    for (double p : click_probabilities(state)) s.add(p);
    return s.total();
}

}  // namespace gbsmock
