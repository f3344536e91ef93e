#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gbsmock/gaussian_state.hpp"
#include "gbsmock/types.hpp"

namespace gbsmock {

/// Threshold-detector outcome over N modes. Mode 0 is the leftmost character
/// of the textual form.
class ClickPattern {
  public:
    ClickPattern() = default;
    explicit ClickPattern(std::vector<std::uint8_t> bits);
    static ClickPattern from_string(std::string_view text);
    /// Pattern over n modes with ones exactly at `clicks`.
    static ClickPattern from_clicks(int n_modes, std::span<const int> clicks);

    int size() const noexcept { return static_cast<int>(bits_.size()); }
    std::uint8_t operator[](int mode) const { return bits_[mode]; }
    const std::vector<std::uint8_t>& bits() const noexcept { return bits_; }
    /// Sorted indices of clicking modes.
    ModeList clicks() const;
    int click_count() const;
    std::string to_string() const;

  private:
    std::vector<std::uint8_t> bits_;
};

/// Probabilities of all 2^k click patterns on an ordered subset of modes.
/// probs[i]: bit (k-1-t) of i is the outcome of modes[t], so the first mode
/// is the most significant bit.
struct MarginalTable {
    ModeList modes;
    std::vector<double> probs;
    /// Entries in [-1e-12, 0) that were clamped to zero (table renormalized).
    int clamped = 0;

    int order() const noexcept { return static_cast<int>(modes.size()); }
    /// Probability that every mode in the table clicks.
    double all_ones() const { return probs.back(); }
    /// Table over modes[0..k-2], summing out the last mode.
    MarginalTable drop_last() const;
};

struct ProbabilityOptions {
    /// Click count above which bitstring_probability warns (or throws when strict).
    int click_budget = 30;
    bool strict = false;
};

struct MarginalOptions {
    int max_modes = 20;
    /// Round-off negativity accepted (and clamped) in a table entry.
    double negative_tolerance = 1e-12;
};

/// p(z) = Tor(O_S) / sqrt(det sigma), O_S = I - (sigma^-1)_S over the clicking modes S.
/// Cost O(|S|^2 2^|S|).
double bitstring_probability(const GaussianState& state, const ClickPattern& z,
                             const ProbabilityOptions& options = {});

/// Exact marginal table on `modes`. The no-click probability of every subset U
/// of the reduced state, 1/sqrt(det sigma_U), is computed once; the table is its
/// Moebius transform over the subset lattice. Cost O(k^2 2^k).
MarginalTable marginal_table(const GaussianState& state, std::span<const int> modes,
                             const MarginalOptions& options = {});

/// Full 2^N distribution (mode 0 most significant). Throws BudgetError above max_modes.
std::vector<double> full_distribution(const GaussianState& state, const MarginalOptions& options = {});

/// P(z_a = 1) for every mode, from 1-mode reductions (cost linear in N).
std::vector<double> click_probabilities(const GaussianState& state);

/// Expected click number, the sum of click_probabilities.
double mean_click_number(const GaussianState& state);

/// First and second moments of spins s = 2z - 1, from 1- and 2-mode tables.
struct SpinMoments {
    RealVector means;
    RealMatrix covariance;
};
SpinMoments spin_moments(const GaussianState& state);

/// Supplies ideal marginal tables for arbitrary mode subsets.
using MarginalOracle = std::function<MarginalTable(std::span<const int> modes)>;

/// Oracle backed by exact tables of a Gaussian state (the state is shared, not copied).
MarginalOracle state_oracle(std::shared_ptr<const GaussianState> state, MarginalOptions options = {});

/// Index of a pattern inside a table over k modes, first mode most significant.
inline std::size_t pattern_index(std::span<const std::uint8_t> bits) {
    std::size_t idx = 0;
    for (auto b : bits) idx = (idx << 1) | (b & 1u);
    return idx;
}

/// Marginalizes a full distribution over n modes (mode 0 most significant)
/// onto `modes`, in table order.
MarginalTable marginalize(std::span<const double> full, int n_modes, std::span<const int> modes);

}  // namespace gbsmock
