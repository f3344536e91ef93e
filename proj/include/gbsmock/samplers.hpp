#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gbsmock/ising.hpp"
#include "gbsmock/probability.hpp"
#include "gbsmock/rng.hpp"
#include "gbsmock/sample_set.hpp"

namespace gbsmock {

// Every sampler takes the user seed and derives its own stream with
// derive_seed(seed, <sampler name>, <stream>), so two samplers given the same
// seed do not share random numbers.

/// Independent fair bits (order 0).
SampleSet sample_uniform(int n_modes, std::size_t n_samples, std::uint64_t seed);

/// Independent Bernoulli bits with the given click probabilities (order 1).
SampleSet sample_thermal(std::span<const double> one_mode_probs, std::size_t n_samples, std::uint64_t seed);

struct GibbsOptions {
    long long burn_in = 15000;
    long long thinning = 900;
    /// Independent chains, each with its own burn-in; samples are split as
    /// evenly as possible and concatenated in chain order.
    int chains = 1;
};

/// Gibbs sampling of an Ising model: ascending-mode sweeps, burn-in sweeps
/// discarded, one sample every `thinning` sweeps; bits are z = (s + 1) / 2.
SampleSet gibbs_sample(const IsingModel& model, std::size_t n_samples, std::uint64_t seed,
                       const GibbsOptions& options = {});

struct GreedyOptions {
    /// Build each output row from its own greedy run and keep one random row of it.
    bool iid = false;
    /// Rows per run in iid mode (0 means n_samples).
    std::size_t iid_rows = 0;
};

/// Greedy order-k construction. Columns 0..k-1 are filled pattern by pattern
/// against the ideal table of the first k modes; each later column j is filled
/// bit by bit against every order-k subset made of j and k-1 earlier modes.
/// Rows are visited in a fresh random order for every column.
SampleSet greedy_sample(const MarginalOracle& oracle, int n_modes, int order, std::size_t n_samples,
                        std::uint64_t seed, const GreedyOptions& options = {});

/// Step-by-step form of greedy_sample, exposing the running subset counts.
class GreedyBuilder {
  public:
    GreedyBuilder(MarginalOracle oracle, int n_modes, int order, std::size_t n_samples, Rng& rng);

    /// Columns 0..order-1.
    void fill_prefix();
    /// Column `filled()`; fill_prefix must have run.
    void fill_next_column();
    int filled() const noexcept { return filled_; }
    bool done() const noexcept { return filled_ == n_modes_; }

    /// Subsets tracked for the most recent column and their pattern counts
    /// (table order, the new column is the least significant bit).
    const std::vector<ModeList>& tracked_subsets() const noexcept { return subsets_; }
    std::vector<double> tracked_counts(std::size_t subset) const;

    /// Current bit of (row, mode); mode < filled().
    std::uint8_t bit(std::size_t row, int mode) const { return columns_[mode][row]; }

    /// Filled rows in a final random order.
    SampleSet finish();

  private:
    MarginalOracle oracle_;
    int n_modes_;
    int order_;
    std::size_t rows_;
    Rng& rng_;
    int filled_ = 0;
    std::vector<std::vector<std::uint8_t>> columns_;
    std::vector<ModeList> subsets_;
    std::vector<double> counts_;
};

/// Keeps round(keep_fraction * L) rows (at least one) chosen uniformly without
/// replacement, in random order.
SampleSet decorrelate(const SampleSet& samples, double keep_fraction, std::uint64_t seed);

}  // namespace gbsmock
