#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gbsmock/probability.hpp"

namespace gbsmock {

/// Provenance recorded alongside samples.
struct SampleMetadata {
    std::string sampler;
    std::optional<int> order;
    std::optional<std::uint64_t> seed;
    std::optional<long long> burn_in;
    std::optional<long long> thinning;
    std::string instance_digest;
    std::map<std::string, std::string> extra;
};

/// L bit strings over n modes, stored row-major as packed 64-bit words.
class SampleSet {
  public:
    SampleSet() = default;
    explicit SampleSet(int n_modes);

    int n_modes() const noexcept { return n_modes_; }
    std::size_t size() const noexcept { return rows_; }
    bool empty() const noexcept { return rows_ == 0; }

    void reserve(std::size_t rows);
    /// Appends one row; bits.size() must equal n_modes, entries 0 or 1.
    void push_back(std::span<const std::uint8_t> bits);
    void push_back(const ClickPattern& z) { push_back(z.bits()); }

    bool bit(std::size_t row, int mode) const {
        return (words_[row * words_per_row_ + (mode >> 6)] >> (mode & 63)) & 1u;
    }
    std::vector<std::uint8_t> row(std::size_t i) const;
    std::string row_string(std::size_t i) const;
    ClickPattern pattern(std::size_t i) const { return ClickPattern(row(i)); }
    int click_count(std::size_t i) const;

    /// Empirical marginal table (unsmoothed counts / L) over `modes`.
    MarginalTable empirical_table(std::span<const int> modes) const;
    /// Raw pattern counts in table order.
    std::vector<std::uint64_t> pattern_counts(std::span<const int> modes) const;

    /// Rows at the given indices, in that order; metadata copied.
    SampleSet select(std::span<const std::size_t> rows) const;
    /// Rows restricted to the first `n` modes.
    SampleSet prefix_modes(int n) const;
    void append(const SampleSet& other);

    bool operator==(const SampleSet& other) const {
        return n_modes_ == other.n_modes_ && rows_ == other.rows_ && words_ == other.words_;
    }

    SampleMetadata metadata;

  private:
    int n_modes_ = 0;
    std::size_t words_per_row_ = 0;
    std::size_t rows_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace gbsmock
