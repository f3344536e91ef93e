#include "gbsmock/sample_set.hpp"

#include <bit>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/gaussian_state.hpp"

namespace gbsmock {

SampleSet::SampleSet(int n_modes) : n_modes_(n_modes), words_per_row_((n_modes + 63) / 64) {
    if (n_modes <= 0) throw DimensionError(fmt::format("sample sets need at least one mode, got {}", n_modes));
}

void SampleSet::reserve(std::size_t rows) { words_.reserve(rows * words_per_row_); }

void SampleSet::push_back(std::span<const std::uint8_t> bits) {
    if (static_cast<int>(bits.size()) != n_modes_) {
        throw DimensionError(fmt::format("sample has {} bits, expected {}", bits.size(), n_modes_));
    }
    std::size_t base = words_.size();
    words_.resize(base + words_per_row_, 0);
    for (int a = 0; a < n_modes_; ++a) {
        if (bits[a] > 1) throw DomainError("sample bits must be 0 or 1");
        words_[base + (a >> 6)] |= std::uint64_t{bits[a]} << (a & 63);
    }
    ++rows_;
}

std::vector<std::uint8_t> SampleSet::row(std::size_t i) const {
    std::vector<std::uint8_t> out(n_modes_);
    for (int a = 0; a < n_modes_; ++a) out[a] = bit(i, a);
    return out;
}

std::string SampleSet::row_string(std::size_t i) const {
    std::string s(n_modes_, '0');
    for (int a = 0; a < n_modes_; ++a)
        if (bit(i, a)) s[a] = '1';
    return s;
}

int SampleSet::click_count(std::size_t i) const {
    int c = 0;
    for (std::size_t w = 0; w < words_per_row_; ++w) c += std::popcount(words_[i * words_per_row_ + w]);
    return c;
}

std::vector<std::uint64_t> SampleSet::pattern_counts(std::span<const int> modes) const {
    check_modes(modes, n_modes_);
    const int k = static_cast<int>(modes.size());
    if (k > 30) throw BudgetError(fmt::format("empirical table over {} modes is too large", k));
    std::vector<std::uint64_t> counts(std::size_t{1} << k, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
        const std::uint64_t* r = &words_[i * words_per_row_];
        std::size_t idx = 0;
        for (int m : modes) idx = (idx << 1) | ((r[m >> 6] >> (m & 63)) & 1u);
        ++counts[idx];
    }
    return counts;
}

MarginalTable SampleSet::empirical_table(std::span<const int> modes) const {
    if (rows_ == 0) throw DimensionError("empirical table of an empty sample set");
    auto counts = pattern_counts(modes);
    MarginalTable t;
    t.modes.assign(modes.begin(), modes.end());
    t.probs.resize(counts.size());
    const double inv = 1.0 / static_cast<double>(rows_);
    for (std::size_t i = 0; i < counts.size(); ++i) t.probs[i] = static_cast<double>(counts[i]) * inv;
    return t;
}

SampleSet SampleSet::select(std::span<const std::size_t> rows) const {
    SampleSet out(n_modes_);
    out.metadata = metadata;
    out.words_.resize(rows.size() * words_per_row_);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i] >= rows_) throw IndexError(fmt::format("row {} out of range", rows[i]));
        std::copy_n(&words_[rows[i] * words_per_row_], words_per_row_, &out.words_[i * words_per_row_]);
    }
    out.rows_ = rows.size();
    return out;
}

SampleSet SampleSet::prefix_modes(int n) const {
    if (n <= 0 || n > n_modes_) throw IndexError(fmt::format("mode prefix {} out of range (1..{})", n, n_modes_));
    SampleSet out(n);
    out.metadata = metadata;
    out.reserve(rows_);
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (int a = 0; a < n; ++a) bits[a] = bit(i, a);
        out.push_back(bits);
    }
    return out;
}

void SampleSet::append(const SampleSet& other) {
    if (other.n_modes_ != n_modes_) throw DimensionError("appending samples with a different mode count");
    words_.insert(words_.end(), other.words_.begin(), other.words_.end());
    rows_ += other.rows_;
}

}  // namespace gbsmock
