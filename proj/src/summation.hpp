#pragma once

#include <array>
#include <cstddef>

namespace gbsmock {

// Streaming pairwise summation: leaves of 64 sequential terms merged as a
// binary tree. Deterministic for a fixed input order; error grows as O(log n).
class PairwiseSum {
  public:
    void add(double x) {
        leaf_ += x;
        if (++leaf_count_ == 64) {
            push(leaf_);
            leaf_ = 0.0;
            leaf_count_ = 0;
        }
    }

    double total() const {
        double s = leaf_;
        for (std::size_t i = 0; i < levels_.size(); ++i) {
            if (count_ >> i & 1) s += levels_[i];
        }
        return s;
    }

  private:
    void push(double v) {
        std::size_t level = 0;
        while (count_ >> level & 1) {
            v += levels_[level];
            ++level;
        }
        levels_[level] = v;
        count_ += 1;
    }

    std::array<double, 64> levels_{};
    std::size_t count_ = 0;
    double leaf_ = 0.0;
    int leaf_count_ = 0;
};

}  // namespace gbsmock
