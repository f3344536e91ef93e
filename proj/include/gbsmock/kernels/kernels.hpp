#pragma once

// Data-parallel inner loops shared by the samplers and metrics.
//
// Every kernel has a scalar reference implementation; AVX2+FMA (x86-64) and
// NEON (aarch64) variants are compiled when the toolchain allows and chosen at
// runtime. GBSMOCK_SIMD=scalar|avx2|neon|auto overrides the choice. Variants
// agree with the reference up to summation-order round-off, so results are
// bit-reproducible only for a fixed ISA.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace gbsmock::kernels {

enum class Isa { Scalar, Avx2, Neon };

struct GainPair {
    double zero = 0.0;
    double one = 0.0;
};

/// Function table implemented once per ISA.
struct KernelTable {
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*abs_diff_sum)(const double* a, const double* b, std::size_t n);
    // For each t, with i0 = index[t] and i1 = index[t] + 1:
    //   zero += |counts[i0] + 1 - rows*ideal[i0]| - |counts[i0] - rows*ideal[i0]|
    //   one  += (same with i1)
    GainPair (*greedy_gain)(const double* counts, const double* ideal, const std::int64_t* index,
                            std::size_t n, double rows);
};

bool isa_supported(Isa isa);
std::string_view isa_name(Isa isa);

Isa active_isa();
/// Throws gbsmock::DomainError when the ISA is not compiled in or not supported by the CPU.
void set_isa(Isa isa);

/// Table for a specific ISA (tests compare variants against scalar_table()).
const KernelTable& table_for(Isa isa);
const KernelTable& scalar_table();

inline const KernelTable& active() { return table_for(active_isa()); }

inline double dot(std::span<const double> a, std::span<const double> b) {
    return active().dot(a.data(), b.data(), a.size());
}

inline double abs_diff_sum(std::span<const double> a, std::span<const double> b) {
    return active().abs_diff_sum(a.data(), b.data(), a.size());
}

inline GainPair greedy_gain(std::span<const double> counts, std::span<const double> ideal,
                            std::span<const std::int64_t> index, double rows) {
    return active().greedy_gain(counts.data(), ideal.data(), index.data(), index.size(), rows);
}

}  // namespace gbsmock::kernels
