#include <atomic>
#include <cstdlib>
#include <string>

#include "gbsmock/errors.hpp"
#include "gbsmock/log.hpp"
#include "variants.hpp"

namespace gbsmock::kernels {

namespace {

constexpr KernelTable kScalar{scalar::dot, scalar::abs_diff_sum, scalar::greedy_gain};
#ifdef GBSMOCK_HAVE_AVX2
constexpr KernelTable kAvx2{avx2::dot, avx2::abs_diff_sum, avx2::greedy_gain};
#endif
#ifdef GBSMOCK_HAVE_NEON
constexpr KernelTable kNeon{neon::dot, neon::abs_diff_sum, neon::greedy_gain};
#endif

Isa best_supported() {
    if (isa_supported(Isa::Avx2)) return Isa::Avx2;
    if (isa_supported(Isa::Neon)) return Isa::Neon;
    return Isa::Scalar;
}

Isa initial_isa() {
    const char* env = std::getenv("GBSMOCK_SIMD");
    if (!env) return best_supported();
    std::string want(env);
    Isa isa = Isa::Scalar;
    if (want == "scalar") {
        isa = Isa::Scalar;
    } else if (want == "avx2") {
        isa = Isa::Avx2;
    } else if (want == "neon") {
        isa = Isa::Neon;
    } else {
        if (want != "auto") warn("GBSMOCK_SIMD=" + want + " not recognized, using auto");
        return best_supported();
    }
    if (!isa_supported(isa)) {
        warn("GBSMOCK_SIMD=" + want + " not supported on this machine, using auto");
        return best_supported();
    }
    return isa;
}

std::atomic<Isa>& current() {
    static std::atomic<Isa> isa{initial_isa()};
    return isa;
}

}  // namespace

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return true;
        case Isa::Avx2:
#ifdef GBSMOCK_HAVE_AVX2
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
        case Isa::Neon:
#ifdef GBSMOCK_HAVE_NEON
            return true;
#else
            return false;
#endif
    }
    return false;
}

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return "scalar";
        case Isa::Avx2:
            return "avx2";
        case Isa::Neon:
            return "neon";
    }
    return "unknown";
}

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_isa(Isa isa) {
    if (!isa_supported(isa)) {
        throw DomainError("kernel ISA '" + std::string(isa_name(isa)) + "' is not available");
    }
    current().store(isa, std::memory_order_relaxed);
}

const KernelTable& scalar_table() { return kScalar; }

const KernelTable& table_for(Isa isa) {
    switch (isa) {
#ifdef GBSMOCK_HAVE_AVX2
        case Isa::Avx2:
            return kAvx2;
#endif
#ifdef GBSMOCK_HAVE_NEON
        case Isa::Neon:
            return kNeon;
#endif
        default:
            return kScalar;
    }
}

}  // namespace gbsmock::kernels
