#include "gbsmock/samplers.hpp"

#include <cmath>
#include <numeric>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/kernels/kernels.hpp"
#include "gbsmock/parallel.hpp"

namespace gbsmock {

namespace {

void check_count(std::size_t n_samples) {
    if (n_samples == 0) throw DomainError("sample count must be at least 1");
}

}  // namespace

SampleSet sample_uniform(int n_modes, std::size_t n_samples, std::uint64_t seed) {
    check_count(n_samples);
    SampleSet out(n_modes);
    out.reserve(n_samples);
    Rng rng(derive_seed(seed, "uniform"));
    std::vector<std::uint8_t> bits(n_modes);
    for (std::size_t i = 0; i < n_samples; ++i) {
        std::uint64_t word = 0;
        for (int a = 0; a < n_modes; ++a) {
            if ((a & 63) == 0) word = rng();
            bits[a] = word >> (a & 63) & 1u;
        }
        out.push_back(bits);
    }
    out.metadata.sampler = "uniform";
    out.metadata.order = 0;
    out.metadata.seed = seed;
    return out;
}

SampleSet sample_thermal(std::span<const double> one_mode_probs, std::size_t n_samples, std::uint64_t seed) {
    check_count(n_samples);
    for (std::size_t a = 0; a < one_mode_probs.size(); ++a) {
        const double p = one_mode_probs[a];
        if (!(p >= 0.0 && p <= 1.0)) throw DomainError(fmt::format("click probability of mode {} is {}", a, p));
    }
    const int n = static_cast<int>(one_mode_probs.size());
    SampleSet out(n);
    out.reserve(n_samples);
    Rng rng(derive_seed(seed, "thermal"));
    std::vector<std::uint8_t> bits(n);
    for (std::size_t i = 0; i < n_samples; ++i) {
        for (int a = 0; a < n; ++a) bits[a] = uniform01(rng) < one_mode_probs[a];
        out.push_back(bits);
    }
    out.metadata.sampler = "thermal";
    out.metadata.order = 1;
    out.metadata.seed = seed;
    return out;
}

namespace {

class GibbsChain {
  public:
    GibbsChain(const IsingModel& model, std::uint64_t seed) : n_(model.n()), rng_(seed), h_(n_), j_(n_ * n_), s_(n_) {
        for (int a = 0; a < n_; ++a) {
            h_[a] = model.h(a);
            for (int b = 0; b < n_; ++b) j_[a * n_ + b] = model.J(a, b);
        }
        for (auto& s : s_) s = (rng_() >> 63) ? 1.0 : -1.0;
    }

    void sweep() {
        const auto& k = kernels::active();
        for (int a = 0; a < n_; ++a) {
            const double field = h_[a] + k.dot(&j_[a * n_], s_.data(), n_);
            const double p_down = 1.0 / (1.0 + std::exp(2.0 * field));
            s_[a] = uniform01(rng_) < p_down ? -1.0 : 1.0;
        }
    }

    void write(std::vector<std::uint8_t>& bits) const {
        for (int a = 0; a < n_; ++a) bits[a] = s_[a] > 0.0;
    }

  private:
    int n_;
    Rng rng_;
    std::vector<double> h_;
    std::vector<double> j_;
    std::vector<double> s_;
};

}  // namespace

SampleSet gibbs_sample(const IsingModel& model, std::size_t n_samples, std::uint64_t seed,
                       const GibbsOptions& options) {
    model.validate();
    check_count(n_samples);
    if (options.burn_in < 0) throw DomainError("burn-in must be non-negative");
    if (options.thinning < 1) throw DomainError("thinning must be at least 1");
    if (options.chains < 1) throw DomainError("chain count must be at least 1");
    const int n = model.n();
    const auto chains = static_cast<std::size_t>(options.chains);

    std::vector<SampleSet> parts(chains, SampleSet(n));
    parallel_for(chains, [&](std::size_t c) {
        const std::size_t rows = n_samples / chains + (c < n_samples % chains ? 1 : 0);
        GibbsChain chain(model, derive_seed(seed, "gibbs", c));
        for (long long t = 0; t < options.burn_in; ++t) chain.sweep();
        std::vector<std::uint8_t> bits(n);
        parts[c].reserve(rows);
        for (std::size_t i = 0; i < rows; ++i) {
            for (long long t = 0; t < options.thinning; ++t) chain.sweep();
            chain.write(bits);
            parts[c].push_back(bits);
        }
    });
    SampleSet out(n);
    out.reserve(n_samples);
    for (const auto& p : parts) out.append(p);
    out.metadata.sampler = "gibbs";
    out.metadata.order = 2;
    out.metadata.seed = seed;
    out.metadata.burn_in = options.burn_in;
    out.metadata.thinning = options.thinning;
    out.metadata.extra["chains"] = std::to_string(options.chains);
    return out;
}

SampleSet decorrelate(const SampleSet& samples, double keep_fraction, std::uint64_t seed) {
    if (!(keep_fraction > 0.0 && keep_fraction <= 1.0)) {
        throw DomainError(fmt::format("keep fraction must be in (0, 1], got {}", keep_fraction));
    }
    if (samples.empty()) throw DomainError("cannot decorrelate an empty sample set");
    const auto L = samples.size();
    auto keep = static_cast<std::size_t>(std::llround(keep_fraction * static_cast<double>(L)));
    keep = std::clamp<std::size_t>(keep, 1, L);
    std::vector<std::size_t> idx(L);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(derive_seed(seed, "decorrelate"));
    // Partial Fisher-Yates: the first `keep` slots end up a uniform random ordered subset.
    for (std::size_t i = 0; i < keep; ++i) {
        const auto j = i + uniform_index(rng, L - i);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(keep);
    auto out = samples.select(idx);
    out.metadata.extra["keep_fraction"] = fmt::format("{}", keep_fraction);
    return out;
}

}  // namespace gbsmock
