#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "gbsmock/gaussian_state.hpp"
#include "gbsmock/probability.hpp"
#include "gbsmock/report.hpp"
#include "gbsmock/sample_set.hpp"

namespace gbsmock {

// Subset-based comparisons of a mockup sample set (and optionally an
// experimental one) against ideal marginals. Rows are grouped as "k=<size>"
// and appear in subset order for each size.

struct AnalysisOptions {
    std::vector<int> subset_sizes{1, 2, 3};
    /// Subsets per size, drawn with random_subsets (all subsets when fewer exist).
    std::size_t n_subsets = 100;
    std::uint64_t seed = 0;
    int bootstrap_resamples = 500;
};

/// Columns delta_m [, delta_e, delta_delta]; delta_delta aggregates carry
/// delta_bounds() of the mean distances.
MetricReport analyze_tvd(const MarginalOracle& oracle, const SampleSet& mockup, const SampleSet* experiment,
                         const AnalysisOptions& options);

/// KL(empirical || ideal), raw and per mode. Columns kl_m, kl_m_per_mode
/// [, kl_e, kl_e_per_mode, delta_kl, delta_kl_per_mode].
MetricReport analyze_kl(const MarginalOracle& oracle, const SampleSet& mockup, const SampleSet* experiment,
                        const AnalysisOptions& options);

/// Ursell values per subset (columns ideal, mockup [, experiment]) and a
/// "pearson" table with the bootstrap correlation against the ideal per order.
MetricReport analyze_ursell(const MarginalOracle& oracle, const SampleSet& mockup, const SampleSet* experiment,
                            const AnalysisOptions& options);

/// Click-number histogram, Gaussian fit to the theoretical mean and variance,
/// and a moment table (theoretical vs empirical, up to moment_order <= 3).
MetricReport analyze_clicks(const MarginalOracle& oracle, const SampleSet& mockup, const SampleSet* experiment,
                            int moment_order = 3);

struct CrossEntropyComparison {
    double xe_experiment = 0.0;
    double se_experiment = 0.0;
    std::size_t n_experiment = 0;
    double xe_mockup = 0.0;
    double se_mockup = 0.0;
    std::size_t n_mockup = 0;
    /// xe_mockup - xe_experiment and its propagated standard error.
    double delta_xe = 0.0;
    double delta_xe_se = 0.0;
    std::optional<double> hog;
};

/// Cross-entropy of both sample sets under the ideal state; HOG rate uses
/// n = min(n_experiment, n_mockup).
CrossEntropyComparison compare_cross_entropy(std::shared_ptr<const GaussianState> state, const SampleSet& experiment,
                                             const SampleSet& mockup, bool with_hog,
                                             const ProbabilityOptions& options = {});

MetricReport cross_entropy_report(const CrossEntropyComparison& c);

}  // namespace gbsmock
