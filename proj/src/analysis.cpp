#include "gbsmock/analysis.hpp"

#include <cmath>

#include <fmt/core.h>

#include "gbsmock/clicks.hpp"
#include "gbsmock/correlation.hpp"
#include "gbsmock/distances.hpp"
#include "gbsmock/errors.hpp"
#include "gbsmock/log.hpp"
#include "gbsmock/parallel.hpp"
#include "gbsmock/rng.hpp"
#include "gbsmock/subsets.hpp"
#include "gbsmock/ursell.hpp"

namespace gbsmock {

namespace {

void check_sets(const SampleSet& mockup, const SampleSet* experiment) {
    if (mockup.empty()) throw DomainError("mockup sample set is empty");
    if (experiment && experiment->n_modes() != mockup.n_modes()) {
        throw DimensionError(fmt::format("experiment has {} modes, mockup has {}", experiment->n_modes(),
                                         mockup.n_modes()));
    }
    if (experiment && experiment->empty()) throw DomainError("experiment sample set is empty");
}

std::string group_name(int k) { return fmt::format("k={}", k); }

void annotate(MetricReport& r, const SampleSet& mockup, const SampleSet* experiment, const AnalysisOptions& o) {
    r.metadata["n_modes"] = std::to_string(mockup.n_modes());
    r.metadata["samples_mockup"] = std::to_string(mockup.size());
    if (experiment) r.metadata["samples_experiment"] = std::to_string(experiment->size());
    r.metadata["n_subsets"] = std::to_string(o.n_subsets);
    r.metadata["seed"] = std::to_string(o.seed);
    r.metadata["logarithm"] = "natural";
    r.metadata["empirical_probabilities"] = "unsmoothed counts";
}

// Evaluates `row(modes, ideal)` for every chosen subset of every size, in
// parallel, storing rows in deterministic subset order.
template <typename RowFn>
void per_subset(MetricReport& r, const MarginalOracle& oracle, int n, const AnalysisOptions& o, RowFn row) {
    for (int k : o.subset_sizes) {
        if (k < 1 || k > n) throw BudgetError(fmt::format("subset size {} invalid for {} modes", k, n));
        const auto subsets = random_subsets(n, k, o.n_subsets, o.seed);
        std::vector<std::vector<double>> values(subsets.size());
        parallel_for(subsets.size(), [&](std::size_t i) { values[i] = row(subsets[i], oracle(subsets[i])); });
        for (std::size_t i = 0; i < subsets.size(); ++i) r.add_row(group_name(k), subsets[i], std::move(values[i]));
    }
}

}  // namespace

MetricReport analyze_tvd(const MarginalOracle& oracle, const SampleSet& mockup, const SampleSet* experiment,
                         const AnalysisOptions& options) {
    check_sets(mockup, experiment);
    MetricReport r;
    r.metric = "tvd";
    r.columns = {"delta_m"};
    if (experiment) r.columns.insert(r.columns.end(), {"delta_e", "delta_delta"});
    per_subset(r, oracle, mockup.n_modes(), options, [&](const ModeList& s, const MarginalTable& ideal) {
        const double dm = tvd(mockup.empirical_table(s).probs, ideal.probs);
        if (!experiment) return std::vector<double>{dm};
        const double de = tvd(experiment->empirical_table(s).probs, ideal.probs);
        return std::vector<double>{dm, de, dm - de};
    });
    annotate(r, mockup, experiment, options);
    r.compute_aggregates();
    if (experiment) {
        for (int k : options.subset_sizes) {
            const auto g = group_name(k);
            const auto b = delta_bounds(r.aggregate(g, "delta_e").mean, r.aggregate(g, "delta_m").mean);
            auto& a = r.aggregate(g, "delta_delta");
            a.lower = b.lower;
            a.upper = b.upper;
        }
        r.metadata["bounds"] = "heuristic: finite-sample estimates are biased towards zero";
    }
    return r;
}

MetricReport analyze_kl(const MarginalOracle& oracle, const SampleSet& mockup, const SampleSet* experiment,
                        const AnalysisOptions& options) {
    check_sets(mockup, experiment);
    MetricReport r;
    r.metric = "kl";
    r.columns = {"kl_m", "kl_m_per_mode"};
    if (experiment) r.columns.insert(r.columns.end(), {"kl_e", "kl_e_per_mode", "delta_kl", "delta_kl_per_mode"});
    per_subset(r, oracle, mockup.n_modes(), options, [&](const ModeList& s, const MarginalTable& ideal) {
        const double k = static_cast<double>(s.size());
        const double km = kl(mockup.empirical_table(s).probs, ideal.probs);
        if (!experiment) return std::vector<double>{km, km / k};
        const double ke = kl(experiment->empirical_table(s).probs, ideal.probs);
        return std::vector<double>{km, km / k, ke, ke / k, km - ke, (km - ke) / k};
    });
    annotate(r, mockup, experiment, options);
    r.compute_aggregates();
    return r;
}

MetricReport analyze_ursell(const MarginalOracle& oracle, const SampleSet& mockup, const SampleSet* experiment,
                            const AnalysisOptions& options) {
    check_sets(mockup, experiment);
    MetricReport r;
    r.metric = "ursell";
    r.columns = {"ideal", "mockup"};
    if (experiment) r.columns.push_back("experiment");
    per_subset(r, oracle, mockup.n_modes(), options, [&](const ModeList& s, const MarginalTable& ideal) {
        std::vector<double> v{ursell(ideal).value, ursell_empirical(mockup, s).value};
        if (experiment) v.push_back(ursell_empirical(*experiment, s).value);
        return v;
    });
    annotate(r, mockup, experiment, options);
    r.compute_aggregates();

    ReportTable t;
    t.name = "pearson";
    t.columns = {"order", "r_mockup", "stddev_mockup"};
    if (experiment) t.columns.insert(t.columns.end(), {"r_experiment", "stddev_experiment"});
    for (int k : options.subset_sizes) {
        std::vector<double> ideal, mock, exper;
        for (const auto& row : r.rows) {
            if (row.group != group_name(k)) continue;
            ideal.push_back(row.values[0]);
            mock.push_back(row.values[1]);
            if (experiment) exper.push_back(row.values[2]);
        }
        std::vector<double> out{static_cast<double>(k)};
        auto corr = [&](const std::vector<double>& y, const char* who) {
            try {
                const auto p = pearson_bootstrap(ideal, y, options.bootstrap_resamples,
                                                 derive_seed(options.seed, who, static_cast<std::uint64_t>(k)));
                out.push_back(p.r);
                out.push_back(p.stddev);
            } catch (const Error& e) {
                warn(fmt::format("order {} {} correlation undefined: {}", k, who, e.what()));
                out.push_back(NAN);
                out.push_back(NAN);
            }
        };
        corr(mock, "mockup");
        if (experiment) corr(exper, "experiment");
        t.rows.push_back(std::move(out));
    }
    r.tables.push_back(std::move(t));
    r.metadata["order1_convention"] = "E[z] - 1/2";
    return r;
}

MetricReport analyze_clicks(const MarginalOracle& oracle, const SampleSet& mockup, const SampleSet* experiment,
                            int moment_order) {
    check_sets(mockup, experiment);
    const int n = mockup.n_modes();
    MetricReport r;
    r.metric = "clicks";
    const auto theory = click_moments_theoretical(oracle, n, std::max(2, moment_order));
    const auto mock_m = click_moments_empirical(mockup, moment_order);

    ReportTable moments;
    moments.name = "moments";
    moments.columns = {"order", "theoretical", "mockup"};
    std::vector<double> exp_m;
    if (experiment) {
        exp_m = click_moments_empirical(*experiment, moment_order);
        moments.columns.push_back("experiment");
    }
    for (int j = 0; j < moment_order; ++j) {
        std::vector<double> row{static_cast<double>(j + 1), theory[j], mock_m[j]};
        if (experiment) row.push_back(exp_m[j]);
        moments.rows.push_back(std::move(row));
    }

    ReportTable hist;
    hist.name = "histogram";
    hist.columns = {"clicks", "mockup_count", "mockup_freq"};
    if (experiment) hist.columns.insert(hist.columns.end(), {"experiment_count", "experiment_freq"});
    hist.columns.push_back("gaussian_fit");
    std::vector<double> fit_pmf(n + 1, NAN);
    try {
        const auto fit = fit_click_gaussian(theory[0], theory[1], n);
        fit_pmf = click_gaussian_pmf(fit, n);
        r.metadata["fit_A"] = fmt::format("{:.17g}", fit.A);
        r.metadata["fit_B"] = fmt::format("{:.17g}", fit.B);
        r.metadata["fit_C"] = fmt::format("{:.17g}", fit.C);
    } catch (const Error& e) {
        warn(fmt::format("click Gaussian fit unavailable: {}", e.what()));
    }
    const auto hm = click_histogram(mockup);
    std::vector<std::uint64_t> he;
    if (experiment) he = click_histogram(*experiment);
    for (int x = 0; x <= n; ++x) {
        std::vector<double> row{static_cast<double>(x), static_cast<double>(hm[x]),
                                static_cast<double>(hm[x]) / static_cast<double>(mockup.size())};
        if (experiment) {
            row.push_back(static_cast<double>(he[x]));
            row.push_back(static_cast<double>(he[x]) / static_cast<double>(experiment->size()));
        }
        row.push_back(fit_pmf[x]);
        hist.rows.push_back(std::move(row));
    }
    r.tables.push_back(std::move(moments));
    r.tables.push_back(std::move(hist));
    r.metadata["n_modes"] = std::to_string(n);
    r.metadata["samples_mockup"] = std::to_string(mockup.size());
    if (experiment) r.metadata["samples_experiment"] = std::to_string(experiment->size());
    r.metadata["moments"] = "mean, variance, third central moment";
    return r;
}

CrossEntropyComparison compare_cross_entropy(std::shared_ptr<const GaussianState> state, const SampleSet& experiment,
                                             const SampleSet& mockup, bool with_hog,
                                             const ProbabilityOptions& options) {
    if (experiment.n_modes() != state->n_modes() || mockup.n_modes() != state->n_modes()) {
        throw DimensionError(fmt::format("state has {} modes, samples have {} and {}", state->n_modes(),
                                         experiment.n_modes(), mockup.n_modes()));
    }
    const auto logprob = state_logprob(state, options);
    const auto e = xe_estimate(experiment, logprob);
    const auto m = xe_estimate(mockup, logprob);
    CrossEntropyComparison c;
    c.xe_experiment = e.mean;
    c.se_experiment = e.stderr_mean;
    c.n_experiment = e.count;
    c.xe_mockup = m.mean;
    c.se_mockup = m.stderr_mean;
    c.n_mockup = m.count;
    c.delta_xe = m.mean - e.mean;
    c.delta_xe_se = std::hypot(e.stderr_mean, m.stderr_mean);
    if (with_hog) c.hog = hog_rate(e.mean, m.mean, std::min(e.count, m.count));
    return c;
}

MetricReport cross_entropy_report(const CrossEntropyComparison& c) {
    MetricReport r;
    r.metric = "cross_entropy";
    ReportTable t;
    t.name = "cross_entropy";
    t.columns = {"xe_experiment", "se_experiment", "n_experiment", "xe_mockup", "se_mockup",
                 "n_mockup",      "delta_xe",      "delta_xe_se"};
    std::vector<double> row{c.xe_experiment, c.se_experiment, static_cast<double>(c.n_experiment),
                            c.xe_mockup,     c.se_mockup,     static_cast<double>(c.n_mockup),
                            c.delta_xe,      c.delta_xe_se};
    if (c.hog) {
        t.columns.push_back("hog_rate");
        row.push_back(*c.hog);
    }
    t.rows.push_back(std::move(row));
    r.tables.push_back(std::move(t));
    r.metadata["logarithm"] = "natural";
    r.metadata["delta_xe"] = "xe_mockup - xe_experiment";
    return r;
}

}  // namespace gbsmock
