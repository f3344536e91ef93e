#include "cli.hpp"

#include <CLI11.hpp>
#include <fmt/core.h>
#include <fmt/ostream.h>

#include <charconv>
#include <memory>
#include <sstream>

#include "gbsmock/analysis.hpp"
#include "gbsmock/errors.hpp"
#include "gbsmock/gaussian_state.hpp"
#include "gbsmock/instance.hpp"
#include "gbsmock/io.hpp"
#include "gbsmock/kernels/kernels.hpp"
#include "gbsmock/log.hpp"
#include "gbsmock/samplers.hpp"
#include "gbsmock/subsets.hpp"

namespace gbsmock::cli {

namespace {

// Inconsistent flags for a subcommand; exits with code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct BuildConfig {
    std::string instance;
    int random_modes = 0;
    int random_inputs = 0;
    double transmission = 0.8;
    double r_min = 0.6;
    double r_max = 1.4;
    std::uint64_t seed = 0;
    std::string output;
};

struct SampleConfig {
    std::string instance;
    std::string method;
    int order = 0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    long long burn_in = 15000;
    long long thinning = 900;
    int chains = 1;
    double keep_fraction = 1.0;
    bool iid = false;
    std::size_t iid_rows = 0;
    std::string output;
};

struct AnalyzeConfig {
    std::string instance;
    std::string samples;
    std::string experiment;
    std::string metric = "tvd";
    std::string subset_sizes = "1-14";
    std::size_t n_subsets = 100;
    std::uint64_t seed = 0;
    std::size_t max_samples = 0;
    int moment_order = 3;
    int subset_cap = 20;
    std::string output;
    std::string format = "json";
};

struct CompareConfig {
    std::string instance;
    std::string experiment;
    std::string mockup;
    std::optional<int> click_number;
    std::optional<int> mode_prefix;
    std::size_t max_samples = 1000;
    std::size_t min_samples = 2;
    bool hog = false;
    int click_budget = 30;
    bool strict = false;
    std::string output;
    std::string format = "json";
};

struct ImportConfig {
    std::string real;
    std::string imag;
    std::string squeezing;
    std::string output;
};

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string part;
    auto number = [&](const std::string& s) {
        int v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || p != s.data() + s.size()) throw UsageError(fmt::format("bad subset size '{}'", s));
        return v;
    };
    while (std::getline(ss, part, ',')) {
        const auto dash = part.find('-');
        if (dash == std::string::npos) {
            out.push_back(number(part));
        } else {
            const int lo = number(part.substr(0, dash)), hi = number(part.substr(dash + 1));
            if (lo > hi) throw UsageError(fmt::format("empty subset size range '{}'", part));
            for (int k = lo; k <= hi; ++k) out.push_back(k);
        }
    }
    if (out.empty()) throw UsageError("no subset sizes given");
    return out;
}

std::shared_ptr<const GaussianState> load_state(const std::string& path, GBSInstance* instance = nullptr) {
    auto inst = load_instance(path);
    auto state = std::make_shared<const GaussianState>(build_output_covariance(inst));
    if (instance) *instance = std::move(inst);
    return state;
}

ReportFormat parse_format(const std::string& f) { return f == "csv" ? ReportFormat::Csv : ReportFormat::Json; }

// ---- build --------------------------------------------------------------------

int cmd_build(const BuildConfig& c, std::ostream& out) {
    GBSInstance inst;
    if (!c.instance.empty()) {
        if (c.random_modes) throw UsageError("--instance and --random are mutually exclusive");
        inst = load_instance(c.instance);
    } else if (c.random_modes > 0) {
        const int k = c.random_inputs ? c.random_inputs : c.random_modes + (c.random_modes % 2);
        inst = random_instance(c.random_modes, k, c.seed, c.transmission, c.r_min, c.r_max);
    } else {
        throw UsageError("build needs --instance or --random");
    }
    const auto state = build_output_covariance(inst);
    fmt::print(out, "modes: {}\n", inst.n_output);
    fmt::print(out, "inputs: {}\n", inst.n_input);
    fmt::print(out, "max singular value: {:.12f}\n", max_singular_value(inst.transformation));
    fmt::print(out, "vacuum probability: {:.12g}\n", state.vacuum_probability());
    fmt::print(out, "mean click number: {:.6f}\n", mean_click_number(state));
    fmt::print(out, "digest: {}\n", instance_digest(inst));
    if (!c.output.empty()) {
        save_instance(inst, c.output);
        fmt::print(out, "wrote {}\n", c.output);
    }
    return 0;
}

// ---- sample -------------------------------------------------------------------

double greedy_cost(int n, int k, std::size_t L) {
    // Tracked (subset, pattern) updates: sum over columns j >= k of C(j, k-1) 2^k per row.
    double ops = std::ldexp(1.0, k);
    double cols = 0.0;
    for (int j = k; j < n; ++j) cols += static_cast<double>(binomial(j, k - 1));
    return (cols * 2.0 + ops) * static_cast<double>(L);
}

int cmd_sample(const SampleConfig& c, const std::string& command_line, std::ostream& out) {
    if (c.samples == 0) throw UsageError("--samples must be at least 1");
    if (c.method == "greedy" && c.order < 1) throw UsageError("--order is required for --method greedy");
    if (c.method != "greedy" && c.order != 0) throw UsageError("--order only applies to --method greedy");
    if (c.iid && c.method != "greedy") throw UsageError("--iid only applies to --method greedy");

    GBSInstance inst;
    const auto state = load_state(c.instance, &inst);
    const int n = state->n_modes();
    SampleSet samples;
    if (c.method == "uniform") {
        samples = sample_uniform(n, c.samples, c.seed);
    } else if (c.method == "thermal") {
        samples = sample_thermal(click_probabilities(*state), c.samples, c.seed);
    } else if (c.method == "tap") {
        const double density = mean_click_number(*state) / n;
        if (density < 0.15) {
            warn(fmt::format("mean click density {:.3f} is low; TAP mean-field marginals are expected to be biased "
                             "for low-power instances",
                             density));
        }
        const auto moments = spin_moments(*state);
        TapDiagnostics diag;
        const auto model = fit_tap(moments.means, moments.covariance, {}, &diag);
        GibbsOptions g;
        g.burn_in = c.burn_in;
        g.thinning = c.thinning;
        g.chains = c.chains;
        samples = gibbs_sample(model, c.samples, c.seed, g);
        samples.metadata.extra["tap_fallback_pairs"] = std::to_string(diag.fallback_pairs);
        samples.metadata.extra["tap_ridge_used"] = diag.ridge_used ? "true" : "false";
        samples.metadata.extra["tap_clamped_means"] = std::to_string(diag.clamped_means);
    } else if (c.method == "greedy") {
        const double cost = greedy_cost(n, c.order, c.iid ? (c.iid_rows ? c.iid_rows : c.samples) : c.samples) *
                            (c.iid ? static_cast<double>(c.samples) : 1.0);
        fmt::print(out, "greedy cost model: O(N^k 2^k L) with N={} k={} L={}: about {:.3g} count updates\n", n,
                   c.order, c.samples, cost);
        GreedyOptions g;
        g.iid = c.iid;
        g.iid_rows = c.iid_rows;
        samples = greedy_sample(state_oracle(state), n, c.order, c.samples, c.seed, g);
    } else {
        throw UsageError(fmt::format("unknown method '{}'", c.method));
    }
    if (c.keep_fraction < 1.0) samples = decorrelate(samples, c.keep_fraction, c.seed);

    samples.metadata.sampler = c.method;
    samples.metadata.seed = c.seed;
    samples.metadata.instance_digest = instance_digest(inst);
    samples.metadata.extra["command"] = command_line;
    samples.metadata.extra["requested_samples"] = std::to_string(c.samples);
    if (c.keep_fraction < 1.0) samples.metadata.extra["keep_fraction"] = fmt::format("{}", c.keep_fraction);
    save_samples(samples, c.output);
    fmt::print(out, "wrote {} samples over {} modes to {}\n", samples.size(), n, c.output);
    return 0;
}

// ---- analyze ------------------------------------------------------------------

int cmd_analyze(const AnalyzeConfig& c, std::ostream& out) {
    const auto state = load_state(c.instance);
    const auto mockup = load_samples(c.samples, c.max_samples);
    std::optional<SampleSet> experiment;
    if (!c.experiment.empty()) experiment = load_samples(c.experiment, c.max_samples);
    if (mockup.n_modes() != state->n_modes()) {
        throw DimensionError(fmt::format("samples have {} modes, instance has {}", mockup.n_modes(), state->n_modes()));
    }
    AnalysisOptions o;
    o.subset_sizes = parse_sizes(c.subset_sizes);
    o.n_subsets = c.n_subsets;
    o.seed = c.seed;
    for (int k : c.metric == "clicks" ? std::vector<int>{} : o.subset_sizes) {
        if (k < 1 || k > state->n_modes()) {
            throw BudgetError(fmt::format("subset size {} is outside 1..{}", k, state->n_modes()));
        }
        if (k > c.subset_cap) throw BudgetError(fmt::format("subset size {} exceeds the cap {}", k, c.subset_cap));
    }
    MarginalOptions mo;
    mo.max_modes = c.subset_cap;
    const auto oracle = state_oracle(state, mo);
    const SampleSet* exp = experiment ? &*experiment : nullptr;

    MetricReport report;
    if (c.metric == "tvd") {
        report = analyze_tvd(oracle, mockup, exp, o);
    } else if (c.metric == "kl") {
        report = analyze_kl(oracle, mockup, exp, o);
    } else if (c.metric == "ursell") {
        report = analyze_ursell(oracle, mockup, exp, o);
    } else if (c.metric == "clicks") {
        report = analyze_clicks(oracle, mockup, exp, c.moment_order);
    } else {
        throw UsageError(fmt::format("unknown metric '{}'", c.metric));
    }
    report.metadata["samples_path"] = c.samples;
    if (exp) report.metadata["experiment_path"] = c.experiment;
    save_report(report, c.output, parse_format(c.format));

    for (const auto& a : report.aggregates) {
        fmt::print(out, "{} {}: mean {:.6g} stderr {:.3g} (n={})", a.group, a.column, a.mean, a.stderr_mean, a.count);
        if (a.lower && a.upper) fmt::print(out, " bounds [{:.6g}, {:.6g}]", *a.lower, *a.upper);
        fmt::print(out, "\n");
    }
    for (const auto& t : report.tables) {
        if (t.name == "histogram") continue;
        fmt::print(out, "{}:", t.name);
        for (const auto& col : t.columns) fmt::print(out, " {}", col);
        fmt::print(out, "\n");
        for (const auto& row : t.rows) {
            for (double v : row) fmt::print(out, " {:.6g}", v);
            fmt::print(out, "\n");
        }
    }
    fmt::print(out, "wrote {}\n", c.output);
    return 0;
}

// ---- compare ------------------------------------------------------------------

// First `max` samples in file order whose click count over the kept modes
// equals `clicks` (any count when unset), restricted to the first `prefix` modes.
SampleSet select_samples(const std::string& path, std::optional<int> prefix, std::optional<int> clicks,
                         std::size_t max, std::size_t& scanned) {
    SampleReader reader(path);
    const int keep = prefix ? *prefix : reader.n_modes();
    if (keep < 1 || keep > reader.n_modes()) {
        throw UsageError(fmt::format("--mode-prefix {} outside 1..{}", keep, reader.n_modes()));
    }
    SampleSet out(keep);
    out.metadata = reader.metadata();
    std::vector<std::uint8_t> bits;
    scanned = 0;
    while (out.size() < max && reader.next(bits)) {
        ++scanned;
        bits.resize(keep);
        if (clicks) {
            int c = 0;
            for (auto b : bits) c += b;
            if (c != *clicks) continue;
        }
        out.push_back(bits);
    }
    return out;
}

int cmd_compare(const CompareConfig& c, std::ostream& out) {
    if (c.max_samples == 0) throw UsageError("--max-samples must be at least 1");
    auto state = load_state(c.instance);
    if (c.mode_prefix) {
        if (*c.mode_prefix < 1 || *c.mode_prefix > state->n_modes()) {
            throw UsageError(fmt::format("--mode-prefix {} outside 1..{}", *c.mode_prefix, state->n_modes()));
        }
        ModeList modes(*c.mode_prefix);
        for (int a = 0; a < *c.mode_prefix; ++a) modes[a] = a;
        state = std::make_shared<const GaussianState>(reduce_state(*state, modes));
    }
    std::size_t scanned_e = 0, scanned_m = 0;
    auto exp = select_samples(c.experiment, c.mode_prefix, c.click_number, c.max_samples, scanned_e);
    auto mock = select_samples(c.mockup, c.mode_prefix, c.click_number, c.max_samples, scanned_m);
    for (const auto& [name, set] : {std::pair{"experiment", &exp}, std::pair{"mockup", &mock}}) {
        if (set->size() < c.min_samples) {
            throw ShortfallError(fmt::format("only {} {} samples{} (need at least {})", set->size(), name,
                                             c.click_number ? fmt::format(" with {} clicks", *c.click_number) : "",
                                             c.min_samples));
        }
    }
    ProbabilityOptions po;
    po.click_budget = c.click_budget;
    po.strict = c.strict;
    const auto cmp = compare_cross_entropy(state, exp, mock, c.hog, po);
    auto report = cross_entropy_report(cmp);
    report.metadata["experiment_path"] = c.experiment;
    report.metadata["mockup_path"] = c.mockup;
    report.metadata["selection"] = "first matching samples in file order";
    report.metadata["max_samples"] = std::to_string(c.max_samples);
    report.metadata["scanned_experiment"] = std::to_string(scanned_e);
    report.metadata["scanned_mockup"] = std::to_string(scanned_m);
    if (c.click_number) report.metadata["click_number"] = std::to_string(*c.click_number);
    if (c.mode_prefix) report.metadata["mode_prefix"] = std::to_string(*c.mode_prefix);

    fmt::print(out, "selected: experiment {} mockup {}\n", cmp.n_experiment, cmp.n_mockup);
    fmt::print(out, "XE experiment: {:.8g} +/- {:.3g}\n", cmp.xe_experiment, cmp.se_experiment);
    fmt::print(out, "XE mockup: {:.8g} +/- {:.3g}\n", cmp.xe_mockup, cmp.se_mockup);
    fmt::print(out, "delta XE: {:.8g} +/- {:.3g}\n", cmp.delta_xe, cmp.delta_xe_se);
    if (cmp.hog) fmt::print(out, "HOG rate: {:.8g}\n", *cmp.hog);
    if (!c.output.empty()) {
        save_report(report, c.output, parse_format(c.format));
        fmt::print(out, "wrote {}\n", c.output);
    }
    return 0;
}

// ---- import-ustc --------------------------------------------------------------

int cmd_import(const ImportConfig& c, std::ostream& out) {
    const auto inst = import_ustc(c.real, c.imag, c.squeezing);
    save_instance(inst, c.output);
    const auto state = build_output_covariance(inst);
    fmt::print(out, "imported N={} K={}; mean click number {:.4f}; wrote {}\n", inst.n_output, inst.n_input,
               mean_click_number(state), c.output);
    fmt::print(out, "check the mean click number against the published value before using this instance\n");
    return 0;
}

std::string join_args(int argc, char** argv) {
    std::string s;
    for (int i = 1; i < argc; ++i) s += (i > 1 ? " " : "") + std::string(argv[i]);
    return s;
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian boson sampling mockup samplers and scoring"};
    app.require_subcommand(1);
    std::string simd;
    app.add_option("--simd", simd, "Kernel ISA: auto, scalar, avx2, neon (overrides GBSMOCK_SIMD)");

    BuildConfig bc;
    auto* build = app.add_subcommand("build", "Validate an instance or create a random one");
    build->add_option("--instance", bc.instance, "Instance JSON")->check(CLI::ExistingFile);
    build->add_option("--random", bc.random_modes, "Create a random instance with this many modes")
        ->check(CLI::PositiveNumber);
    build->add_option("--inputs", bc.random_inputs, "Input modes of the random instance (even)");
    build->add_option("--transmission", bc.transmission, "Transmission of the random instance")
        ->check(CLI::Range(0.0, 1.0));
    build->add_option("--r-min", bc.r_min, "Smallest squeezing of the random instance");
    build->add_option("--r-max", bc.r_max, "Largest squeezing of the random instance");
    build->add_option("--seed", bc.seed, "Seed");
    build->add_option("--output", bc.output, "Write the instance here");

    SampleConfig sc;
    auto* sample = app.add_subcommand("sample", "Generate mockup samples");
    sample->add_option("--instance", sc.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    sample->add_option("--method", sc.method, "uniform, thermal, tap or greedy")
        ->required()
        ->check(CLI::IsMember({"uniform", "thermal", "tap", "greedy"}));
    sample->add_option("--order", sc.order, "Greedy order k")->check(CLI::PositiveNumber);
    sample->add_option("--samples", sc.samples, "Number of samples L")->required();
    sample->add_option("--seed", sc.seed, "Seed")->required();
    sample->add_option("--burn-in", sc.burn_in, "Gibbs burn-in sweeps")->check(CLI::NonNegativeNumber);
    sample->add_option("--thinning", sc.thinning, "Gibbs sweeps between samples")->check(CLI::PositiveNumber);
    sample->add_option("--chains", sc.chains, "Independent Gibbs chains")->check(CLI::PositiveNumber);
    sample->add_option("--keep-fraction", sc.keep_fraction, "Keep a random fraction of the samples")
        ->check(CLI::Range(0.0, 1.0));
    sample->add_flag("--iid", sc.iid, "Greedy: one random row per independent run");
    sample->add_option("--iid-rows", sc.iid_rows, "Greedy --iid: rows per run (default --samples)");
    sample->add_option("--output", sc.output, "Sample file")->required();

    AnalyzeConfig ac;
    auto* analyze = app.add_subcommand("analyze", "Score samples on random mode subsets");
    analyze->add_option("--instance", ac.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    analyze->add_option("--samples", ac.samples, "Mockup sample file")->required()->check(CLI::ExistingFile);
    analyze->add_option("--experiment", ac.experiment, "Experimental sample file")->check(CLI::ExistingFile);
    analyze->add_option("--metric", ac.metric, "tvd, kl, ursell or clicks")
        ->check(CLI::IsMember({"tvd", "kl", "ursell", "clicks"}));
    analyze->add_option("--subset-sizes", ac.subset_sizes, "Sizes, e.g. 1-14 or 2,3,5");
    analyze->add_option("--n-subsets", ac.n_subsets, "Subsets per size")->check(CLI::Range(1, 10000));
    analyze->add_option("--seed", ac.seed, "Seed for subset selection and bootstrap");
    analyze->add_option("--max-samples", ac.max_samples, "Use only the first N samples (0 = all)");
    analyze->add_option("--moment-order", ac.moment_order, "Click moments up to this order")->check(CLI::Range(1, 3));
    analyze->add_option("--subset-cap", ac.subset_cap, "Largest subset size allowed")->check(CLI::Range(1, 30));
    analyze->add_option("--output", ac.output, "Report path")->required();
    analyze->add_option("--format", ac.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    CompareConfig cc;
    auto* compare = app.add_subcommand("compare", "Cross-entropy difference and HOG rate of two sample files");
    compare->add_option("--instance", cc.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
    compare->add_option("--experiment", cc.experiment, "Experimental sample file")->required()->check(CLI::ExistingFile);
    compare->add_option("--mockup", cc.mockup, "Mockup sample file")->required()->check(CLI::ExistingFile);
    compare->add_option("--click-number", cc.click_number, "Only samples with this many clicks")
        ->check(CLI::NonNegativeNumber);
    compare->add_option("--mode-prefix", cc.mode_prefix, "Marginalize onto the first M modes");
    compare->add_option("--max-samples", cc.max_samples, "Samples per set (first matching in file order)");
    compare->add_option("--min-samples", cc.min_samples, "Fail when fewer samples match");
    compare->add_flag("--hog", cc.hog, "Report the HOG rate");
    compare->add_option("--click-budget", cc.click_budget, "Warn above this many clicks per probability");
    compare->add_flag("--strict", cc.strict, "Fail instead of warning above the click budget");
    compare->add_option("--output", cc.output, "Report path");
    compare->add_option("--format", cc.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    ImportConfig ic;
    auto* import = app.add_subcommand("import-ustc", "Convert text matrices to a canonical instance");
    import->add_option("--real", ic.real, "Real part of T, N rows of K numbers")->required()->check(CLI::ExistingFile);
    import->add_option("--imag", ic.imag, "Imaginary part of T")->required()->check(CLI::ExistingFile);
    import->add_option("--squeezing", ic.squeezing, "K/2 squeezing parameters")->required()->check(CLI::ExistingFile);
    import->add_option("--output", ic.output, "Instance JSON to write")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (!simd.empty()) {
            if (simd == "scalar") kernels::set_isa(kernels::Isa::Scalar);
            else if (simd == "avx2") kernels::set_isa(kernels::Isa::Avx2);
            else if (simd == "neon") kernels::set_isa(kernels::Isa::Neon);
            else if (simd != "auto") throw UsageError(fmt::format("unknown --simd value '{}'", simd));
        }
        if (build->parsed()) return cmd_build(bc, out);
        if (sample->parsed()) return cmd_sample(sc, join_args(argc, argv), out);
        if (analyze->parsed()) return cmd_analyze(ac, out);
        if (compare->parsed()) return cmd_compare(cc, out);
        if (import->parsed()) return cmd_import(ic, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

}  // namespace gbsmock::cli
