#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "gbsmock/distances.hpp"
#include "gbsmock/errors.hpp"
#include "gbsmock/ising.hpp"
#include "gbsmock/log.hpp"
#include "gbsmock/max_entropy.hpp"
#include "gbsmock/samplers.hpp"
#include "gbsmock/subsets.hpp"
#include "gbsmock/ursell.hpp"
#include "support.hpp"

using namespace gbsmock;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

double binomial_sigma(double p, std::size_t L) { return std::sqrt(p * (1 - p) / static_cast<double>(L)); }

IsingModel random_ising(int n, double jmax, double hmax, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    IsingModel m;
    m.h = RealVector(n);
    m.J = RealMatrix::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        m.h(a) = hmax * u(rng);
        for (int b = a + 1; b < n; ++b) m.J(a, b) = m.J(b, a) = jmax * u(rng);
    }
    return m;
}

// Spin means and covariance of an exact distribution (mode 0 most significant).
std::pair<RealVector, RealMatrix> exact_spin_moments(const std::vector<double>& p, int n) {
    RealVector mu = RealVector::Zero(n);
    RealMatrix ss = RealMatrix::Zero(n, n);
    for (std::size_t x = 0; x < p.size(); ++x) {
        for (int a = 0; a < n; ++a) {
            const double sa = (x >> (n - 1 - a) & 1) ? 1.0 : -1.0;
            mu(a) += p[x] * sa;
            for (int b = 0; b < n; ++b) ss(a, b) += p[x] * sa * ((x >> (n - 1 - b) & 1) ? 1.0 : -1.0);
        }
    }
    return {mu, ss - mu * mu.transpose()};
}

std::vector<std::string> sorted_rows(const SampleSet& s) {
    std::vector<std::string> r;
    for (std::size_t i = 0; i < s.size(); ++i) r.push_back(s.row_string(i));
    std::sort(r.begin(), r.end());
    return r;
}

}  // namespace

TEST_CASE("uniform sampler", "[samplers]") {
    auto one = sample_uniform(1, 1000000, 7);
    CHECK_THAT(one.empirical_table(std::vector<int>{0}).probs[1], WithinAbs(0.5, 0.002));

    const std::size_t L = 160000;
    auto four = sample_uniform(4, L, 8);
    auto counts = four.pattern_counts(std::vector<int>{0, 1, 2, 3});
    const double sd = std::sqrt(L * (1.0 / 16) * (15.0 / 16));
    for (auto c : counts) CHECK(std::abs(static_cast<double>(c) - L / 16.0) < 4 * sd);

    CHECK(sample_uniform(70, 100, 3) == sample_uniform(70, 100, 3));
    CHECK_FALSE(sample_uniform(70, 100, 3) == sample_uniform(70, 100, 4));
    CHECK_THROWS_AS(sample_uniform(3, 0, 1), DomainError);
}

TEST_CASE("thermal sampler", "[samplers]") {
    std::vector<double> zeros(5, 0.0);
    auto z = sample_thermal(zeros, 1000, 1);
    for (std::size_t i = 0; i < z.size(); ++i) CHECK(z.click_count(i) == 0);

    std::vector<double> p{1.0, 0.5};
    auto s = sample_thermal(p, 1000000, 2);
    auto t = s.empirical_table(std::vector<int>{0});
    CHECK(t.probs[1] == 1.0);

    std::vector<double> bad{0.2, 1.5};
    CHECK_THROWS_AS(sample_thermal(bad, 10, 1), DomainError);
}

TEST_CASE("thermal samples of a Gaussian state match one-mode marginals only", "[samplers]") {
    auto state = testsupport::random_state(6, 12);
    const auto probs = click_probabilities(*state);
    const std::size_t L = 200000;
    auto s = sample_thermal(probs, L, 5);
    for (int a = 0; a < 6; ++a) {
        const double emp = s.empirical_table(std::vector<int>{a}).probs[1];
        CHECK(std::abs(emp - probs[a]) < 4 * binomial_sigma(probs[a], L));
    }
    for (const auto& pair : all_subsets(6, 2)) {
        CHECK(std::abs(ursell_empirical(s, pair).value) <= 4.0 / std::sqrt(static_cast<double>(L)));
    }
}

TEST_CASE("bm_exact_distribution closed forms", "[samplers]") {
    IsingModel free{RealVector::Zero(3), RealMatrix::Zero(3, 3)};
    for (double p : bm_exact_distribution(free)) CHECK_THAT(p, WithinAbs(1.0 / 8, 1e-15));

    const double beta = 0.7;
    IsingModel pair{RealVector::Zero(2), RealMatrix::Zero(2, 2)};
    pair.J(0, 1) = pair.J(1, 0) = beta;
    auto p = bm_exact_distribution(pair);
    const double z = 2 * std::exp(beta) + 2 * std::exp(-beta);
    CHECK_THAT(p[0], WithinAbs(std::exp(beta) / z, 1e-15));
    CHECK_THAT(p[1], WithinAbs(std::exp(-beta) / z, 1e-15));
    CHECK_THAT(p[2], WithinAbs(std::exp(-beta) / z, 1e-15));
    CHECK_THAT(p[3], WithinAbs(std::exp(beta) / z, 1e-15));

    auto m = random_ising(7, 0.5, 0.5, 3);
    auto q = bm_exact_distribution(m);
    CHECK_THAT(std::accumulate(q.begin(), q.end(), 0.0), WithinAbs(1.0, 1e-12));
    auto q2 = bm_exact_distribution(to_boltzmann_machine(m));
    for (std::size_t i = 0; i < q.size(); ++i) CHECK_THAT(q2[i], WithinAbs(q[i], 1e-13));

    CHECK_THROWS_AS(bm_exact_distribution(random_ising(12, 0.1, 0.1, 1), 10), BudgetError);
    IsingModel asym = pair;
    asym.J(0, 1) = 0.2;
    CHECK_THROWS_AS(bm_exact_distribution(asym), DomainError);
}

TEST_CASE("TAP with independent spins", "[samplers]") {
    RealVector m(3);
    m << 0.2, -0.5, 0.0;
    RealMatrix c = RealMatrix::Zero(3, 3);
    for (int a = 0; a < 3; ++a) c(a, a) = 1 - m(a) * m(a);
    auto fit = fit_tap(m, c);
    CHECK(fit.J.cwiseAbs().maxCoeff() < 1e-15);
    for (int a = 0; a < 3; ++a) CHECK_THAT(fit.h(a), WithinAbs(std::atanh(m(a)), 1e-14));
}

TEST_CASE("TAP recovers a weak two-spin coupling", "[samplers]") {
    IsingModel truth{RealVector::Zero(2), RealMatrix::Zero(2, 2)};
    truth.J(0, 1) = truth.J(1, 0) = 0.1;
    auto [mu, c] = exact_spin_moments(bm_exact_distribution(truth), 2);
    CHECK_THAT(c(0, 1), WithinAbs(std::tanh(0.1), 1e-14));
    auto fit = fit_tap(mu, c);
    CHECK_THAT(fit.J(0, 1), WithinRel(0.1, 0.05));
    CHECK(fit.J(0, 0) == 0.0);
}

TEST_CASE("standard Onsager term beats the negative variant on exact moments", "[samplers]") {
    auto truth = random_ising(8, 0.1, 0.8, 5);
    auto [mu, c] = exact_spin_moments(bm_exact_distribution(truth), 8);
    TapOptions negative;
    negative.onsager = OnsagerForm::Negative;
    const double err_std = (fit_tap(mu, c).h - truth.h).cwiseAbs().maxCoeff();
    const double err_negative = (fit_tap(mu, c, negative).h - truth.h).cwiseAbs().maxCoeff();
    CHECK(err_std < 0.01);
    CHECK(err_std * 5 < err_negative);
}

TEST_CASE("TAP boundary behavior", "[samplers]") {
    RealVector m(2);
    m << 1.0, -1.0;
    RealMatrix c = RealMatrix::Identity(2, 2) * 1e-6;
    TapDiagnostics d;
    auto fit = fit_tap(m, c, {}, &d);
    CHECK(d.clamped_means == 2);
    CHECK(fit.h.allFinite());
    CHECK(fit.h(0) > 10);
    CHECK(fit.h(1) < -10);

    // Negative discriminant: naive mean-field fallback with a warning.
    RealVector m2(2);
    m2 << 0.9, 0.9;
    RealMatrix c2(2, 2);
    c2 << 0.19, -0.1, -0.1, 0.19;
    std::vector<std::string> warnings;
    auto old = set_warning_sink([&](const std::string& w) { warnings.push_back(w); });
    auto fb = fit_tap(m2, c2, {}, &d);
    set_warning_sink(old);
    const double inv01 = c2.inverse()(0, 1);
    CHECK(d.fallback_pairs == 1);
    CHECK(warnings.size() == 1);
    CHECK_THAT(fb.J(0, 1), WithinAbs(-inv01, 1e-12));

    // Singular covariance: ridge.
    RealMatrix zero = RealMatrix::Zero(2, 2);
    old = set_warning_sink([](const std::string&) {});
    CHECK_NOTHROW(fit_tap(m2, zero, {}, &d));
    set_warning_sink(old);
    CHECK(d.ridge_used);
    CHECK_THROWS_AS(fit_tap(m2, RealMatrix(-RealMatrix::Identity(2, 2))), ConditioningError);
    CHECK_THROWS_AS(fit_tap(m2, RealMatrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("Gibbs sampler with zero couplings", "[samplers]") {
    IsingModel m{RealVector(3), RealMatrix::Zero(3, 3)};
    m.h << 0.3, -0.8, 0.0;
    GibbsOptions o;
    o.burn_in = 10;
    o.thinning = 1;
    const std::size_t L = 100000;
    auto s = gibbs_sample(m, L, 4, o);
    for (int a = 0; a < 3; ++a) {
        const double target = 1.0 / (1.0 + std::exp(-2 * m.h(a)));
        const double emp = s.empirical_table(std::vector<int>{a}).probs[1];
        CHECK(std::abs(emp - target) < 4 * binomial_sigma(target, L));
    }
}

TEST_CASE("Gibbs sampler converges to the exact distribution", "[samplers]") {
    auto m = random_ising(6, 0.3, 0.5, 9);
    const auto exact = bm_exact_distribution(m);
    GibbsOptions o;
    o.burn_in = 1000;
    o.thinning = 5;
    double previous = 1.0;
    for (std::size_t L : {10000, 100000, 1000000}) {
        auto s = gibbs_sample(m, L, 21, o);
        const double d = tvd(testsupport::empirical_full(s), exact);
        CHECK(d < previous);
        previous = d;
    }
    CHECK(previous < 0.01);
}

TEST_CASE("Gibbs sampler is deterministic for any worker count", "[samplers]") {
    auto m = random_ising(5, 0.3, 0.5, 2);
    GibbsOptions o;
    o.burn_in = 50;
    o.thinning = 3;
    o.chains = 3;
    setenv("GBSMOCK_THREADS", "1", 1);
    auto a = gibbs_sample(m, 1000, 5, o);
    setenv("GBSMOCK_THREADS", "4", 1);
    auto b = gibbs_sample(m, 1000, 5, o);
    unsetenv("GBSMOCK_THREADS");
    CHECK(a == b);
    CHECK(a.size() == 1000);
    CHECK(a.metadata.burn_in == 50);
    CHECK_THROWS_AS(gibbs_sample(m, 10, 1, GibbsOptions{0, 0, 1}), DomainError);
}

TEST_CASE("greedy order 1 rounds marginals to within 1/L", "[samplers]") {
    const std::vector<double> p{0.1234, 0.5, 0.9, 0.0371, 0.66};
    MarginalOracle oracle = [&](std::span<const int> modes) {
        MarginalTable t;
        t.modes.assign(modes.begin(), modes.end());
        t.probs = {1 - p[modes[0]], p[modes[0]]};
        return t;
    };
    const std::size_t L = 1000;
    auto s = greedy_sample(oracle, 5, 1, L, 3);
    for (int a = 0; a < 5; ++a) {
        CHECK(std::abs(s.empirical_table(std::vector<int>{a}).probs[1] - p[a]) <= 1.0 / L);
    }
}

TEST_CASE("greedy order 2 pair marginals on a Gaussian state", "[samplers]") {
    auto state = testsupport::random_state(10, 44);
    auto oracle = state_oracle(state);
    const std::size_t L = 20000;
    auto s = greedy_sample(oracle, 10, 2, L, 6);
    double worst = 0.0;
    for (const auto& pair : all_subsets(10, 2)) {
        auto e = s.empirical_table(pair);
        auto q = oracle(pair);
        double l1 = 0.0;
        for (int i = 0; i < 4; ++i) l1 += std::abs(e.probs[i] - q.probs[i]);
        worst = std::max(worst, l1);
    }
    CHECK(worst <= 10.0 * 4 / L);
}

TEST_CASE("greedy order 2 on a product state keeps pair correlations near zero", "[samplers]") {
    GBSInstance product{6, 6, {0.5, 0.8, 1.1}, ComplexMatrix::Identity(6, 6) * 0.9};
    auto state = std::make_shared<const GaussianState>(build_output_covariance(product));
    const std::size_t L = 20000;
    auto s = greedy_sample(state_oracle(state), 6, 2, L, 2);
    for (const auto& pair : all_subsets(6, 2)) CHECK(std::abs(ursell_empirical(s, pair).value) < 10.0 / L);
}

TEST_CASE("greedy running counts equal a recount", "[samplers]") {
    auto state = testsupport::random_state(6, 3);
    Rng rng(1);
    const std::size_t L = 300;
    GreedyBuilder b(state_oracle(state), 6, 3, L, rng);
    b.fill_prefix();
    while (!b.done()) {
        b.fill_next_column();
        const auto& subsets = b.tracked_subsets();
        CHECK(subsets.size() == binomial(b.filled() - 1, 2));
        for (std::size_t t = 0; t < subsets.size(); ++t) {
            std::vector<double> recount(8, 0.0);
            for (std::size_t r = 0; r < L; ++r) {
                std::size_t idx = 0;
                for (int m : subsets[t]) idx = (idx << 1) | b.bit(r, m);
                recount[idx] += 1.0;
            }
            CHECK(b.tracked_counts(t) == recount);
        }
    }
    auto out = b.finish();
    CHECK(out.size() == L);
}

TEST_CASE("greedy determinism and errors", "[samplers]") {
    auto state = testsupport::random_state(5, 8);
    auto oracle = state_oracle(state);
    CHECK(greedy_sample(oracle, 5, 2, 500, 9) == greedy_sample(oracle, 5, 2, 500, 9));
    CHECK_THROWS_AS(greedy_sample(oracle, 5, 6, 10, 1), DomainError);
    CHECK_THROWS_AS(greedy_sample(oracle, 5, 0, 10, 1), DomainError);
    GreedyOptions iid;
    iid.iid = true;
    iid.iid_rows = 50;
    auto s = greedy_sample(oracle, 5, 2, 20, 4, iid);
    CHECK(s.size() == 20);
}

TEST_CASE("decorrelate", "[samplers]") {
    auto s = sample_uniform(12, 1000, 3);
    auto all = decorrelate(s, 1.0, 5);
    CHECK(all.size() == 1000);
    CHECK(sorted_rows(all) == sorted_rows(s));
    CHECK(decorrelate(s, 0.1, 5).size() == 100);
    CHECK(decorrelate(s, 0.1, 5) == decorrelate(s, 0.1, 5));
    CHECK_FALSE(decorrelate(s, 0.1, 5) == decorrelate(s, 0.1, 6));
    CHECK_THROWS_AS(decorrelate(s, 0.0, 1), DomainError);
    CHECK_THROWS_AS(decorrelate(s, 1.5, 1), DomainError);
}

TEST_CASE("exact BM trainer: independent targets", "[max_entropy]") {
    const std::vector<double> p{0.2, 0.7, 0.45};
    MarginalOracle oracle = [&](std::span<const int> modes) {
        MarginalTable t;
        t.modes.assign(modes.begin(), modes.end());
        // Product distribution; only the all-ones entry is used by the trainer.
        double ones = 1.0;
        for (int m : modes) ones *= p[m];
        t.probs.assign(std::size_t{1} << modes.size(), 0.0);
        t.probs.back() = ones;
        return t;
    };
    auto r = train_exact_bm(oracle, 3, 1);
    for (int a = 0; a < 3; ++a) CHECK_THAT(r.model.terms.at({a}), WithinAbs(std::log(p[a] / (1 - p[a])), 1e-8));
    auto r2 = train_exact_bm(oracle, 3, 2);
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) CHECK(std::abs(r2.model.terms.at({a, b})) < 1e-6);
}

TEST_CASE("exact BM trainer reproduces pair tables", "[max_entropy]") {
    auto state = testsupport::random_state(6, 61);
    auto oracle = state_oracle(state);
    auto r = train_exact_bm(oracle, 6, 2);
    CHECK(r.residual < 1e-8);
    const auto full = bm_exact_distribution(r.model);
    for (int k = 1; k <= 2; ++k)
        for (const auto& s : all_subsets(6, k)) {
            auto want = oracle(s);
            auto got = testsupport::oracle_marginal(full, 6, s);
            for (std::size_t i = 0; i < got.size(); ++i) CHECK_THAT(got[i], WithinAbs(want.probs[i], 1e-7));
        }

    BmTrainOptions grad;
    grad.method = BmTrainMethod::Gradient;
    grad.learning_rate = 2.0;
    grad.max_iterations = 200000;
    grad.tolerance = 1e-6;
    auto small = testsupport::random_state(3, 4);
    auto rg = train_exact_bm(state_oracle(small), 3, 2, grad);
    auto rn = train_exact_bm(state_oracle(small), 3, 2);
    for (const auto& [modes, lambda] : rn.model.terms) CHECK_THAT(rg.model.terms.at(modes), WithinAbs(lambda, 1e-3));

    grad.max_iterations = 1;
    CHECK_THROWS_AS(train_exact_bm(oracle, 6, 2, grad), ConvergenceError);
    CHECK_THROWS_AS(train_exact_bm(oracle, 13, 2), BudgetError);
}
