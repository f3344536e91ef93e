#include <catch_amalgamated.hpp>

#include <numeric>

#include "gbsmock/errors.hpp"
#include "gbsmock/log.hpp"
#include "gbsmock/probability.hpp"
#include "gbsmock/torontonian.hpp"
#include "support.hpp"

using namespace gbsmock;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("torontonian of trivial matrices", "[probability]") {
    CHECK(torontonian(ComplexMatrix(0, 0)) == 1.0);
    CHECK_THAT(torontonian(ComplexMatrix::Zero(2, 2)), WithinAbs(0.0, 1e-15));
    CHECK_THROWS_AS(torontonian(ComplexMatrix::Zero(3, 3)), DimensionError);
    // I - A not positive definite.
    CHECK_THROWS_AS(torontonian(ComplexMatrix::Identity(2, 2) * 2.0), DomainError);
}

TEST_CASE("torontonian p(111) equals inclusion-exclusion over no-click terms", "[probability]") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto s = testsupport::random_state(3, seed, 4);
        std::vector<std::uint8_t> ones{1, 1, 1};
        const double tor = bitstring_probability(*s, ClickPattern(ones));
        const double oracle = testsupport::oracle_probability(*s, ones);
        CHECK_THAT(tor, WithinAbs(oracle, 1e-12));
        CHECK(tor > 0.0);
    }
}

TEST_CASE("bitstring probabilities of simple states", "[probability]") {
    auto vac = GaussianState::vacuum(4);
    CHECK(bitstring_probability(vac, ClickPattern::from_string("0000")) == 1.0);
    CHECK(bitstring_probability(vac, ClickPattern::from_string("0100")) == 0.0);
    auto s = testsupport::random_state(5, 2);
    CHECK_THAT(bitstring_probability(*s, ClickPattern::from_string("00000")),
               WithinRel(std::exp(-0.5 * s->log_det()), 1e-14));
    CHECK_THROWS_AS(bitstring_probability(*s, ClickPattern::from_string("000")), DimensionError);
}

TEST_CASE("six-mode distribution matches the oracle and sums to one", "[probability]") {
    auto s = testsupport::random_state(6, 17);
    const auto oracle = testsupport::oracle_full(*s);
    double total = 0.0;
    for (std::size_t x = 0; x < 64; ++x) {
        const double p = bitstring_probability(*s, ClickPattern(testsupport::bits_of(x, 6)));
        CHECK_THAT(p, WithinAbs(oracle[x], 1e-12));
        total += p;
    }
    CHECK_THAT(total, WithinAbs(1.0, 1e-9));
}

TEST_CASE("full distribution normalization up to ten modes", "[probability]") {
    for (int n : {2, 5, 8, 10}) {
        auto s = testsupport::random_state(n, 100 + n);
        const auto p = full_distribution(*s);
        CHECK_THAT(std::accumulate(p.begin(), p.end(), 0.0), WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("click budget warns or throws", "[probability]") {
    auto s = testsupport::random_state(4, 3);
    auto z = ClickPattern::from_string("1110");
    ProbabilityOptions o;
    o.click_budget = 2;
    int warnings = 0;
    auto old = set_warning_sink([&](const std::string&) { ++warnings; });
    CHECK_NOTHROW(bitstring_probability(*s, z, o));
    set_warning_sink(old);
    CHECK(warnings == 1);
    o.strict = true;
    CHECK_THROWS_AS(bitstring_probability(*s, z, o), BudgetError);
}

TEST_CASE("marginal tables of simple states", "[probability]") {
    auto vac = GaussianState::vacuum(5);
    auto t = marginal_table(vac, std::vector<int>{4, 0, 2});
    CHECK(t.probs[0] == 1.0);
    for (std::size_t i = 1; i < t.probs.size(); ++i) CHECK(t.probs[i] == 0.0);

    auto s = testsupport::random_state(5, 11);
    auto one = marginal_table(*s, std::vector<int>{3});
    const double p0 = testsupport::no_click(*s, {3});
    CHECK_THAT(one.probs[0], WithinAbs(p0, 1e-13));
    CHECK_THAT(one.probs[1], WithinAbs(1 - p0, 1e-13));
}

TEST_CASE("eight-mode three-mode marginals match enumeration", "[probability]") {
    auto s = testsupport::random_state(8, 23);
    const auto full = testsupport::oracle_full(*s);
    for (std::vector<int> modes : {std::vector<int>{0, 1, 2}, {7, 3, 5}, {2, 6, 4}}) {
        auto t = marginal_table(*s, modes);
        auto want = testsupport::oracle_marginal(full, 8, modes);
        for (std::size_t i = 0; i < 8; ++i) CHECK_THAT(t.probs[i], WithinAbs(want[i], 1e-10));
        double sum = std::accumulate(t.probs.begin(), t.probs.end(), 0.0);
        CHECK_THAT(sum, WithinAbs(1.0, 1e-9));
    }
}

TEST_CASE("marginal-of-marginal consistency up to five modes", "[probability]") {
    auto s = testsupport::random_state(7, 4);
    std::vector<int> modes{6, 2, 0, 4, 5};
    for (int k = 5; k >= 2; --k) {
        std::vector<int> m(modes.begin(), modes.begin() + k);
        std::vector<int> prefix(modes.begin(), modes.begin() + k - 1);
        auto dropped = marginal_table(*s, m).drop_last();
        auto direct = marginal_table(*s, prefix);
        for (std::size_t i = 0; i < direct.probs.size(); ++i)
            CHECK_THAT(dropped.probs[i], WithinAbs(direct.probs[i], 1e-10));
    }
}

TEST_CASE("probabilities are permutation equivariant", "[probability]") {
    auto inst = random_instance(5, 6, 31);
    auto s = build_output_covariance(inst);
    std::vector<int> perm{3, 0, 4, 1, 2};
    GBSInstance permuted = inst;
    for (int a = 0; a < 5; ++a) permuted.transformation.row(a) = inst.transformation.row(perm[a]);
    auto sp = build_output_covariance(permuted);
    for (std::size_t x = 0; x < 32; ++x) {
        auto z = testsupport::bits_of(x, 5);
        std::vector<std::uint8_t> zp(5);
        for (int a = 0; a < 5; ++a) zp[a] = z[perm[a]];
        CHECK_THAT(bitstring_probability(sp, ClickPattern(zp)),
                   WithinAbs(bitstring_probability(s, ClickPattern(z)), 1e-12));
    }
}

TEST_CASE("marginal table budget and index errors", "[probability]") {
    auto s = testsupport::random_state(6, 1);
    MarginalOptions o;
    o.max_modes = 3;
    CHECK_THROWS_AS(marginal_table(*s, std::vector<int>{0, 1, 2, 3}, o), BudgetError);
    CHECK_THROWS_AS(marginal_table(*s, std::vector<int>{0, 6}), IndexError);
    CHECK_THROWS_AS(marginal_table(*s, std::vector<int>{1, 1}), IndexError);
}

TEST_CASE("spin moments", "[probability]") {
    auto vac = spin_moments(GaussianState::vacuum(3));
    CHECK(vac.means == RealVector::Constant(3, -1.0));
    CHECK(vac.covariance.cwiseAbs().maxCoeff() == 0.0);

    GBSInstance product{4, 4, {0.6, 0.9}, ComplexMatrix::Identity(4, 4) * 0.9};
    auto pm = spin_moments(build_output_covariance(product));
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b)
            if (a != b) CHECK(std::abs(pm.covariance(a, b)) <= 1e-10);

    auto s = testsupport::random_state(6, 77);
    const auto full = testsupport::oracle_full(*s);
    auto m = spin_moments(*s);
    RealVector mean = RealVector::Zero(6);
    RealMatrix second = RealMatrix::Zero(6, 6);
    for (std::size_t x = 0; x < 64; ++x) {
        auto z = testsupport::bits_of(x, 6);
        for (int a = 0; a < 6; ++a) {
            mean(a) += full[x] * (2.0 * z[a] - 1);
            for (int b = 0; b < 6; ++b) second(a, b) += full[x] * (2.0 * z[a] - 1) * (2.0 * z[b] - 1);
        }
    }
    RealMatrix cov = second - mean * mean.transpose();
    CHECK((m.means - mean).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((m.covariance - cov).cwiseAbs().maxCoeff() <= 1e-10);
    for (int a = 0; a < 6; ++a) CHECK_THAT(m.covariance(a, a), WithinAbs(1 - m.means(a) * m.means(a), 1e-10));
}

TEST_CASE("click patterns", "[probability]") {
    auto z = ClickPattern::from_string("01101");
    CHECK(z.click_count() == 3);
    CHECK(z.clicks() == ModeList{1, 2, 4});
    CHECK(z.to_string() == "01101");
    CHECK(ClickPattern::from_clicks(5, std::vector<int>{4, 1, 2}).to_string() == "01101");
    CHECK_THROWS(ClickPattern::from_string("01x"));
}

TEST_CASE("mean click number is the sum of one-mode probabilities", "[probability]") {
    auto s = testsupport::random_state(6, 5);
    double sum = 0.0;
    for (int a = 0; a < 6; ++a) sum += 1.0 - testsupport::no_click(*s, {a});
    CHECK_THAT(mean_click_number(*s), WithinAbs(sum, 1e-12));
}
