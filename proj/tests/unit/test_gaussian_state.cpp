#include <catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>

#include "gbsmock/errors.hpp"
#include "gbsmock/gaussian_state.hpp"
#include "gbsmock/instance.hpp"
#include "gbsmock/log.hpp"
#include "gbsmock/probability.hpp"
#include "support.hpp"

using namespace gbsmock;
using Catch::Matchers::WithinAbs;

namespace {

// Squared Fock amplitudes of a single-mode squeezed vacuum, |c_2n|^2, up to `cutoff` photons.
std::vector<double> squeezed_photon_probs(double r, int cutoff) {
    std::vector<double> p(cutoff + 1, 0.0);
    const double t = std::tanh(r);
    double c = 1.0 / std::sqrt(std::cosh(r));  // c_0
    for (int n = 0; 2 * n <= cutoff; ++n) {
        p[2 * n] = c * c;
        // c_{2n+2} = c_{2n} * (-t) * sqrt((2n+1)(2n+2)) / (2(n+1))
        c *= -t * std::sqrt((2.0 * n + 1) * (2.0 * n + 2)) / (2.0 * (n + 1));
    }
    return p;
}

}  // namespace

TEST_CASE("input covariance of vacuum is I/2", "[gaussian]") {
    std::vector<double> r(3, 0.0);
    auto s = build_input_covariance(r, 6);
    CHECK(s == ComplexMatrix::Identity(12, 12) * 0.5);
}

TEST_CASE("input covariance of one pair matches hand multiplication", "[gaussian]") {
    const double r = 0.7;
    std::vector<double> sq{r};
    auto s = build_input_covariance(sq, 2);
    // S = [[ch I, sh I], [sh I, ch I]], sigma_in = S S^T / 2.
    RealMatrix S(4, 4);
    const double ch = std::cosh(r), sh = std::sinh(r);
    S << ch, 0, sh, 0, 0, ch, 0, sh, sh, 0, ch, 0, 0, sh, 0, ch;
    RealMatrix expect = S * S.transpose() * 0.5;
    CHECK((s.real() - expect).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(s.imag().cwiseAbs().maxCoeff() == 0.0);
    CHECK_THAT(s(0, 0).real(), WithinAbs(std::cosh(2 * r) / 2, 1e-14));
    CHECK_THAT(s(0, 2).real(), WithinAbs(std::sinh(2 * r) / 2, 1e-14));
    CHECK_THAT(s(1, 3).real(), WithinAbs(std::sinh(2 * r) / 2, 1e-14));
}

TEST_CASE("input covariance eigenvalues are exp(+-2r)/2", "[gaussian]") {
    std::vector<double> sq{0.3, 1.1, 0.0};
    auto s = build_input_covariance(sq, 6);
    CHECK((s - s.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(s.real());
    std::vector<double> got(es.eigenvalues().data(), es.eigenvalues().data() + 12);
    std::vector<double> want;
    for (double r : sq)
        for (int i = 0; i < 2; ++i) {
            want.push_back(std::exp(2 * r) / 2);
            want.push_back(std::exp(-2 * r) / 2);
        }
    std::sort(want.begin(), want.end());
    for (int i = 0; i < 12; ++i) CHECK_THAT(got[i], WithinAbs(want[i], 1e-12));
}

TEST_CASE("input covariance argument errors", "[gaussian]") {
    std::vector<double> two{0.1, 0.2};
    CHECK_THROWS_AS(build_input_covariance(two, 2), DimensionError);
    std::vector<double> neg{-0.1};
    CHECK_THROWS_AS(build_input_covariance(neg, 2), DomainError);
    std::vector<double> nan{std::nan("")};
    CHECK_THROWS_AS(build_input_covariance(nan, 2), DomainError);
}

TEST_CASE("zero squeezing gives the identity exactly", "[gaussian]") {
    auto inst = random_instance(7, 8, 3);
    std::fill(inst.squeezing.begin(), inst.squeezing.end(), 0.0);
    auto s = build_output_covariance(inst);
    CHECK(s.sigma() == ComplexMatrix::Identity(14, 14));
    CHECK(s.vacuum_probability() == 1.0);
    CHECK(GaussianState::vacuum(3).sigma() == ComplexMatrix::Identity(6, 6));
}

TEST_CASE("identity interferometer gives independent squeezed vacua (Fock oracle)", "[gaussian]") {
    const double r = 0.5;
    GBSInstance inst{2, 2, {r}, ComplexMatrix::Identity(2, 2)};
    auto state = build_output_covariance(inst);
    auto p = squeezed_photon_probs(r, 40);
    double total = 0.0;
    for (double x : p) total += x;
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
    const double p0 = p[0];
    CHECK_THAT(state.vacuum_probability(), WithinAbs(p0 * p0, 1e-12));
    auto table = marginal_table(state, std::vector<int>{0, 1});
    CHECK_THAT(table.probs[1], WithinAbs(p0 * (total - p0), 1e-12));
    CHECK_THAT(table.probs[3], WithinAbs((total - p0) * (total - p0), 1e-12));
}

TEST_CASE("balanced splitter with a phase makes a two-mode squeezed vacuum", "[gaussian]") {
    const double r = 0.5;
    const double h = 1.0 / std::sqrt(2.0);
    ComplexMatrix t(2, 2);
    t << Complex(h, 0), Complex(0, h), Complex(h, 0), Complex(0, -h);
    GBSInstance inst{2, 2, {r}, t};
    auto table = marginal_table(build_output_covariance(inst), std::vector<int>{0, 1});
    // TMSV: P(n, n) = tanh^{2n} r / cosh^2 r; photons always come in pairs.
    double p11 = 0.0;
    for (int n = 1; n <= 40; ++n) p11 += std::pow(std::tanh(r), 2 * n) / std::pow(std::cosh(r), 2);
    CHECK_THAT(table.probs[0], WithinAbs(1.0 / std::pow(std::cosh(r), 2), 1e-12));
    CHECK_THAT(table.probs[1], WithinAbs(0.0, 1e-12));
    CHECK_THAT(table.probs[2], WithinAbs(0.0, 1e-12));
    CHECK_THAT(table.probs[3], WithinAbs(p11, 1e-10));
}

TEST_CASE("generated states satisfy the physicality invariants", "[gaussian]") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto s = testsupport::random_state(6, seed);
        const auto& m = s->sigma();
        CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-10);
        const int n = s->n_modes();
        CHECK((m.bottomRightCorner(n, n) - m.topLeftCorner(n, n).conjugate()).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((m.bottomLeftCorner(n, n) - m.topRightCorner(n, n).conjugate()).cwiseAbs().maxCoeff() <= 1e-10);
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
        CHECK(es.eigenvalues().minCoeff() >= 0.5 - 1e-9);
        CHECK(s->log_det() >= std::log(1 - 1e-9));
        CHECK((s->inverse() * m - ComplexMatrix::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("from_sigma rejects unphysical matrices", "[gaussian]") {
    CHECK_THROWS_AS(GaussianState::from_sigma(ComplexMatrix::Identity(4, 4) * 0.4), ConditioningError);
    ComplexMatrix m = ComplexMatrix::Identity(4, 4);
    m(0, 1) = 0.1;
    CHECK_THROWS_AS(GaussianState::from_sigma(m), ConditioningError);
    CHECK_THROWS_AS(GaussianState::from_sigma(ComplexMatrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("reduce_state restrictions", "[gaussian]") {
    auto s = testsupport::random_state(6, 42);
    std::vector<int> all{0, 1, 2, 3, 4, 5};
    CHECK(reduce_state(*s, all).sigma() == s->sigma());

    auto vac = GaussianState::vacuum(5);
    CHECK(reduce_state(vac, std::vector<int>{3, 1}).sigma() == ComplexMatrix::Identity(4, 4));

    const auto full = testsupport::oracle_full(*s);
    std::vector<int> sub{1, 4};
    auto t = marginal_table(reduce_state(*s, sub), std::vector<int>{0, 1});
    auto want = testsupport::oracle_marginal(full, 6, sub);
    for (int i = 0; i < 4; ++i) CHECK_THAT(t.probs[i], WithinAbs(want[i], 1e-10));
}

TEST_CASE("reduction commutes", "[gaussian]") {
    auto s = testsupport::random_state(6, 9);
    std::vector<int> r12{1, 4, 2, 5};
    std::vector<int> r1{1, 4};
    auto twice = reduce_state(reduce_state(*s, r12), std::vector<int>{0, 1});
    auto once = reduce_state(*s, r1);
    CHECK((twice.sigma() - once.sigma()).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("reduce_state index errors", "[gaussian]") {
    auto s = testsupport::random_state(4, 1);
    CHECK_THROWS_AS(reduce_state(*s, std::vector<int>{0, 4}), IndexError);
    CHECK_THROWS_AS(reduce_state(*s, std::vector<int>{-1}), IndexError);
    CHECK_THROWS_AS(reduce_state(*s, std::vector<int>{2, 2}), IndexError);
}

TEST_CASE("instance validation", "[gaussian]") {
    auto inst = random_instance(4, 4, 5);
    CHECK_NOTHROW(validate(inst));
    CHECK(max_singular_value(inst.transformation) <= 1.0);

    auto bad = inst;
    bad.squeezing.push_back(0.1);
    CHECK_THROWS_AS(validate(bad), DimensionError);
    bad = inst;
    bad.n_input = 3;
    CHECK_THROWS_AS(validate(bad), DimensionError);
    bad = inst;
    bad.transformation(0, 0) = Complex(std::nan(""), 0);
    CHECK_THROWS_AS(validate(bad), DomainError);

    // Unitary scaled slightly above one: accepted with a warning.
    auto u = haar_unitary(4, 8);
    GBSInstance edge{4, 4, {0.5, 0.5}, u * (1.0 + 5e-9)};
    std::vector<std::string> warnings;
    auto old = set_warning_sink([&](const std::string& w) { warnings.push_back(w); });
    CHECK_NOTHROW(validate(edge));
    set_warning_sink(old);
    CHECK(warnings.size() == 1);

    GBSInstance over{4, 4, {0.5, 0.5}, u * 1.01};
    CHECK_THROWS_AS(validate(over), ConditioningError);
}
