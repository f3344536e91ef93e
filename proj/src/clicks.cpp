#include "gbsmock/clicks.hpp"

#include <cmath>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/parallel.hpp"
#include "summation.hpp"

namespace gbsmock {

std::uint64_t surjection_count(int kp, int l) {
    if (kp < 0 || l < 0 || kp > 20) throw DomainError(fmt::format("surjection count t({}, {}) out of range", kp, l));
    if (l > kp) return 0;
    // Inclusion-exclusion in signed 128-bit to keep intermediate powers exact.
    __int128 total = 0;
    __int128 binom = 1;
    for (int i = 0; i <= l; ++i) {
        __int128 p = 1;
        for (int e = 0; e < kp; ++e) p *= (l - i);
        total += (i % 2 ? -1 : 1) * binom * p;
        binom = binom * (l - i) / (i + 1);
    }
    return static_cast<std::uint64_t>(total);
}

namespace {

// Sum of all-ones probabilities over subsets of size l whose smallest mode is `first`.
double ones_sum_from(const MarginalOracle& oracle, int n, int l, int first) {
    PairwiseSum s;
    ModeList modes{first};
    auto rec = [&](auto&& self, int start) -> void {
        if (static_cast<int>(modes.size()) == l) {
            s.add(oracle(modes).all_ones());
            return;
        }
        for (int a = start; a < n; ++a) {
            modes.push_back(a);
            self(self, a + 1);
            modes.pop_back();
        }
    };
    rec(rec, first + 1);
    return s.total();
}

ClickMoments central_from_raw(const std::vector<double>& raw, int order) {
    ClickMoments out;
    const double m1 = raw[0];
    out.push_back(m1);
    if (order >= 2) out.push_back(raw[1] - m1 * m1);
    if (order >= 3) out.push_back(raw[2] - 3.0 * m1 * raw[1] + 2.0 * m1 * m1 * m1);
    return out;
}

}  // namespace

ClickMoments click_moments_theoretical(const MarginalOracle& oracle, int n_modes, int order) {
    if (order < 1) throw DomainError("moment order must be at least 1");
    if (order > 3) throw BudgetError(fmt::format("theoretical click moments limited to order 3, got {}", order));
    if (n_modes < 1) throw DimensionError("need at least one mode");
    // sums[l - 1] = sum over l-subsets of P(all click).
    std::vector<double> sums(order, 0.0);
    for (int l = 1; l <= order; ++l) {
        std::vector<double> part(n_modes, 0.0);
        parallel_for(static_cast<std::size_t>(n_modes),
                     [&](std::size_t a) { part[a] = ones_sum_from(oracle, n_modes, l, static_cast<int>(a)); });
        PairwiseSum s;
        for (double x : part) s.add(x);
        sums[l - 1] = s.total();
    }
    std::vector<double> raw(order, 0.0);
    for (int kp = 1; kp <= order; ++kp) {
        double m = 0.0;
        for (int l = 1; l <= kp; ++l) m += static_cast<double>(surjection_count(kp, l)) * sums[l - 1];
        raw[kp - 1] = m;
    }
    return central_from_raw(raw, order);
}

ClickMoments click_moments_empirical(const SampleSet& samples, int order) {
    if (order < 1) throw DomainError("moment order must be at least 1");
    if (samples.empty()) throw DomainError("click moments of an empty sample set");
    const auto n = samples.size();
    PairwiseSum s;
    for (std::size_t i = 0; i < n; ++i) s.add(samples.click_count(i));
    const double mean = s.total() / static_cast<double>(n);
    ClickMoments out{mean};
    for (int j = 2; j <= order; ++j) {
        PairwiseSum c;
        for (std::size_t i = 0; i < n; ++i) c.add(std::pow(samples.click_count(i) - mean, j));
        out.push_back(c.total() / static_cast<double>(n));
    }
    return out;
}

std::vector<std::uint64_t> click_histogram(const SampleSet& samples) {
    std::vector<std::uint64_t> h(samples.n_modes() + 1, 0);
    for (std::size_t i = 0; i < samples.size(); ++i) ++h[samples.click_count(i)];
    return h;
}

namespace {

// Moments of exp(b u + c u^2) over the grid u_x = (x - m) / s.
struct GridMoments {
    double log_z;
    double e1, e2, e3, e4;
};

GridMoments grid_moments(double b, double c, int n, double m, double s) {
    std::vector<double> e(n + 1);
    double top = -INFINITY;
    for (int x = 0; x <= n; ++x) {
        const double u = (x - m) / s;
        e[x] = b * u + c * u * u;
        top = std::max(top, e[x]);
    }
    double z = 0, m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    for (int x = 0; x <= n; ++x) {
        const double u = (x - m) / s;
        const double w = std::exp(e[x] - top);
        z += w;
        m1 += w * u;
        m2 += w * u * u;
        m3 += w * u * u * u;
        m4 += w * u * u * u * u;
    }
    return {top + std::log(z), m1 / z, m2 / z, m3 / z, m4 / z};
}

}  // namespace

ClickGaussian fit_click_gaussian(double mu1, double mu2, int n_modes) {
    if (n_modes < 1) throw DimensionError("need at least one mode");
    if (!(mu2 > 0.0) || !std::isfinite(mu2)) throw DomainError(fmt::format("variance must be positive, got {}", mu2));
    if (!(mu1 > 0.0 && mu1 < n_modes)) {
        throw DomainError(fmt::format("mean {} must lie strictly inside (0, {})", mu1, n_modes));
    }
    // Work in u = (x - mu1) / sqrt(mu2): the targets become E[u] = 0, E[u^2] = 1.
    const double s = std::sqrt(mu2);
    double b = 0.0, c = -0.5;
    auto residual = [&](const GridMoments& g) { return std::hypot(g.e1, g.e2 - 1.0); };
    GridMoments g = grid_moments(b, c, n_modes, mu1, s);
    double res = residual(g);
    const double tol = 1e-11;
    int it = 0;
    for (; it < 200 && res > tol; ++it) {
        // Jacobian of (E[u], E[u^2]) in (b, c) is the covariance of (u, u^2).
        const double v11 = g.e2 - g.e1 * g.e1;
        const double v12 = g.e3 - g.e1 * g.e2;
        const double v22 = g.e4 - g.e2 * g.e2;
        const double det = v11 * v22 - v12 * v12;
        if (!(det > 0.0)) break;
        const double r1 = -g.e1, r2 = 1.0 - g.e2;
        const double db = (v22 * r1 - v12 * r2) / det;
        const double dc = (v11 * r2 - v12 * r1) / det;
        double t = 1.0;
        while (true) {
            auto trial = grid_moments(b + t * db, c + t * dc, n_modes, mu1, s);
            const double r = residual(trial);
            if ((std::isfinite(r) && r < res) || t < 1e-8) {
                b += t * db;
                c += t * dc;
                g = trial;
                res = r;
                break;
            }
            t *= 0.5;
        }
    }
    if (!(res <= tol)) {
        throw ConvergenceError(fmt::format("click Gaussian fit did not converge: mean error {:.3e}, variance error "
                                           "{:.3e}",
                                           g.e1 * s, (g.e2 - 1.0) * mu2),
                               res);
    }
    ClickGaussian fit;
    fit.C = c / mu2;
    fit.B = b / s - 2.0 * c * mu1 / mu2;
    // Exponent b u + c u^2 = B x + C x^2 + (c mu1^2 / mu2 - b mu1 / s).
    fit.A = c * mu1 * mu1 / mu2 - b * mu1 / s - g.log_z;
    return fit;
}

std::vector<double> click_gaussian_pmf(const ClickGaussian& fit, int n_modes) {
    std::vector<double> w(n_modes + 1);
    for (int x = 0; x <= n_modes; ++x) w[x] = std::exp(fit.A + fit.B * x + fit.C * x * x);
    return w;
}

}  // namespace gbsmock
