#include "gbsmock/ising.hpp"

#include <cmath>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/log.hpp"
#include "summation.hpp"

namespace gbsmock {

void IsingModel::validate() const {
    const auto n = h.size();
    if (J.rows() != n || J.cols() != n) {
        throw DimensionError(fmt::format("couplings are {}x{}, expected {}x{}", J.rows(), J.cols(), n, n));
    }
    if (!h.allFinite() || !J.allFinite()) throw DomainError("Ising parameters must be finite");
    for (Eigen::Index a = 0; a < n; ++a) {
        if (J(a, a) != 0.0) throw DomainError(fmt::format("J({0},{0}) must be zero", a));
        for (Eigen::Index b = a + 1; b < n; ++b) {
            if (J(a, b) != J(b, a)) throw DomainError(fmt::format("J is not symmetric at ({}, {})", a, b));
        }
    }
}

void BoltzmannMachine::validate() const {
    if (n <= 0) throw DimensionError("Boltzmann machine needs at least one mode");
    for (const auto& [modes, lambda] : terms) {
        if (modes.empty()) throw DomainError("interaction term with an empty mode set");
        for (std::size_t i = 0; i < modes.size(); ++i) {
            if (modes[i] < 0 || modes[i] >= n) throw IndexError(fmt::format("mode {} out of range", modes[i]));
            if (i > 0 && modes[i] <= modes[i - 1]) throw DomainError("interaction modes must be sorted and distinct");
        }
        if (!std::isfinite(lambda)) throw DomainError("interaction coefficient is not finite");
    }
}

int BoltzmannMachine::order() const {
    int k = 0;
    for (const auto& [modes, lambda] : terms) k = std::max(k, static_cast<int>(modes.size()));
    return k;
}

BoltzmannMachine to_boltzmann_machine(const IsingModel& model) {
    model.validate();
    const int n = model.n();
    BoltzmannMachine bm;
    bm.n = n;
    for (int a = 0; a < n; ++a) {
        double lin = 2.0 * model.h(a);
        for (int b = 0; b < n; ++b) lin -= 2.0 * model.J(a, b);
        bm.terms[{a}] = lin;
        for (int b = a + 1; b < n; ++b) {
            if (model.J(a, b) != 0.0) bm.terms[{a, b}] = 4.0 * model.J(a, b);
        }
    }
    return bm;
}

namespace {

std::vector<double> normalize_logits(std::vector<double> logits) {
    double top = -INFINITY;
    for (double l : logits) top = std::max(top, l);
    PairwiseSum z;
    for (double& l : logits) {
        l = std::exp(l - top);
        z.add(l);
    }
    const double inv = 1.0 / z.total();
    for (double& l : logits) l *= inv;
    return logits;
}

void check_budget(int n, int max_modes) {
    if (n > max_modes || n > 30) {
        throw BudgetError(fmt::format("exact distribution over {} modes exceeds the budget of {}", n, max_modes));
    }
}

}  // namespace

std::vector<double> bm_exact_distribution(const IsingModel& model, int max_modes) {
    model.validate();
    const int n = model.n();
    check_budget(n, max_modes);
    std::vector<double> logits(std::size_t{1} << n);
    std::vector<double> s(n);
    for (std::size_t x = 0; x < logits.size(); ++x) {
        for (int a = 0; a < n; ++a) s[a] = (x >> (n - 1 - a) & 1) ? 1.0 : -1.0;
        double e = 0.0;
        for (int a = 0; a < n; ++a) {
            e += model.h(a) * s[a];
            for (int b = a + 1; b < n; ++b) e += model.J(a, b) * s[a] * s[b];
        }
        logits[x] = e;
    }
    return normalize_logits(std::move(logits));
}

std::vector<double> bm_exact_distribution(const BoltzmannMachine& model, int max_modes) {
    model.validate();
    const int n = model.n;
    check_budget(n, max_modes);
    std::vector<std::pair<std::uint64_t, double>> features;
    for (const auto& [modes, lambda] : model.terms) {
        std::uint64_t mask = 0;
        for (int a : modes) mask |= std::uint64_t{1} << (n - 1 - a);
        features.emplace_back(mask, lambda);
    }
    std::vector<double> logits(std::size_t{1} << n, 0.0);
    for (std::size_t x = 0; x < logits.size(); ++x) {
        double e = 0.0;
        for (const auto& [mask, lambda] : features)
            if ((x & mask) == mask) e += lambda;
        logits[x] = e;
    }
    return normalize_logits(std::move(logits));
}

IsingModel fit_tap(const RealVector& means, const RealMatrix& covariance, const TapOptions& options,
                   TapDiagnostics* diagnostics) {
    const auto n = means.size();
    if (covariance.rows() != n || covariance.cols() != n) {
        throw DimensionError(fmt::format("covariance is {}x{}, expected {}x{}", covariance.rows(),
                                         covariance.cols(), n, n));
    }
    if (!means.allFinite() || !covariance.allFinite()) throw DomainError("TAP inputs must be finite");
    if ((covariance - covariance.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
        throw DomainError("spin covariance must be symmetric");
    }
    TapDiagnostics diag;

    RealVector m = means;
    const double lim = 1.0 - options.clamp;
    for (Eigen::Index a = 0; a < n; ++a) {
        if (m(a) > lim || m(a) < -lim) {
            m(a) = std::clamp(m(a), -lim, lim);
            ++diag.clamped_means;
        }
    }

    RealMatrix inv;
    Eigen::LLT<RealMatrix> llt(covariance);
    if (llt.info() == Eigen::Success) {
        inv = llt.solve(RealMatrix::Identity(n, n));
    } else {
        diag.ridge_used = true;
        RealMatrix ridged = covariance + options.ridge * RealMatrix::Identity(n, n);
        Eigen::LLT<RealMatrix> llt_ridge(ridged);
        if (llt_ridge.info() != Eigen::Success) {
            throw ConditioningError("spin covariance is not invertible even with ridge regularization");
        }
        inv = llt_ridge.solve(RealMatrix::Identity(n, n));
        warn(fmt::format("spin covariance regularized with ridge {:.1e} before inversion", options.ridge));
    }
    if (!inv.allFinite()) throw ConditioningError("inverse spin covariance is not finite");

    IsingModel model;
    model.h = RealVector::Zero(n);
    model.J = RealMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = a + 1; b < n; ++b) {
            const double c = 0.5 * (inv(a, b) + inv(b, a));
            const double disc = 1.0 - 8.0 * c * m(a) * m(b);
            double j;
            if (disc < 0.0) {
                j = -c;
                ++diag.fallback_pairs;
            } else {
                j = -2.0 * c / (1.0 + std::sqrt(disc));
            }
            model.J(a, b) = j;
            model.J(b, a) = j;
        }
    }
    if (diag.fallback_pairs > 0) {
        warn(fmt::format("TAP discriminant negative for {} pair(s); used naive mean-field couplings",
                         diag.fallback_pairs));
    }
    for (Eigen::Index a = 0; a < n; ++a) {
        double reaction = 0.0;
        double field = 0.0;
        for (Eigen::Index b = 0; b < n; ++b) {
            if (b == a) continue;
            const double j = model.J(a, b);
            reaction += j * j * (1.0 - m(b) * m(b));
            field += j * m(b);
        }
        const double onsager = options.onsager == OnsagerForm::Standard ? m(a) * reaction : -reaction;
        model.h(a) = std::atanh(m(a)) - field + onsager;
    }
    if (diagnostics) *diagnostics = diag;
    return model;
}

}  // namespace gbsmock
