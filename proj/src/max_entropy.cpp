#include "gbsmock/max_entropy.hpp"

#include <cmath>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "summation.hpp"

namespace gbsmock {

namespace {

struct Feature {
    ModeList modes;
    std::uint64_t mask = 0;
    double target = 0.0;
};

void add_subsets(int n, int r, int start, ModeList& cur, std::vector<ModeList>& out) {
    if (static_cast<int>(cur.size()) == r) {
        out.push_back(cur);
        return;
    }
    for (int a = start; a < n; ++a) {
        cur.push_back(a);
        add_subsets(n, r, a + 1, cur, out);
        cur.pop_back();
    }
}

class Enumerator {
  public:
    Enumerator(int n, const std::vector<Feature>& features) : n_(n), features_(features) {
        const std::size_t states = std::size_t{1} << n;
        active_.resize(states);
        for (std::size_t x = 0; x < states; ++x) {
            for (std::size_t f = 0; f < features.size(); ++f)
                if ((x & features[f].mask) == features[f].mask) active_[x].push_back(static_cast<int>(f));
        }
        probs_.resize(states);
    }

    // Returns log Z and fills probabilities.
    double evaluate(const Eigen::VectorXd& lambda) {
        double top = -INFINITY;
        for (std::size_t x = 0; x < probs_.size(); ++x) {
            double e = 0.0;
            for (int f : active_[x]) e += lambda(f);
            probs_[x] = e;
            top = std::max(top, e);
        }
        PairwiseSum z;
        for (double& p : probs_) {
            p = std::exp(p - top);
            z.add(p);
        }
        const double total = z.total();
        for (double& p : probs_) p /= total;
        return top + std::log(total);
    }

    Eigen::VectorXd moments() const {
        Eigen::VectorXd m = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(features_.size()));
        for (std::size_t x = 0; x < probs_.size(); ++x)
            for (int f : active_[x]) m(f) += probs_[x];
        return m;
    }

    Eigen::MatrixXd covariance(const Eigen::VectorXd& mean) const {
        const auto nf = static_cast<Eigen::Index>(features_.size());
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(nf, nf);
        for (std::size_t x = 0; x < probs_.size(); ++x) {
            const auto& act = active_[x];
            for (std::size_t u = 0; u < act.size(); ++u)
                for (std::size_t v = 0; v <= u; ++v) h(act[u], act[v]) += probs_[x];
        }
        h = h.selfadjointView<Eigen::Lower>();
        h -= mean * mean.transpose();
        return h;
    }

  private:
    int n_;
    const std::vector<Feature>& features_;
    std::vector<std::vector<int>> active_;
    std::vector<double> probs_;
};

}  // namespace

BmTrainResult train_exact_bm(const MarginalOracle& oracle, int n_modes, int order, const BmTrainOptions& options) {
    if (n_modes < 1) throw DimensionError("need at least one mode");
    if (n_modes > options.max_modes || n_modes > 24) {
        throw BudgetError(fmt::format("exact BM training over {} modes exceeds the budget of {}", n_modes,
                                      options.max_modes));
    }
    if (order < 1 || order > n_modes) throw DomainError(fmt::format("invalid BM order {}", order));

    std::vector<Feature> features;
    for (int r = 1; r <= order; ++r) {
        std::vector<ModeList> subsets;
        ModeList cur;
        add_subsets(n_modes, r, 0, cur, subsets);
        for (auto& s : subsets) {
            Feature f;
            for (int a : s) f.mask |= std::uint64_t{1} << (n_modes - 1 - a);
            f.target = oracle(s).all_ones();
            f.modes = std::move(s);
            features.push_back(std::move(f));
        }
    }
    const auto nf = static_cast<Eigen::Index>(features.size());
    Eigen::VectorXd target(nf);
    for (Eigen::Index f = 0; f < nf; ++f) target(f) = features[f].target;

    // Start from the independent solution.
    Eigen::VectorXd lambda = Eigen::VectorXd::Zero(nf);
    for (Eigen::Index f = 0; f < nf; ++f) {
        if (features[f].modes.size() == 1) {
            const double p = std::clamp(target(f), 1e-12, 1.0 - 1e-12);
            lambda(f) = std::log(p / (1.0 - p));
        }
    }

    Enumerator en(n_modes, features);
    double log_z = en.evaluate(lambda);
    Eigen::VectorXd mom = en.moments();
    double residual = (mom - target).cwiseAbs().maxCoeff();
    int it = 0;
    while (residual >= options.tolerance) {
        if (it == options.max_iterations) {
            throw ConvergenceError(fmt::format("BM training did not converge in {} iterations (residual {:.3e})",
                                               options.max_iterations, residual),
                                   residual);
        }
        ++it;
        const Eigen::VectorXd grad = target - mom;
        if (options.method == BmTrainMethod::Gradient) {
            lambda += options.learning_rate * grad;
            log_z = en.evaluate(lambda);
        } else {
            Eigen::MatrixXd hess = en.covariance(mom);
            hess.diagonal().array() += 1e-12;
            const Eigen::VectorXd step = hess.ldlt().solve(grad);
            // Backtracking on the concave dual  lambda.F - log Z.
            const double dual = lambda.dot(target) - log_z;
            double t = 1.0;
            while (true) {
                Eigen::VectorXd trial = lambda + t * step;
                const double lz = en.evaluate(trial);
                if (trial.dot(target) - lz >= dual - 1e-15 || t < 1e-10) {
                    lambda = std::move(trial);
                    log_z = lz;
                    break;
                }
                t *= 0.5;
            }
        }
        mom = en.moments();
        residual = (mom - target).cwiseAbs().maxCoeff();
    }

    BmTrainResult result;
    result.model.n = n_modes;
    for (Eigen::Index f = 0; f < nf; ++f) result.model.terms[features[f].modes] = lambda(f);
    result.iterations = it;
    result.residual = residual;
    return result;
}

}  // namespace gbsmock
