#include "gbsmock/instance.hpp"

#include <cmath>
#include <random>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"
#include "gbsmock/log.hpp"
#include "gbsmock/rng.hpp"

namespace gbsmock {

double max_singular_value(const ComplexMatrix& transformation) {
    if (transformation.size() == 0) return 0.0;
    Eigen::BDCSVD<ComplexMatrix> svd(transformation);
    return svd.singularValues()(0);
}

void validate(const GBSInstance& instance) {
    const int n = instance.n_output;
    const int k = instance.n_input;
    if (n <= 0) throw DimensionError(fmt::format("n_output must be positive, got {}", n));
    if (k <= 0 || k % 2 != 0) {
        throw DimensionError(fmt::format("n_input must be a positive even integer, got {}", k));
    }
    if (instance.squeezing.size() != static_cast<std::size_t>(k / 2)) {
        throw DimensionError(fmt::format("squeezing has {} entries, expected n_input/2 = {}",
                                         instance.squeezing.size(), k / 2));
    }
    for (std::size_t i = 0; i < instance.squeezing.size(); ++i) {
        double r = instance.squeezing[i];
        if (!std::isfinite(r) || r < 0.0) {
            throw DomainError(fmt::format("squeezing[{}] = {} must be finite and non-negative", i, r));
        }
    }
    const auto& t = instance.transformation;
    if (t.rows() != n || t.cols() != k) {
        throw DimensionError(fmt::format("transformation is {}x{}, expected {}x{}", t.rows(), t.cols(), n, k));
    }
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
        for (Eigen::Index j = 0; j < t.cols(); ++j) {
            if (!std::isfinite(t(i, j).real()) || !std::isfinite(t(i, j).imag())) {
                throw DomainError(fmt::format("transformation({}, {}) is not finite", i, j));
            }
        }
    }
    double smax = max_singular_value(t);
    if (smax > kMaxSingularValue) {
        throw ConditioningError(fmt::format(
            "transformation is not sub-unitary: largest singular value {:.17g} exceeds 1 + 1e-8", smax));
    }
    if (smax > 1.0) {
        warn(fmt::format("transformation largest singular value {:.17g} is above 1 (accepted as round-off)", smax));
    }
}

ComplexMatrix haar_unitary(int n, std::uint64_t seed) {
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = Complex(normal(rng), normal(rng)) / std::sqrt(2.0);
    Eigen::HouseholderQR<ComplexMatrix> qr(z);
    ComplexMatrix q = qr.householderQ();
    ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < n; ++j) {
        Complex d = r(j, j);
        double mag = std::abs(d);
        q.col(j) *= (mag > 0 ? d / mag : Complex(1.0));
    }
    return q;
}

GBSInstance random_instance(int n_output, int n_input, std::uint64_t seed, double transmission,
                            double r_min, double r_max) {
    if (n_input <= 0 || n_input % 2 != 0) {
        throw DimensionError(fmt::format("n_input must be a positive even integer, got {}", n_input));
    }
    if (!(transmission >= 0.0 && transmission <= 1.0)) {
        throw DomainError(fmt::format("transmission {} outside [0, 1]", transmission));
    }
    int m = std::max(n_output, n_input);
    ComplexMatrix u = haar_unitary(m, derive_seed(seed, "haar"));
    GBSInstance inst;
    inst.n_output = n_output;
    inst.n_input = n_input;
    inst.transformation = std::sqrt(transmission) * u.topLeftCorner(n_output, n_input);
    Rng rng(derive_seed(seed, "squeezing"));
    inst.squeezing.resize(n_input / 2);
    for (auto& r : inst.squeezing) r = r_min + (r_max - r_min) * uniform01(rng);
    return inst;
}

}  // namespace gbsmock
