#include "gbsmock/gaussian_state.hpp"

#include <cmath>

#include <fmt/core.h>

#include "gbsmock/errors.hpp"

namespace gbsmock {

namespace {

double max_abs(const ComplexMatrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

void check_invariants(const ComplexMatrix& sigma, const StateTolerance& tol) {
    const Eigen::Index two_n = sigma.rows();
    if (sigma.cols() != two_n || two_n % 2 != 0) {
        throw DimensionError(fmt::format("covariance matrix must be square with even size, got {}x{}",
                                         sigma.rows(), sigma.cols()));
    }
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) {
        for (Eigen::Index j = 0; j < sigma.cols(); ++j) {
            if (!std::isfinite(sigma(i, j).real()) || !std::isfinite(sigma(i, j).imag())) {
                throw ConditioningError(fmt::format("covariance entry ({}, {}) is not finite", i, j));
            }
        }
    }
    const Eigen::Index n = two_n / 2;
    double herm = max_abs(sigma - sigma.adjoint());
    if (herm > tol.hermitian) {
        throw ConditioningError(fmt::format("covariance is not Hermitian (max deviation {:.3g})", herm));
    }
    double block = std::max(max_abs(sigma.bottomRightCorner(n, n) - sigma.topLeftCorner(n, n).conjugate()),
                            max_abs(sigma.bottomLeftCorner(n, n) - sigma.topRightCorner(n, n).conjugate()));
    if (block > tol.hermitian) {
        throw ConditioningError(
            fmt::format("covariance violates the conjugate-block structure (max deviation {:.3g})", block));
    }
    if (n == 0) return;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(sigma, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) {
        throw ConditioningError("eigenvalue decomposition of the covariance failed");
    }
    double lowest = eig.eigenvalues()(0);
    if (lowest < 0.5 - tol.eigenvalue) {
        throw ConditioningError(
            fmt::format("covariance minus I/2 is not positive semidefinite (smallest eigenvalue {:.17g})", lowest));
    }
}

}  // namespace

double hermitian_log_det(const ComplexMatrix& m) {
    if (m.rows() == 0) return 0.0;
    Eigen::LLT<ComplexMatrix> llt(m);
    if (llt.info() != Eigen::Success) {
        throw ConditioningError("Cholesky factorization failed: matrix is not positive definite");
    }
    double s = 0.0;
    const auto& l = llt.matrixLLT();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        double d = l(i, i).real();
        if (!(d > 0.0)) throw ConditioningError("Cholesky factor has a non-positive diagonal");
        s += std::log(d);
    }
    return 2.0 * s;
}

void check_modes(std::span<const int> modes, int n_modes) {
    std::vector<char> seen(static_cast<std::size_t>(std::max(n_modes, 0)), 0);
    for (int m : modes) {
        if (m < 0 || m >= n_modes) {
            throw IndexError(fmt::format("mode index {} out of range [0, {})", m, n_modes));
        }
        if (seen[m]) throw IndexError(fmt::format("mode index {} appears more than once", m));
        seen[m] = 1;
    }
}

ComplexMatrix doubled_submatrix(const ComplexMatrix& m, int n_modes, std::span<const int> modes) {
    const auto k = static_cast<Eigen::Index>(modes.size());
    std::vector<Eigen::Index> idx(2 * modes.size());
    for (Eigen::Index a = 0; a < k; ++a) {
        idx[a] = modes[a];
        idx[a + k] = modes[a] + n_modes;
    }
    ComplexMatrix out(2 * k, 2 * k);
    for (Eigen::Index i = 0; i < 2 * k; ++i)
        for (Eigen::Index j = 0; j < 2 * k; ++j) out(i, j) = m(idx[i], idx[j]);
    return out;
}

GaussianState::GaussianState(ComplexMatrix sigma, ComplexMatrix inverse, double log_det)
    : n_modes_(static_cast<int>(sigma.rows() / 2)),
      sigma_(std::move(sigma)),
      inverse_(std::move(inverse)),
      log_det_(log_det) {}

GaussianState GaussianState::from_sigma(ComplexMatrix sigma, const StateTolerance& tol) {
    check_invariants(sigma, tol);
    if (sigma.rows() == 0) return GaussianState(std::move(sigma), ComplexMatrix(0, 0), 0.0);
    Eigen::LLT<ComplexMatrix> llt(sigma);
    if (llt.info() != Eigen::Success) {
        throw ConditioningError("covariance is not positive definite (Cholesky failed)");
    }
    double log_det = 0.0;
    for (Eigen::Index i = 0; i < sigma.rows(); ++i) log_det += 2.0 * std::log(llt.matrixLLT()(i, i).real());
    if (log_det < std::log1p(-tol.determinant)) {
        throw ConditioningError(fmt::format("det(sigma) = {:.17g} is below 1", std::exp(log_det)));
    }
    ComplexMatrix inverse = llt.solve(ComplexMatrix::Identity(sigma.rows(), sigma.cols()));
    inverse = (0.5 * (inverse + inverse.adjoint())).eval();
    return GaussianState(std::move(sigma), std::move(inverse), log_det);
}

GaussianState GaussianState::vacuum(int n_modes) {
    if (n_modes < 0) throw DimensionError("negative mode count");
    return from_sigma(ComplexMatrix::Identity(2 * n_modes, 2 * n_modes));
}

double GaussianState::vacuum_probability() const { return std::exp(-0.5 * log_det_); }

ComplexMatrix build_input_covariance(std::span<const double> squeezing, int n_input) {
    if (n_input < 0 || n_input % 2 != 0) {
        throw DimensionError(fmt::format("n_input must be even, got {}", n_input));
    }
    if (squeezing.size() != static_cast<std::size_t>(n_input / 2)) {
        throw DimensionError(
            fmt::format("squeezing has {} entries, expected {}", squeezing.size(), n_input / 2));
    }
    for (std::size_t i = 0; i < squeezing.size(); ++i) {
        if (!std::isfinite(squeezing[i]) || squeezing[i] < 0.0) {
            throw DomainError(fmt::format("squeezing[{}] = {} must be finite and non-negative", i, squeezing[i]));
        }
    }
    const int k = n_input;
    ComplexMatrix s = ComplexMatrix::Zero(2 * k, 2 * k);
    for (int j = 0; j < k; ++j) {
        double r = squeezing[j / 2];
        s(j, j) = std::cosh(r);
        s(j + k, j + k) = std::cosh(r);
        s(j, j + k) = std::sinh(r);
        s(j + k, j) = std::sinh(r);
    }
    return 0.5 * s * s.adjoint();
}

GaussianState build_output_covariance(const GBSInstance& instance) {
    validate(instance);
    const int n = instance.n_output;
    const int k = instance.n_input;
    ComplexMatrix sigma_in = build_input_covariance(instance.squeezing, k);

    ComplexMatrix d = ComplexMatrix::Zero(2 * n, 2 * k);
    d.topLeftCorner(n, k) = instance.transformation;
    d.bottomRightCorner(n, k) = instance.transformation.conjugate();

    // I - D D^dag/2 + D sigma_in D^dag, grouped so that zero squeezing gives
    // exactly the identity.
    ComplexMatrix excess = sigma_in - 0.5 * ComplexMatrix::Identity(2 * k, 2 * k);
    ComplexMatrix sigma = ComplexMatrix::Identity(2 * n, 2 * n) + d * excess * d.adjoint();
    return GaussianState::from_sigma(std::move(sigma));
}

GaussianState reduce_state(const GaussianState& state, std::span<const int> modes) {
    check_modes(modes, state.n_modes());
    return GaussianState::from_sigma(doubled_submatrix(state.sigma(), state.n_modes(), modes));
}

}  // namespace gbsmock
