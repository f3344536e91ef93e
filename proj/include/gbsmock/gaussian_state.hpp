#pragma once

#include <span>
#include <vector>

#include "gbsmock/instance.hpp"
#include "gbsmock/types.hpp"

namespace gbsmock {

/// Tolerances for the physicality checks run on every constructed state.
struct StateTolerance {
    double hermitian = 1e-10;
    double eigenvalue = 1e-9;  // eigenvalues of sigma must be >= 1/2 - eigenvalue
    double determinant = 1e-9; // det(sigma) must be >= 1 - determinant
};

/// Covariance matrix of an N-mode Gaussian state in the doubled basis where
/// mode j owns rows/columns j and j + N, normalized so that the vacuum is the
/// identity and the no-click probability is 1/sqrt(det sigma).
///
/// Immutable once built. The log-determinant and inverse are computed at
/// construction through a Cholesky factorization.
class GaussianState {
  public:
    /// Validates the physicality invariants and throws ConditioningError naming
    /// the first one that fails.
    static GaussianState from_sigma(ComplexMatrix sigma, const StateTolerance& tol = {});
    static GaussianState vacuum(int n_modes);

    int n_modes() const noexcept { return n_modes_; }
    const ComplexMatrix& sigma() const noexcept { return sigma_; }
    const ComplexMatrix& inverse() const noexcept { return inverse_; }
    double log_det() const noexcept { return log_det_; }

    /// Probability that no detector clicks.
    double vacuum_probability() const;

  private:
    GaussianState(ComplexMatrix sigma, ComplexMatrix inverse, double log_det);

    int n_modes_ = 0;
    ComplexMatrix sigma_;
    ComplexMatrix inverse_;
    double log_det_ = 0.0;
};

/// sigma_in = S (I/2) S^dagger for K input modes. S has the block layout
/// [Ch | Sh; Sh | Ch] with Ch = diag(cosh r) and Sh = diag(sinh r), where input
/// modes 2m and 2m+1 share squeezing[m].
ComplexMatrix build_input_covariance(std::span<const double> squeezing, int n_input);

/// sigma = I - D D^dagger / 2 + D sigma_in D^dagger with D = diag(T, conj(T)).
GaussianState build_output_covariance(const GBSInstance& instance);

/// Reduced state on `modes` (0-based, distinct, in the given order).
GaussianState reduce_state(const GaussianState& state, std::span<const int> modes);

/// Rows/columns {j, j+n : j in modes} of a doubled-basis matrix with n modes.
ComplexMatrix doubled_submatrix(const ComplexMatrix& m, int n_modes, std::span<const int> modes);

/// log det of a Hermitian positive-definite matrix. Throws ConditioningError
/// when the Cholesky factorization fails. Empty matrices give 0.
double hermitian_log_det(const ComplexMatrix& m);

/// Throws IndexError unless `modes` are distinct and within [0, n_modes).
void check_modes(std::span<const int> modes, int n_modes);

}  // namespace gbsmock
