#pragma once

#include <vector>

#include "gbsmock/types.hpp"

namespace gbsmock {

/// Interferometer description of a GBS experiment: N output modes fed by K
/// input modes, K/2 squeezing parameters (one per pair of inputs) and the
/// lossy N x K transformation matrix.
struct GBSInstance {
    int n_output = 0;
    int n_input = 0;
    std::vector<double> squeezing;
    ComplexMatrix transformation;
};

/// Largest singular value accepted for T. Values in (1, kMaxSingularValue] are
/// accepted with a warning (round-off in published matrices).
inline constexpr double kMaxSingularValue = 1.0 + 1e-8;

/// Throws DimensionError / DomainError / ConditioningError naming the violated invariant.
void validate(const GBSInstance& instance);

/// Largest singular value of the transformation matrix.
double max_singular_value(const ComplexMatrix& transformation);

/// Random instance for tests and desk-scale studies: T is sqrt(transmission)
/// times an N x K block of a Haar-random unitary, squeezing drawn uniformly
/// from [r_min, r_max].
GBSInstance random_instance(int n_output, int n_input, std::uint64_t seed, double transmission = 0.8,
                            double r_min = 0.6, double r_max = 1.4);

/// Haar-random unitary of size n (QR of a complex Gaussian matrix with phase fix).
ComplexMatrix haar_unitary(int n, std::uint64_t seed);

}  // namespace gbsmock
