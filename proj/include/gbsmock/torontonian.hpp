#pragma once

#include <cstdint>
#include <functional>

#include "gbsmock/types.hpp"

namespace gbsmock {

/// Calls visit(mask, log_det) for every subset Z of the m modes of a 2m x 2m
/// Hermitian positive-definite matrix b in doubled layout, where log_det is
/// log det(b_Z) (b_Z keeps rows/columns j and j+m for j in Z; bit j of mask is
/// mode j). The empty subset is visited with log_det = 0.
///
/// Subsets are walked depth first, appending one mode at a time, and the
/// Cholesky factor is extended by a 2x2 bordered update. Throws DomainError
/// naming the subset when a leading block is not positive definite.
void for_each_subset_log_det(const ComplexMatrix& b,
                             const std::function<void(std::uint64_t mask, double log_det)>& visit);

/// Threshold-detector Torontonian of a 2m x 2m matrix A:
///   Tor(A) = sum_{Z subset [m]} (-1)^(m - |Z|) / sqrt(det(I - A_Z)).
/// Every I - A_Z must be Hermitian positive definite. m = 0 gives 1.
double torontonian(const ComplexMatrix& a);

/// Same sum expressed through B = I - A, which is what callers holding
/// (sigma^-1)_S already have; avoids forming I - (I - B).
double torontonian_from_complement(const ComplexMatrix& b);

/// Largest click count handled by a single task; bigger sums are split into
/// 2^(m - kSerialClicks) independent prefix tasks (at most 256) reduced in
/// index order, so the result does not depend on the worker count.
inline constexpr int kSerialClicks = 12;

}  // namespace gbsmock
