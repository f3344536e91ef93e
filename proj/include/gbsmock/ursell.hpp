#pragma once

#include <span>

#include "gbsmock/probability.hpp"
#include "gbsmock/sample_set.hpp"

namespace gbsmock {

struct UrsellValue {
    ModeList modes;
    int order = 0;
    double value = 0.0;
};

/// Connected correlation from the partition recursion
///   d(U) = E[prod_{a in U} z_a] - sum over partitions of U with more than one block
///          of prod_B dbar(B),
/// where dbar(B) is d(B) for |B| > 1 and E[z_a] for singletons. Order-1 values
/// are reported shifted as E[z] - 1/2. Throws BudgetError above max_order modes.
UrsellValue ursell(const MarginalTable& table, int max_order = 8);

/// Unshifted recursion value (order 1 gives E[z]).
double ursell_unshifted(const MarginalTable& table, int max_order = 8);

/// Mixed partial derivative of log E[exp(sum r_i z_i)] at r = 0 by central
/// finite differences with one Richardson level. Order 1 is E[z], unshifted.
UrsellValue ursell_mgf(const MarginalTable& table);

/// Finite-difference step used by ursell_mgf for a k-mode table.
double ursell_mgf_step(int order);

/// ursell() on the empirical table of `modes`.
UrsellValue ursell_empirical(const SampleSet& samples, std::span<const int> modes, int max_order = 8);

}  // namespace gbsmock
