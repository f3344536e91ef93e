#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "gbsmock/types.hpp"

namespace gbsmock {

/// Fully connected Ising model over spins s in {-1, +1}:
///   p(s) ~ exp(sum_a h_a s_a + sum_{a<b} J_ab s_a s_b).
/// J is symmetric with a zero diagonal.
struct IsingModel {
    RealVector h;
    RealMatrix J;

    int n() const noexcept { return static_cast<int>(h.size()); }
    /// Throws DimensionError / DomainError when the invariants fail.
    void validate() const;
};

/// Boltzmann machine over bits z in {0, 1} with interaction terms on mode
/// subsets: p(z) ~ exp(sum_alpha lambda_alpha prod_{a in alpha} z_a).
/// Keys are sorted, non-empty, duplicate-free 0-based mode lists.
struct BoltzmannMachine {
    int n = 0;
    std::map<ModeList, double> terms;

    void validate() const;
    /// Highest interaction order present.
    int order() const;
};

/// Rewrites an Ising model with z = (s + 1) / 2 (the additive constant drops out).
BoltzmannMachine to_boltzmann_machine(const IsingModel& model);

/// Exact normalized distribution over all 2^n bit strings, mode 0 the most
/// significant bit (bit 1 <-> spin +1). Throws BudgetError when n > max_modes.
std::vector<double> bm_exact_distribution(const IsingModel& model, int max_modes = 24);
std::vector<double> bm_exact_distribution(const BoltzmannMachine& model, int max_modes = 24);

/// How the Onsager reaction term enters the TAP fields.
enum class OnsagerForm {
    /// h_a = atanh(m_a) - sum_b J_ab m_b + m_a sum_b J_ab^2 (1 - m_b^2)
    Standard,
    /// h_a = atanh(m_a) - sum_b J_ab m_b - sum_b J_ab^2 (1 - m_b^2)
    Negative,
};

struct TapOptions {
    /// Magnetizations are clamped to [-1 + clamp, 1 - clamp].
    double clamp = 1e-12;
    /// Ridge added to C when the plain Cholesky factorization fails.
    double ridge = 1e-10;
    OnsagerForm onsager = OnsagerForm::Standard;
};

struct TapDiagnostics {
    /// Pairs where 1 - 8 (C^-1)_ab m_a m_b < 0 and the naive mean-field coupling was used.
    int fallback_pairs = 0;
    bool ridge_used = false;
    int clamped_means = 0;
};

/// Inverse Ising by the TAP mean-field equations from spin means and covariance:
///   J_ab = -2 (C^-1)_ab / (1 + sqrt(1 - 8 (C^-1)_ab m_a m_b))
/// with the fields given by `options.onsager`.
IsingModel fit_tap(const RealVector& means, const RealMatrix& covariance, const TapOptions& options = {},
                   TapDiagnostics* diagnostics = nullptr);

}  // namespace gbsmock
