#pragma once

#include "gbsmock/ising.hpp"
#include "gbsmock/probability.hpp"

namespace gbsmock {

enum class BmTrainMethod {
    /// Damped Newton steps on the dual (exact Hessian from enumeration).
    Newton,
    /// Plain gradient ascent with a fixed learning rate.
    Gradient,
};

struct BmTrainOptions {
    BmTrainMethod method = BmTrainMethod::Newton;
    int max_iterations = 200;
    double learning_rate = 1.0;
    /// Converged when max |model moment - target moment| falls below this.
    double tolerance = 1e-8;
    int max_modes = 12;
};

struct BmTrainResult {
    BoltzmannMachine model;
    int iterations = 0;
    double residual = 0.0;
};

/// Exact order-k maximum-entropy distribution matching the all-ones moments
/// F_alpha = P(z_a = 1 for all a in alpha) of every subset |alpha| <= k, by
/// exact enumeration of all 2^n strings. Throws ConvergenceError on budget exhaustion.
BmTrainResult train_exact_bm(const MarginalOracle& oracle, int n_modes, int order, const BmTrainOptions& options = {});

}  // namespace gbsmock
