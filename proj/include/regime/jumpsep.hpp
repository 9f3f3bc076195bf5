#pragma once

#include <cstddef>
#include <vector>

#include "regime/timeseries.hpp"

namespace regime {

// Calibrated split of a return series into diffusion and compound-Poisson
// jump parts.
struct JumpEstimates {
    double beta_hat = 0.0;    // diffusion volatility, per sqrt(year)
    double lambda_hat = 0.0;  // jump intensity, per year
    double v = 0.0;           // jump-size variance
    double c_hat = 0.0;       // return threshold
    std::vector<std::size_t> jump_indices;  // 0-based positions into r
    int iterations_used = 0;
    bool converged = false;
    // Set when SD^2 - lambda*delta*V went negative and beta was clamped to 0.
    bool radicand_clamped = false;
};

/// Jump threshold c = beta * sqrt(delta) * Phi^{-1}(1 - p_hat / 2).
double threshold(double beta_hat, double delta, double p_hat);

// Maximum-likelihood jump intensity jump_count / (n_steps * delta).
double mle_lambda(std::size_t jump_count, std::size_t n_steps, double delta);

// Indices i with |r(i) - rbar| > c_hat.
std::vector<std::size_t> detect_jumps(const ReturnSeries& ret, double c_hat);

/// Fixed-point iteration for (beta, lambda, V) starting from V = lambda = 0.
///
/// Each sweep takes beta from the variance left after the previous jump
/// estimate, recounts the jump set at the new threshold, and re-estimates V
/// from the jump residuals. Stops after max_iters sweeps or once all three
/// quantities move by less than 1e-10 relative. With fewer than two jumps V
/// is set to 0.
JumpEstimates estimate_jump_params(const ReturnSeries& ret, double p_hat, int max_iters = 20);

// Replaces returns with |r - rbar| > c_hat by rbar; recomputes rbar and sd.
ReturnSeries strip_jumps(const ReturnSeries& ret, double c_hat);

}  // namespace regime
