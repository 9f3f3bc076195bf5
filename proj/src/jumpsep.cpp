#include "regime/jumpsep.hpp"

#include <cmath>

#include "regime/errors.hpp"
#include "regime/numeric.hpp"

namespace regime {

double threshold(double beta_hat, double delta, double p_hat) {
    if (!(p_hat > 0.0 && p_hat < 1.0)) {
        throw ParameterError("threshold: p_hat must lie in (0, 1)");
    }
    if (beta_hat < 0.0 || !(delta > 0.0)) {
        throw ParameterError("threshold: requires beta_hat >= 0 and delta > 0");
    }
    return beta_hat * std::sqrt(delta) * numeric::normal_quantile(1.0 - p_hat / 2.0);
}

double mle_lambda(std::size_t jump_count, std::size_t n_steps, double delta) {
    if (n_steps == 0 || jump_count > n_steps || !(delta > 0.0)) {
        throw ParameterError("mle_lambda: requires 0 <= jump_count <= n_steps, n_steps > 0, delta > 0");
    }
    return static_cast<double>(jump_count) / (static_cast<double>(n_steps) * delta);
}

std::vector<std::size_t> detect_jumps(const ReturnSeries& ret, double c_hat) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < ret.r.size(); ++i) {
        if (std::abs(ret.r[i] - ret.rbar) > c_hat) idx.push_back(i);
    }
    return idx;
}

namespace {

bool close_rel(double a, double b, double tol) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 || std::abs(a - b) <= tol * scale;
}

}  // namespace

JumpEstimates estimate_jump_params(const ReturnSeries& ret, double p_hat, int max_iters) {
    if (max_iters < 1) throw ParameterError("estimate_jump_params: max_iters must be >= 1");
    if (ret.r.empty()) throw ParameterError("estimate_jump_params: empty return series");
    // Validates p_hat even on the degenerate path.
    const double z = numeric::normal_quantile(1.0 - p_hat / 2.0);

    JumpEstimates est;
    if (ret.sd == 0.0) {
        est.converged = true;
        return est;
    }

    const double delta = ret.delta;
    const double n = static_cast<double>(ret.r.size());
    const double sd2 = ret.sd * ret.sd;
    double lambda_prev = 0.0;
    double v_prev = 0.0;
    double beta_prev = -1.0;

    for (int k = 1; k <= max_iters; ++k) {
        const double radicand = sd2 - lambda_prev * delta * v_prev;
        double beta = 0.0;
        if (radicand < 0.0) {
            est.radicand_clamped = true;
        } else {
            beta = std::sqrt(radicand / delta);
        }
        const double c = beta * std::sqrt(delta) * z;
        auto idx = detect_jumps(ret, c);
        const double lambda = static_cast<double>(idx.size()) / (n * delta);
        double v = 0.0;
        if (idx.size() >= 2) {
            numeric::CompensatedSum acc;
            for (auto i : idx) {
                const double dev = ret.r[i] - ret.rbar;
                acc.add(dev * dev);
            }
            v = acc.value() / static_cast<double>(idx.size() - 1);
        }

        est.beta_hat = beta;
        est.c_hat = c;
        est.lambda_hat = lambda;
        est.v = v;
        est.jump_indices = std::move(idx);
        est.iterations_used = k;

        if (close_rel(beta, beta_prev, 1e-10) && close_rel(lambda, lambda_prev, 1e-10) &&
            close_rel(v, v_prev, 1e-10)) {
            est.converged = true;
            break;
        }
        beta_prev = beta;
        lambda_prev = lambda;
        v_prev = v;
    }
    if (est.radicand_clamped) est.converged = false;
    return est;
}

ReturnSeries strip_jumps(const ReturnSeries& ret, double c_hat) {
    if (c_hat < 0.0) throw ParameterError("strip_jumps: c_hat must be >= 0");
    std::vector<double> out(ret.r.size());
    for (std::size_t i = 0; i < ret.r.size(); ++i) {
        out[i] = std::abs(ret.r[i] - ret.rbar) > c_hat ? ret.rbar : ret.r[i];
    }
    return make_return_series(std::move(out), ret.delta);
}

}  // namespace regime
