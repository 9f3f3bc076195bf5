#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "regime/errors.hpp"
#include "regime/jumpsep.hpp"
#include "regime/simulate.hpp"

using namespace regime;

namespace {

constexpr double kDelta = 5.0 / (250.0 * 360.0);

ReturnSeries returns_of(const SimPath& path) {
    std::vector<double> r(path.prices.size() - 1);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = path.prices[i + 1] / path.prices[i] - 1.0;
    return make_return_series(std::move(r), path.delta);
}

}  // namespace

TEST_CASE("threshold") {
    CHECK(threshold(0.0, kDelta, 2e-4) == 0.0);
    CHECK(threshold(0.0784, 5.5556e-5, 2e-4) == doctest::Approx(2.1733e-3).epsilon(1e-4));
    CHECK(threshold(1.0, 1.0, 0.5) == doctest::Approx(0.6744898).epsilon(1e-7));
    CHECK_THROWS_AS(threshold(1.0, 1.0, 0.0), ParameterError);
    CHECK_THROWS_AS(threshold(1.0, 1.0, 1.0), ParameterError);
}

TEST_CASE("mle_lambda matches likelihood grid") {
    CHECK(mle_lambda(0, 100, 0.01) == 0.0);
    double step = 0.0;
    const double g1 = oracle::mle_grid(70, 18000, 5.5556e-5, 200.0, 20000, &step);
    CHECK(std::abs(mle_lambda(70, 18000, 5.5556e-5) - g1) <= step);
    CHECK(mle_lambda(70, 18000, 5.5556e-5) == doctest::Approx(70.0).epsilon(1e-4));
    const double g2 = oracle::mle_grid(3, 1000, 0.001, 10.0, 10000, &step);
    CHECK(std::abs(mle_lambda(3, 1000, 0.001) - g2) <= step);
    CHECK(mle_lambda(3, 1000, 0.001) == doctest::Approx(3.0));
    CHECK_THROWS_AS(mle_lambda(5, 4, 0.1), ParameterError);
}

TEST_CASE("estimate_jump_params on constant prices") {
    const auto ret = make_return_series(std::vector<double>(50, 0.0), kDelta);
    const auto est = estimate_jump_params(ret, 2e-4);
    CHECK(est.beta_hat == 0.0);
    CHECK(est.lambda_hat == 0.0);
    CHECK(est.v == 0.0);
    CHECK(est.c_hat == 0.0);
    CHECK(est.jump_indices.empty());
    CHECK_THROWS_AS(estimate_jump_params(ret, 0.0), ParameterError);
}

TEST_CASE("false-flag rate on pure diffusion") {
    // Under the null every return crosses the threshold with probability
    // p_hat, so lambda_hat averages p_hat / delta = 3.6 per year.
    const double beta = 0.08;
    double lam_sum = 0.0;
    int beta_ok = 0;
    const int seeds = 50;
    for (int s = 0; s < seeds; ++s) {
        const auto path = simulate_gbm({0.0, beta, false}, 36000, kDelta, 100.0,
                                       {static_cast<std::uint64_t>(1000 + s), 0, 0});
        const auto est = estimate_jump_params(returns_of(path), 2e-4);
        lam_sum += est.lambda_hat;
        beta_ok += std::abs(est.beta_hat / beta - 1.0) <= 0.03 ? 1 : 0;
        CHECK(est.iterations_used <= 20);
    }
    CHECK(lam_sum / seeds == doctest::Approx(2e-4 / kDelta).epsilon(0.2));
    CHECK(beta_ok == seeds);
}

TEST_CASE("well separated jumps are recovered") {
    // Two-point jumps of 1e-2 sit far above the ~2.2e-3 threshold, so the
    // fixed point recovers all three parameters.
    const double beta = 0.08, lambda = 120.0, v = 1e-4;
    int ok = 0;
    for (int s = 0; s < 10; ++s) {
        const auto path = simulate_jump_diffusion({0.0, beta, false}, lambda, v, 36000, kDelta, 100.0,
                                                  {static_cast<std::uint64_t>(77 + s), 0, 0},
                                                  JumpSizeLaw::symmetric_two_point);
        const auto est = estimate_jump_params(returns_of(path), 2e-4);
        const bool good = std::abs(est.beta_hat / beta - 1) <= 0.05 &&
                          std::abs(est.lambda_hat / lambda - 1) <= 0.2 &&
                          std::abs(est.v / v - 1) <= 0.25;
        ok += good ? 1 : 0;
    }
    CHECK(ok >= 9);
}

TEST_CASE("strip_jumps") {
    const auto ret = make_return_series({0.1, 0.0, -0.2}, 1.0);
    CHECK(ret.rbar == doctest::Approx(-0.1 / 3));
    const auto out = strip_jumps(ret, 0.1);
    CHECK(out.r[0] == ret.rbar);
    CHECK(out.r[1] == 0.0);
    CHECK(out.r[2] == ret.rbar);

    const auto same = strip_jumps(ret, 1.0);
    CHECK(same.r == ret.r);

    const auto flat = strip_jumps(ret, 0.0);
    for (double x : flat.r) CHECK(x == ret.rbar);
}
