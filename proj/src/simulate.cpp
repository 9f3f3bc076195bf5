#include "regime/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "regime/errors.hpp"

namespace regime {

namespace {

void check_common(std::size_t n_steps, double delta, double s0) {
    if (n_steps == 0) throw ParameterError("simulate: n_steps must be positive");
    if (!(delta > 0.0)) throw ParameterError("simulate: delta must be positive");
    if (!(s0 > 0.0)) throw ParameterError("simulate: s0 must be positive");
}

// Long-run fraction of time in state 1 from the two mean sojourns.
double occupation_state1(double mean1, double mean2) {
    return mean1 / (mean1 + mean2);
}

std::uint8_t draw_initial(InitialRegime x0, double p1, const SeedSpec& seed) {
    switch (x0) {
        case InitialRegime::state1: return 1;
        case InitialRegime::state2: return 2;
        case InitialRegime::stationary: break;
    }
    PhiloxStream init(seed, Substream::initial);
    return init.uniform() < p1 ? 1 : 2;
}

std::uint8_t flip(std::uint8_t x) {
    return x == 1 ? 2 : 1;
}

struct TwoStateCoefficients {
    double drift[2];  // (mu - sigma^2/2) delta
    double scale[2];  // sigma sqrt(delta)
};

TwoStateCoefficients coefficients(double mu1, double sigma1, double mu2, double sigma2,
                                  double delta) {
    const double sd = std::sqrt(delta);
    return {{(mu1 - 0.5 * sigma1 * sigma1) * delta, (mu2 - 0.5 * sigma2 * sigma2) * delta},
            {sigma1 * sd, sigma2 * sd}};
}

void check_rates(double rate_max, double delta, SimPath& path) {
    if (rate_max * delta >= 1.0) {
        throw ParameterError("simulate: lambda_max * delta must be < 1");
    }
    if (rate_max * delta > 0.1) {
        char buf[128];
        std::snprintf(buf, sizeof buf,
                      "lambda_max * delta = %.3g exceeds 0.1; switching discretisation is coarse",
                      rate_max * delta);
        path.warnings.emplace_back(buf);
    }
}

}  // namespace

SimPath simulate_gbm(const UniRegimeParams& params, std::size_t n_steps, double delta, double s0,
                     const SeedSpec& seed) {
    return simulate_jump_diffusion(params, 0.0, 0.0, n_steps, delta, s0, seed);
}

SimPath simulate_jump_diffusion(const UniRegimeParams& params, double lambda, double v,
                                std::size_t n_steps, double delta, double s0, const SeedSpec& seed,
                                JumpSizeLaw law) {
    check_common(n_steps, delta, s0);
    if (params.beta < 0.0) throw ParameterError("simulate: beta must be >= 0");
    if (lambda < 0.0 || v < 0.0) throw ParameterError("simulate: lambda and v must be >= 0");
    if (law == JumpSizeLaw::symmetric_two_point && v >= 1.0) {
        throw ParameterError("simulate: two-point jumps need v < 1 to keep prices positive");
    }

    PhiloxStream diffusion(seed, Substream::diffusion);
    PhiloxStream jumps(seed, Substream::jumps);
    // One distribution per stream: normal_distribution caches a spare
    // variate, which would otherwise leak jump draws into the diffusion.
    std::normal_distribution<double> normal;
    std::normal_distribution<double> jump_normal;

    const double drift = (params.mu - 0.5 * params.beta * params.beta) * delta;
    const double scale = params.beta * std::sqrt(delta);
    const double jump_mean = lambda * delta;
    const bool bernoulli = jump_mean <= 0.01;
    std::poisson_distribution<int> poisson(jump_mean > 0.0 ? jump_mean : 1.0);
    const double s2 = std::log1p(v);
    const double s = std::sqrt(s2);
    const double two_point = std::sqrt(v);

    SimPath path;
    path.delta = delta;
    path.prices.resize(n_steps + 1);
    path.prices[0] = s0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        double price = path.prices[i] * std::exp(drift + scale * normal(diffusion));
        if (jump_mean > 0.0) {
            const int count = bernoulli ? (jumps.uniform() < jump_mean ? 1 : 0) : poisson(jumps);
            for (int c = 0; c < count; ++c) {
                double xi = 0.0;
                if (law == JumpSizeLaw::lognormal) {
                    xi = std::expm1(-0.5 * s2 + s * jump_normal(jumps));
                } else {
                    xi = jumps.uniform() < 0.5 ? -two_point : two_point;
                }
                price *= 1.0 + xi;
                path.jumps.push_back({i + 1, xi});
            }
        }
        path.prices[i + 1] = price;
    }
    return path;
}

SimPath simulate_markov_glp(const MarkovRegimeParams& params, std::size_t n_steps, double delta,
                            double s0, InitialRegime x0, const SeedSpec& seed) {
    check_common(n_steps, delta, s0);
    if (!(params.lambda1 > 0.0) || !(params.lambda2 > 0.0)) {
        throw ParameterError("simulate: switching rates must be positive");
    }
    SimPath path;
    path.delta = delta;
    check_rates(std::max(params.lambda1, params.lambda2), delta, path);

    const auto coef = coefficients(params.mu1, params.sigma1, params.mu2, params.sigma2, delta);
    const double flip_prob[2] = {params.lambda1 * delta, params.lambda2 * delta};
    PhiloxStream diffusion(seed, Substream::diffusion);
    PhiloxStream switching(seed, Substream::switching);
    std::normal_distribution<double> normal;

    path.prices.resize(n_steps + 1);
    path.regimes.resize(n_steps + 1);
    path.prices[0] = s0;
    std::uint8_t x =
        draw_initial(x0, occupation_state1(1.0 / params.lambda1, 1.0 / params.lambda2), seed);
    path.regimes[0] = x;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const int s = x - 1;
        path.prices[i + 1] = path.prices[i] * std::exp(coef.drift[s] + coef.scale[s] * normal(diffusion));
        if (switching.uniform() < flip_prob[s]) x = flip(x);
        path.regimes[i + 1] = x;
    }
    return path;
}

SimPath simulate_semimarkov_glp(const SemiMarkovRegimeParams& params, std::size_t n_steps,
                                double delta, double s0, InitialRegime x0, const SeedSpec& seed) {
    check_common(n_steps, delta, s0);
    if (!(params.lambda1 > 0.0) || !(params.lambda2 > 0.0) || !(params.k1 > 0.0) ||
        !(params.k2 > 0.0)) {
        throw ParameterError("simulate: gamma rates and shapes must be positive");
    }
    SimPath path;
    path.delta = delta;

    const auto coef = coefficients(params.mu1, params.sigma1, params.mu2, params.sigma2, delta);
    const double rate[2] = {params.lambda1, params.lambda2};
    const double shape[2] = {params.k1, params.k2};
    // Switch probability by state and age in whole steps. Ages are always
    // multiples of delta, so the hazard is tabulated lazily.
    std::vector<double> table[2];
    double worst = 0.0;
    auto switch_prob = [&](int s, std::size_t age_steps) {
        auto& tab = table[s];
        while (tab.size() <= age_steps) {
            const std::size_t j = tab.size();
            double y = static_cast<double>(j) * delta;
            if (j == 0 && shape[s] < 1.0) y = 0.5 * delta;
            const double h = gamma_hazard(y, shape[s], rate[s]);
            worst = std::max(worst, h);
            tab.push_back(std::clamp(h * delta, 0.0, 1.0));
        }
        return tab[age_steps];
    };

    PhiloxStream diffusion(seed, Substream::diffusion);
    PhiloxStream switching(seed, Substream::switching);
    std::normal_distribution<double> normal;

    path.prices.resize(n_steps + 1);
    path.regimes.resize(n_steps + 1);
    path.ages.resize(n_steps + 1);
    path.prices[0] = s0;
    std::uint8_t x = draw_initial(
        x0, occupation_state1(params.k1 / params.lambda1, params.k2 / params.lambda2), seed);
    std::size_t age = 0;
    path.regimes[0] = x;
    path.ages[0] = 0.0;
    for (std::size_t i = 0; i < n_steps; ++i) {
        const int s = x - 1;
        path.prices[i + 1] = path.prices[i] * std::exp(coef.drift[s] + coef.scale[s] * normal(diffusion));
        if (switching.uniform() < switch_prob(s, age)) {
            x = flip(x);
            age = 0;
        } else {
            ++age;
        }
        path.regimes[i + 1] = x;
        path.ages[i + 1] = static_cast<double>(age) * delta;
    }
    if (worst * delta > 0.1) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "max hazard * delta = %.3g exceeds 0.1", worst * delta);
        path.warnings.emplace_back(buf);
    }
    return path;
}

SimPath simulate_model(const ModelParams& params, std::size_t n_steps, double delta, double s0,
                       InitialRegime x0, const SeedSpec& seed) {
    return std::visit(
        [&](const auto& m) -> SimPath {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, UniRegimeParams>) {
                return simulate_gbm(m, n_steps, delta, s0, seed);
            } else if constexpr (std::is_same_v<T, MarkovRegimeParams>) {
                return simulate_markov_glp(m, n_steps, delta, s0, x0, seed);
            } else {
                return simulate_semimarkov_glp(m, n_steps, delta, s0, x0, seed);
            }
        },
        params);
}

void write_path_csv(const SimPath& path, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw InputError("cannot write path file: " + file.string());
    out << "step,price,regime,age\n";
    char buf[96];
    for (std::size_t i = 0; i < path.prices.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%zu,%.12g,", i, path.prices[i]);
        out << buf;
        if (!path.regimes.empty()) out << static_cast<int>(path.regimes[i]);
        out << ',';
        if (!path.ages.empty()) {
            std::snprintf(buf, sizeof buf, "%.12g", path.ages[i]);
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace regime
