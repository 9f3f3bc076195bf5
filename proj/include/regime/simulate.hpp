#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "regime/random.hpp"
#include "regime/regimes.hpp"

namespace regime {

struct JumpEvent {
    std::size_t step = 0;  // price index i+1 that the jump multiplies
    double size = 0.0;     // xi, price multiplied by (1 + xi)
};

// A simulated path S(t_0..t_N). regimes and ages are empty for uni-regime
// models; ages are empty for Markov models.
struct SimPath {
    std::vector<double> prices;
    std::vector<std::uint8_t> regimes;  // X_i in {1, 2}
    std::vector<double> ages;           // Y_i in years
    std::vector<JumpEvent> jumps;
    double delta = 0.0;
    std::vector<std::string> warnings;
};

// Initial regime X_0.
enum class InitialRegime { stationary, state1, state2 };

enum class JumpSizeLaw {
    lognormal,            // xi = e^Z - 1, Z ~ N(-s^2/2, s^2), s^2 = ln(1 + v)
    symmetric_two_point,  // xi = +-sqrt(v) with equal probability (requires v < 1)
};

SimPath simulate_gbm(const UniRegimeParams& params, std::size_t n_steps, double delta, double s0,
                     const SeedSpec& seed);

/// Markov-modulated GBM. Switches out of state X_i with probability
/// lambda_{X_i} delta each step. Throws ParameterError if lambda_max delta >= 1;
/// warns when it exceeds 0.1.
SimPath simulate_markov_glp(const MarkovRegimeParams& params, std::size_t n_steps, double delta,
                            double s0, InitialRegime x0, const SeedSpec& seed);

/// Semi-Markov-modulated GBM with gamma holding times. The switch
/// probability is the hazard at the current age times delta, clamped to
/// [0, 1]; age 0 is evaluated at delta/2 when the hazard is infinite there.
SimPath simulate_semimarkov_glp(const SemiMarkovRegimeParams& params, std::size_t n_steps,
                                double delta, double s0, InitialRegime x0, const SeedSpec& seed);

/// GBM plus compound-Poisson jumps of mean 0 and variance v. Uses the same
/// diffusion sub-stream as simulate_gbm, so lambda = 0 reproduces it.
SimPath simulate_jump_diffusion(const UniRegimeParams& params, double lambda, double v,
                                std::size_t n_steps, double delta, double s0, const SeedSpec& seed,
                                JumpSizeLaw law = JumpSizeLaw::lognormal);

// Dispatches on the model alternative; uni models ignore x0.
SimPath simulate_model(const ModelParams& params, std::size_t n_steps, double delta, double s0,
                       InitialRegime x0, const SeedSpec& seed);

// CSV with header "step,price,regime,age"; absent columns are left empty.
void write_path_csv(const SimPath& path, const std::filesystem::path& file);

}  // namespace regime
