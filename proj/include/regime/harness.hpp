#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "regime/diststats.hpp"
#include "regime/jumpsep.hpp"
#include "regime/regimes.hpp"
#include "regime/simulate.hpp"

namespace regime {

// How surrogate streams are keyed across the candidate models of a family.
enum class SeedMode {
    independent,  // theta index enters the stream key
    common,       // every theta shares replicate streams (common random numbers)
};

struct HypothesisSpec {
    Family family = Family::markov;
    Side side = Side::plus;
    double p = 0.15;
    std::size_t replicates = 200;  // B
    int r_max = kMaxComponents;
    std::vector<double> holding_grid;  // mean sojourn of state 1, in years_per_unit
    std::vector<int> percent_grid;     // empty: default grid for the side
    std::vector<double> k_grid;
    double years_per_unit = kYearsPerTradingDay;
    std::size_t window = 20;
    std::uint64_t master_seed = 0;
    SeedMode seed_mode = SeedMode::independent;
    InitialRegime x0 = InitialRegime::stationary;
    int max_retries = 10;
    bool keep_samples = true;  // retain surrogate statistics for box plots
};

struct ThetaResult {
    ModelParams theta;
    std::array<std::size_t, kMaxComponents> counts{};
    std::array<double, kMaxComponents> alpha{};
    std::size_t used = 0;       // replicates entering the ranks
    std::size_t discarded = 0;  // slots that never produced a defined statistic
    bool unreliable = false;    // discarded > 10% of B
    std::vector<TStat> samples;
};

struct TestReport {
    Family family = Family::uni;
    Side side = Side::plus;
    TStat t_star;
    std::vector<ThetaResult> per_theta;
    std::array<double, kMaxComponents> composite{};
    std::array<double, kMaxComponents> confidence{};  // percent
    std::array<int, kMaxComponents> argmax{};
    std::vector<DroppedPoint> dropped;
};

/// Observed statistic of a data series: strip jumps, windowed volatility,
/// durations on `side`, then T. Throws PipelineError when fewer than two
/// durations complete.
TStat observed_tstar(const ReturnSeries& ret, const JumpEstimates& jumps, std::size_t window,
                     double p, Side side);

// Candidate models for the spec, with dropped grid points.
std::pair<std::vector<ModelParams>, std::vector<DroppedPoint>> build_family(
    const EmpiricalSummary& summary, const HypothesisSpec& spec);

// Stream for replicate slot `slot`, retry `attempt`, of candidate `theta_index`.
SeedSpec surrogate_seed(const HypothesisSpec& spec, std::size_t theta_index, std::size_t slot,
                        int attempt);

/// One surrogate statistic: simulate a continuous path of n_steps returns
/// and push it through returns, moving_stats, durations and T. Returns
/// nullopt when T is not defined up to r_max.
std::optional<TStat> surrogate_statistic(const ModelParams& theta, const EmpiricalSummary& summary,
                                         const HypothesisSpec& spec, const SeedSpec& seed);

/// Full surrogate test over the family, parallelised across
/// (theta, replicate) tasks with OpenMP. Identical output for any worker
/// count.
TestReport run_test(const EmpiricalSummary& summary, const TStat& t_star,
                    const HypothesisSpec& spec, int workers);

/// Same as run_test against an explicit list of models instead of the grid
/// in spec. spec still supplies B, side, window, seeds and retries.
TestReport run_test_on(const EmpiricalSummary& summary, const TStat& t_star,
                       const HypothesisSpec& spec, std::vector<ModelParams> family, int workers,
                       std::vector<DroppedPoint> dropped = {});

// Single-threaded reference with the same contract as run_test.
TestReport run_test_serial(const EmpiricalSummary& summary, const TStat& t_star,
                           const HypothesisSpec& spec);

// Table label: LVLP for plus, HVLP for minus.
const char* class_label(Side side) noexcept;

struct BestFit {
    Family family = Family::markov;
    Side side = Side::plus;
    double alpha4 = 0.0;
    double confidence_percent = 0.0;
    bool ambiguous = false;  // equal best alpha on both sides
};

using ReportKey = std::pair<Family, Side>;

/// Class with the largest alpha_4. Equal values prefer the simpler family
/// (uni, then Markov, then semi-Markov); a remaining tie between sides is
/// flagged as ambiguous and resolved toward plus.
BestFit summarize_best_fit(const std::map<ReportKey, TestReport>& reports);

}  // namespace regime
