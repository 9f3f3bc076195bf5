#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "regime/jumpsep.hpp"
#include "regime/volatility.hpp"

namespace regime {

// Trading days to years under a 250-day year.
inline constexpr double kYearsPerTradingDay = 1.0 / 250.0;

// Data-side targets every candidate model in the composite class must match.
struct EmpiricalSummary {
    double mu_bar = 0.0;     // time average of mu_hat, per year
    double sigma_bar = 0.0;  // time average of sigma_hat, per sqrt(year)
    double lambda_hat = 0.0;
    double v = 0.0;
    std::map<int, double> sigma_percentiles;  // percent 1..100 -> percentile of sigma_hat
    double p = 0.0;
    double level_low = 0.0;   // percentile(sigma_hat, p)
    double level_high = 0.0;  // percentile(sigma_hat, 1 - p)
    double delta = 0.0;
    std::size_t n_steps = 0;  // number of returns in the data
};

struct UniRegimeParams {
    double mu = 0.0;
    double beta = 0.0;
    bool degenerate = false;  // beta == 0
};

struct MarkovRegimeParams {
    double mu1 = 0.0, mu2 = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;  // switching rates out of each state, per year
    Side side = Side::plus;
};

// Gamma(k, lambda_i) holding times; lambda1/lambda2 are gamma rates.
struct SemiMarkovRegimeParams {
    double mu1 = 0.0, mu2 = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0;
    double lambda1 = 0.0, lambda2 = 0.0;
    double k1 = 1.0, k2 = 1.0;
    Side side = Side::plus;
};

using ModelParams = std::variant<UniRegimeParams, MarkovRegimeParams, SemiMarkovRegimeParams>;

enum class Family { uni, markov, semimarkov };

const char* to_string(Family f) noexcept;

// Grid point rejected because the volatility relation forces sigma2 <= 0.
struct DroppedPoint {
    double holding = 0.0;
    int percent = 0;
    double k = 1.0;
    double sigma1 = 0.0;
    double sigma2 = 0.0;
};

template <typename Params>
struct FamilyBuild {
    std::vector<Params> members;
    std::vector<DroppedPoint> dropped;
};

EmpiricalSummary summarize(const VolSeries& vol, const JumpEstimates& jumps, double p,
                           std::size_t n_steps);

UniRegimeParams uni_regime_fit(const EmpiricalSummary& summary);

// Percent grids consistent with each side: plus 1..floor(100p), minus ceil(100(1-p))..100.
std::vector<int> default_percent_grid(double p, Side side);

/// Markov family over (mean sojourn of state 1, sigma1 percentile).
///
/// holding_grid is in units of `years_per_unit` (trading days by default).
/// Throws ParameterError for inconsistent grids and PipelineError when every
/// grid point is dropped.
FamilyBuild<MarkovRegimeParams> markov_family(const EmpiricalSummary& summary, double p,
                                              const std::vector<double>& holding_grid,
                                              const std::vector<int>& percent_grid, Side side,
                                              double years_per_unit = kYearsPerTradingDay);

FamilyBuild<SemiMarkovRegimeParams> semi_markov_family(
    const EmpiricalSummary& summary, double p, const std::vector<double>& holding_grid,
    const std::vector<int>& percent_grid, const std::vector<double>& k_grid, Side side,
    double years_per_unit = kYearsPerTradingDay);

// Throws ParameterError if a member violates its class constraints.
void validate(const MarkovRegimeParams& m, const EmpiricalSummary& s, double p);
void validate(const SemiMarkovRegimeParams& m, const EmpiricalSummary& s, double p);

/// Hazard rate of Gamma(k, lambda) at age y (years), evaluated in log space.
/// Exactly lambda when k == 1. Throws ParameterError for y == 0 with k < 1.
double gamma_hazard(double y, double k, double lambda);

// One-line human/CSV description of a model point.
std::string describe(const ModelParams& m);

}  // namespace regime
