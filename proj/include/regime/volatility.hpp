#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "regime/timeseries.hpp"

namespace regime {

/// Which tail of the empirical volatility a duration series tracks.
///
/// plus  : p-squeezes, volatility at or below its p-percentile (LVLP models)
/// minus : p-expansions, volatility at or above the reflected (1-p) level
///         (HVLP models)
enum class Side { plus, minus };

const char* to_string(Side s) noexcept;

// Moving-window empirical drift and volatility, element j <-> time index
// k = window + j (1-based return index k, as in r(k)).
struct VolSeries {
    std::vector<double> mu_hat;     // per year
    std::vector<double> sigma_hat;  // per sqrt(year)
    std::size_t window = 0;
    double delta = 0.0;

    std::size_t size() const noexcept { return sigma_hat.size(); }
};

struct DurationSeries {
    std::vector<long> entries;  // completed sojourn lengths, in steps
    Side side = Side::plus;
    double p = 0.0;
    // Volatility level separating in-state from out-of-state: the
    // p-percentile for plus, -percentile(-vol, p) for minus.
    double threshold = 0.0;

    std::size_t length() const noexcept { return entries.size(); }
    bool empty() const noexcept { return entries.empty(); }
};

/// Windowed mean m(k) and standard deviation sigma(k) of rhat over the last
/// `window` returns, scaled to mu_hat = m / delta, sigma_hat = sigma / sqrt(delta).
/// Throws ParameterError if window < 2 or the series is shorter than window.
VolSeries moving_stats(const ReturnSeries& rhat, std::size_t window, double delta);

// Fraction of samples <= x.
double ecdf_eval(std::span<const double> samples, double x);

/// inf{x : ecdf(x) >= p}, p in (0, 1). Always an element of samples.
double percentile(std::span<const double> samples, double p);

// Same, on data already sorted ascending.
double percentile_sorted(std::span<const double> sorted, double p);

inline constexpr long kNever = std::numeric_limits<long>::max();

/// Sojourn boundaries (a_i, b_i), i >= 1, for an in-state indicator.
///
/// a_0 = 0; b_{i-1} is the first position >= a_{i-1} out of state and a_i the
/// first position >= b_{i-1} back in state. Only pairs with finite b_i are
/// returned, so the run containing position 0 and any unfinished trailing
/// run are excluded.
std::vector<std::pair<long, long>> sojourn_bounds(const std::vector<bool>& in_state);

/// Completed p-squeeze (plus) or p-expansion (minus) durations of vol.
/// An empty result is not an error here; callers decide.
DurationSeries durations(std::span<const double> vol, double p, Side side);

}  // namespace regime
