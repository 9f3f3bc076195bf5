#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <span>

#include "regime/volatility.hpp"

namespace regime {

inline constexpr int kMaxComponents = 4;

/// Discriminating statistic of a duration series: mean, standard deviation
/// (L-1 normalised), skewness and kurtosis (1/L moments over t2^3, t2^4).
/// Components beyond defined_up_to are NaN.
struct TStat {
    std::array<double, kMaxComponents> t{};
    int defined_up_to = 0;
    std::size_t length = 0;  // L, number of durations

    double operator[](int j) const { return t[static_cast<std::size_t>(j)]; }
};

// Throws PipelineError if d is empty.
TStat t_statistics(const DurationSeries& d);
TStat t_statistics(std::span<const long> entries);

// Folded rank fraction max(min(x, B - x) / B, 0).
double g_b(double x, double b);

/// Count vector c_j = #{i : t*_j >= t^i_j} for j < r.
std::array<std::size_t, kMaxComponents> rank_counts(const TStat& t_star,
                                                    std::span<const TStat> samples, int r);

/// alpha_r = min over j < r of g_b(c_j, B), B = samples.size().
/// Requires every sample and t_star to be defined up to r.
double alpha_theta(const TStat& t_star, std::span<const TStat> samples, int r);

// alpha for each r = 1..4 from a count vector; nonincreasing in r.
std::array<double, kMaxComponents> alphas_from_counts(
    const std::array<std::size_t, kMaxComponents>& counts, std::size_t b);

struct CompositeAlpha {
    double alpha = 0.0;
    double confidence_percent = 0.0;  // 100 (1 - 2 alpha)
    int argmax = -1;                  // first key attaining the max
};

CompositeAlpha alpha_composite(const std::map<int, double>& per_theta);

}  // namespace regime
