#include "regime/diststats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regime/errors.hpp"
#include "regime/numeric.hpp"

namespace regime {

TStat t_statistics(std::span<const long> entries) {
    if (entries.empty()) throw PipelineError("t_statistics: empty duration series");
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    TStat out;
    out.t.fill(nan);
    out.length = entries.size();
    const double len = static_cast<double>(entries.size());

    numeric::CompensatedSum s1;
    for (long d : entries) s1.add(static_cast<double>(d));
    const double mean = s1.value() / len;
    out.t[0] = mean;
    out.defined_up_to = 1;
    if (entries.size() < 2) return out;

    numeric::CompensatedSum s2, s3, s4;
    for (long d : entries) {
        const double dev = static_cast<double>(d) - mean;
        const double dev2 = dev * dev;
        s2.add(dev2);
        s3.add(dev2 * dev);
        s4.add(dev2 * dev2);
    }
    const double sd = std::sqrt(s2.value() / (len - 1.0));
    out.t[1] = sd;
    out.defined_up_to = 2;
    if (!(sd > 0.0)) return out;

    out.t[2] = (s3.value() / len) / (sd * sd * sd);
    out.t[3] = (s4.value() / len) / (sd * sd * sd * sd);
    out.defined_up_to = 4;
    return out;
}

TStat t_statistics(const DurationSeries& d) {
    return t_statistics(std::span<const long>(d.entries));
}

double g_b(double x, double b) {
    return std::max(std::min(x, b - x) / b, 0.0);
}

std::array<std::size_t, kMaxComponents> rank_counts(const TStat& t_star,
                                                    std::span<const TStat> samples, int r) {
    if (r < 1 || r > kMaxComponents) throw ParameterError("rank_counts: r must be in 1..4");
    if (t_star.defined_up_to < r) {
        throw ParameterError("rank_counts: observed statistic undefined up to r");
    }
    std::array<std::size_t, kMaxComponents> counts{};
    for (const auto& s : samples) {
        if (s.defined_up_to < r) {
            throw ParameterError("rank_counts: surrogate statistic undefined up to r");
        }
        for (int j = 0; j < r; ++j) {
            if (t_star[j] >= s[j]) ++counts[static_cast<std::size_t>(j)];
        }
    }
    return counts;
}

std::array<double, kMaxComponents> alphas_from_counts(
    const std::array<std::size_t, kMaxComponents>& counts, std::size_t b) {
    std::array<double, kMaxComponents> out{};
    double running = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < kMaxComponents; ++j) {
        running = std::min(running, g_b(static_cast<double>(counts[j]), static_cast<double>(b)));
        out[j] = running;
    }
    return out;
}

double alpha_theta(const TStat& t_star, std::span<const TStat> samples, int r) {
    if (samples.empty()) throw ParameterError("alpha_theta: no surrogate samples");
    const auto counts = rank_counts(t_star, samples, r);
    double a = 0.5;
    for (int j = 0; j < r; ++j) {
        a = std::min(a, g_b(static_cast<double>(counts[static_cast<std::size_t>(j)]),
                            static_cast<double>(samples.size())));
    }
    return a;
}

CompositeAlpha alpha_composite(const std::map<int, double>& per_theta) {
    if (per_theta.empty()) throw ParameterError("alpha_composite: empty family");
    CompositeAlpha out;
    out.alpha = -1.0;
    for (const auto& [key, a] : per_theta) {
        if (a > out.alpha) {
            out.alpha = a;
            out.argmax = key;
        }
    }
    out.confidence_percent = 100.0 * (1.0 - 2.0 * out.alpha);
    return out;
}

}  // namespace regime
