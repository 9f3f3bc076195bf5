#include "regime/volatility.hpp"

#include <algorithm>
#include <cmath>

#include "regime/errors.hpp"
#include "regime/numeric.hpp"

namespace regime {

const char* to_string(Side s) noexcept {
    return s == Side::plus ? "plus" : "minus";
}

VolSeries moving_stats(const ReturnSeries& rhat, std::size_t window, double delta) {
    if (window < 2) throw ParameterError("moving_stats: window must be >= 2");
    if (!(delta > 0.0)) throw ParameterError("moving_stats: delta must be positive");
    const auto& r = rhat.r;
    if (r.size() < window) {
        throw PipelineError("moving_stats: series length " + std::to_string(r.size()) +
                            " shorter than window " + std::to_string(window));
    }

    const std::size_t count = r.size() - window + 1;
    const double n = static_cast<double>(window);
    const double sqrt_delta = std::sqrt(delta);
    VolSeries out;
    out.window = window;
    out.delta = delta;
    out.mu_hat.resize(count);
    out.sigma_hat.resize(count);

    // Each window is evaluated from scratch, so there is no drift from
    // running updates. The corrected two-pass form equals the
    // (sum of squares - n m^2) / (n - 1) expression in exact arithmetic.
    for (std::size_t j = 0; j < count; ++j) {
        const double* w = r.data() + j;
        double s = 0.0;
        for (std::size_t i = 0; i < window; ++i) s += w[i];
        const double m = s / n;
        double ss = 0.0, sd = 0.0;
        for (std::size_t i = 0; i < window; ++i) {
            const double dev = w[i] - m;
            ss += dev * dev;
            sd += dev;
        }
        // sd is the rounding error of m; removing it makes constant windows exact.
        const double var = std::max((ss - sd * sd / n) / (n - 1.0), 0.0);
        out.mu_hat[j] = m / delta;
        out.sigma_hat[j] = std::sqrt(var) / sqrt_delta;
    }
    return out;
}

double ecdf_eval(std::span<const double> samples, double x) {
    if (samples.empty()) throw ParameterError("ecdf_eval: empty sample");
    const auto hits = std::count_if(samples.begin(), samples.end(), [x](double y) { return y <= x; });
    return static_cast<double>(hits) / static_cast<double>(samples.size());
}

double percentile_sorted(std::span<const double> sorted, double p) {
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("percentile: p must lie in (0, 1)");
    if (sorted.empty()) throw ParameterError("percentile: empty sample");
    const std::size_t m = sorted.size();
    const double md = static_cast<double>(m);
    // Smallest rank j with j/m >= p, using the same floating comparison as
    // the ecdf so the two definitions agree bit for bit.
    auto reaches = [&](std::size_t j) { return static_cast<double>(j) / md >= p; };
    std::size_t j = static_cast<std::size_t>(std::ceil(md * p));
    j = std::clamp<std::size_t>(j, 1, m);
    while (j > 1 && reaches(j - 1)) --j;
    while (j < m && !reaches(j)) ++j;
    // Ties: with repeated values the infimum is the value itself, so the
    // order statistic at rank j is the answer either way.
    return sorted[j - 1];
}

double percentile(std::span<const double> samples, double p) {
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    return percentile_sorted(sorted, p);
}

std::vector<std::pair<long, long>> sojourn_bounds(const std::vector<bool>& in_state) {
    const long len = static_cast<long>(in_state.size());
    auto first_from = [&](long start, bool want) {
        for (long k = start; k < len; ++k) {
            if (in_state[static_cast<std::size_t>(k)] == want) return k;
        }
        return kNever;
    };

    std::vector<std::pair<long, long>> bounds;
    long b = first_from(0, false);  // b_0
    while (b != kNever) {
        const long a = first_from(b, true);
        if (a == kNever) break;
        b = first_from(a, false);
        if (b == kNever) break;
        bounds.emplace_back(a, b);
    }
    return bounds;
}

DurationSeries durations(std::span<const double> vol, double p, Side side) {
    if (vol.empty()) throw ParameterError("durations: empty volatility series");
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("durations: p must lie in (0, 1)");

    DurationSeries out;
    out.side = side;
    out.p = p;
    std::vector<bool> in_state(vol.size());
    if (side == Side::plus) {
        const double thr = percentile(vol, p);
        out.threshold = thr;
        for (std::size_t k = 0; k < vol.size(); ++k) in_state[k] = vol[k] <= thr;
    } else {
        std::vector<double> neg(vol.size());
        std::transform(vol.begin(), vol.end(), neg.begin(), [](double x) { return -x; });
        const double thr = percentile(neg, p);
        out.threshold = -thr;
        for (std::size_t k = 0; k < vol.size(); ++k) in_state[k] = neg[k] <= thr;
    }
    for (auto [a, b] : sojourn_bounds(in_state)) out.entries.push_back(b - a);
    return out;
}

}  // namespace regime
