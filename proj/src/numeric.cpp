#include "regime/numeric.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "regime/errors.hpp"

namespace regime::numeric {

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        comp_ += (sum_ - t) + x;
    } else {
        comp_ += (x - t) + sum_;
    }
    sum_ = t;
}

double sum(std::span<const double> xs) noexcept {
    CompensatedSum acc;
    for (double x : xs) acc.add(x);
    return acc.value();
}

double mean(std::span<const double> xs) noexcept {
    if (xs.empty()) return 0.0;
    return sum(xs) / static_cast<double>(xs.size());
}

double normal_cdf(double x) noexcept {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

namespace {

// Acklam's rational approximation, relative error ~1e-9.
double acklam_lower(double p) {
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw ParameterError("normal_quantile: probability must lie in (0, 1)");
    }
    // Work in the lower half so cdf(x) - p keeps full relative precision.
    const bool upper = p > 0.5;
    const double target = upper ? 1.0 - p : p;
    double x = acklam_lower(target);
    const double sqrt2pi = std::sqrt(2.0 * std::numbers::pi);
    for (int i = 0; i < 3; ++i) {
        const double e = normal_cdf(x) - target;
        const double u = e * sqrt2pi * std::exp(0.5 * x * x);
        x -= u / (1.0 + 0.5 * x * u);
    }
    return upper ? -x : x;
}

double log_gamma_q(double a, double x) {
    if (!(a > 0.0) || x < 0.0 || std::isnan(x)) {
        throw ParameterError("log_gamma_q: requires a > 0 and x >= 0");
    }
    if (x == 0.0) return 0.0;
    constexpr double eps = 1e-16;
    constexpr int max_iter = 10000;
    const double log_prefix = -x + a * std::log(x) - std::lgamma(a);

    if (x < a + 1.0) {
        double ap = a;
        double term = 1.0 / a;
        double total = term;
        for (int n = 0; n < max_iter; ++n) {
            ap += 1.0;
            term *= x / ap;
            total += term;
            if (std::abs(term) < std::abs(total) * eps) break;
        }
        const double lower = std::exp(log_prefix) * total;
        return std::log1p(-lower);
    }

    // Modified Lentz evaluation of the continued fraction for Q.
    constexpr double tiny = std::numeric_limits<double>::min() / eps;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iter; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) break;
    }
    return log_prefix + std::log(h);
}

double gamma_q(double a, double x) {
    return std::exp(log_gamma_q(a, x));
}

}  // namespace regime::numeric
