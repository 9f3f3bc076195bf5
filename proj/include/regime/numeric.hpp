#pragma once

#include <span>

namespace regime::numeric {

// Neumaier-compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double sum(std::span<const double> xs) noexcept;
double mean(std::span<const double> xs) noexcept;

// Standard normal cumulative distribution function.
double normal_cdf(double x) noexcept;

/// Standard normal quantile for p in (0, 1).
///
/// Rational starting point refined by Halley steps against normal_cdf, so
/// the result is accurate to well below 1e-10 absolute over the whole open
/// interval. Throws ParameterError outside (0, 1).
double normal_quantile(double p);

/// Natural log of the regularized upper incomplete gamma function Q(a, x),
/// a > 0, x >= 0. Series for x < a + 1, continued fraction otherwise.
double log_gamma_q(double a, double x);

// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

}  // namespace regime::numeric
