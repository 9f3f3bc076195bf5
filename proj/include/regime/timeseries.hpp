#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace regime {

/// Equispaced price observations S(0..N).
///
/// Invariants are checked on construction: at least two values, every value
/// strictly positive and finite, delta > 0. Immutable afterwards.
class PriceSeries {
public:
    PriceSeries(std::vector<double> values, double delta, std::string label = {});

    std::span<const double> values() const noexcept { return values_; }
    double delta() const noexcept { return delta_; }
    const std::string& label() const noexcept { return label_; }
    std::size_t size() const noexcept { return values_.size(); }
    // Number of returns N.
    std::size_t steps() const noexcept { return values_.size() - 1; }

private:
    std::vector<double> values_;
    double delta_;
    std::string label_;
};

// Simple returns r(1..N) with their mean and N-1 sample standard deviation.
struct ReturnSeries {
    std::vector<double> r;
    double rbar = 0.0;
    double sd = 0.0;
    double delta = 0.0;

    std::size_t size() const noexcept { return r.size(); }
};

// Builds a ReturnSeries from raw returns, computing rbar and sd.
ReturnSeries make_return_series(std::vector<double> r, double delta);

ReturnSeries simple_returns(const PriceSeries& s);

/// Reads a CSV price file: one record per line, price in the last
/// comma-separated field, '#' lines and blank lines skipped. A first record
/// whose price field is not numeric is treated as a header; a header column
/// named "price" or "close" then selects the field instead. Delta comes from
/// configuration. Throws InputError with the offending line number.
PriceSeries load_prices(const std::filesystem::path& path, double delta,
                        std::string label = {});

}  // namespace regime
