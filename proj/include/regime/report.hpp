#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "regime/harness.hpp"

namespace regime::report {

std::string num(double x);    // 6 significant digits
std::string alpha(double x);  // 3 decimals

struct BoxStats {
    double min = 0.0, q1 = 0.0, median = 0.0, q3 = 0.0, max = 0.0;
};

// Five-number summary with linearly interpolated quartiles.
BoxStats box_stats(std::vector<double> xs);

// One theta per row: family, side and the model coefficients.
std::string family_csv(std::span<const ModelParams> family);

struct AlphaRow {
    std::string label;
    const TestReport* plus = nullptr;
    const TestReport* minus = nullptr;
};

// label, plus_alpha1..4, minus_alpha1..4 (empty cells for sides not run).
std::string alpha_table_csv(std::span<const AlphaRow> rows);

// Per-theta counts, alphas and discards for one report.
std::string theta_detail_csv(const TestReport& rep);

// Box-plot summary of the surrogate statistics per theta and component.
std::string boxplot_csv(const TestReport& rep);

// Writes text to a file, throwing InputError on failure.
void write_file(const std::filesystem::path& file, const std::string& text);

// Left-aligned fixed-width rendering of CSV-like rows for terminal output.
std::string aligned(const std::vector<std::vector<std::string>>& rows);

}  // namespace regime::report
