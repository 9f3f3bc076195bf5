#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "regime/harness.hpp"

namespace regime {

// Everything a CLI run needs. Defaults reproduce the 5-minute index study:
// six trading hours a day, 250 days a year.
struct RunConfig {
    double delta = 5.0 / (250.0 * 360.0);
    double p_hat = 2e-4;
    int jump_iterations = 20;
    std::size_t window = 20;
    double p = 0.15;
    std::size_t replicates = 200;
    std::vector<double> holding_days = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15};
    std::vector<int> percent_plus;   // empty: 1..floor(100p)
    std::vector<int> percent_minus;  // empty: ceil(100(1-p))..100
    std::vector<double> k_grid = {0.5, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16};
    double years_per_day = kYearsPerTradingDay;
    std::uint64_t master_seed = 1;
    SeedMode seed_mode = SeedMode::independent;
    InitialRegime x0 = InitialRegime::stationary;
    int max_retries = 10;
    int workers = 0;  // 0: all available threads

    std::vector<std::filesystem::path> inputs;
    std::filesystem::path out_dir = ".";
    std::vector<Family> families = {Family::uni, Family::markov, Family::semimarkov};
    std::vector<Side> sides = {Side::plus, Side::minus};
    bool dump_paths = false;
    bool dump_boxplot = false;
    bool detail = false;

    // Throws ParameterError on inconsistent values.
    void validate() const;

    HypothesisSpec hypothesis(Family family, Side side) const;
};

/// Applies one `key = value` setting. Throws ParameterError for unknown
/// keys or malformed values.
void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value);

// Reads a flat key-value file ('#' comments, blank lines ignored).
void load_config_file(RunConfig& cfg, const std::filesystem::path& file);

/// Parses "0.5,1,2", "1..15" or a mix such as "0.5,1..16".
std::vector<double> parse_number_list(std::string_view text);

std::vector<Family> parse_families(std::string_view text);  // uni|markov|semimarkov|all
std::vector<Side> parse_sides(std::string_view text);       // plus|minus|both

}  // namespace regime
