#include "regime/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "regime/errors.hpp"

namespace regime {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    return s.substr(first, s.find_last_not_of(" \t\r\n") - first + 1);
}

double to_double(std::string_view key, std::string_view text) {
    text = trim(text);
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParameterError("config: '" + std::string(key) + "' expects a number, got '" +
                             std::string(text) + "'");
    }
    return out;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view text) {
    text = trim(text);
    Int out{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ParameterError("config: '" + std::string(key) + "' expects an integer, got '" +
                             std::string(text) + "'");
    }
    return out;
}

bool to_bool(std::string_view key, std::string_view text) {
    text = trim(text);
    if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
    if (text == "0" || text == "false" || text == "no" || text == "off") return false;
    throw ParameterError("config: '" + std::string(key) + "' expects a boolean");
}

std::vector<int> to_percent_list(std::string_view key, std::string_view text) {
    std::vector<int> out;
    for (double v : parse_number_list(text)) {
        if (v != std::floor(v) || v < 1 || v > 100) {
            throw ParameterError("config: '" + std::string(key) + "' expects integer percents 1..100");
        }
        out.push_back(static_cast<int>(v));
    }
    return out;
}

}  // namespace

std::vector<double> parse_number_list(std::string_view text) {
    std::vector<double> out;
    text = trim(text);
    if (text.empty()) throw ParameterError("config: empty list");
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto comma = text.find(',', pos);
        if (comma == std::string_view::npos) comma = text.size();
        const auto item = trim(text.substr(pos, comma - pos));
        const auto dots = item.find("..");
        if (dots != std::string_view::npos) {
            const double lo = to_double("list", item.substr(0, dots));
            const double hi = to_double("list", item.substr(dots + 2));
            if (hi < lo) throw ParameterError("config: descending range '" + std::string(item) + "'");
            for (double v = lo; v <= hi + 1e-9; v += 1.0) out.push_back(v);
        } else {
            out.push_back(to_double("list", item));
        }
        pos = comma + 1;
    }
    return out;
}

std::vector<Family> parse_families(std::string_view text) {
    text = trim(text);
    if (text == "all") return {Family::uni, Family::markov, Family::semimarkov};
    if (text == "uni") return {Family::uni};
    if (text == "markov") return {Family::markov};
    if (text == "semimarkov") return {Family::semimarkov};
    throw ParameterError("unknown family '" + std::string(text) + "'");
}

std::vector<Side> parse_sides(std::string_view text) {
    text = trim(text);
    if (text == "both") return {Side::plus, Side::minus};
    if (text == "plus") return {Side::plus};
    if (text == "minus") return {Side::minus};
    throw ParameterError("unknown side '" + std::string(text) + "'");
}

void apply_setting(RunConfig& cfg, std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "delta") cfg.delta = to_double(key, value);
    else if (key == "p_hat") cfg.p_hat = to_double(key, value);
    else if (key == "jump_iterations") cfg.jump_iterations = to_int<int>(key, value);
    else if (key == "window") cfg.window = to_int<std::size_t>(key, value);
    else if (key == "p") cfg.p = to_double(key, value);
    else if (key == "replicates" || key == "B") cfg.replicates = to_int<std::size_t>(key, value);
    else if (key == "holding_days") cfg.holding_days = parse_number_list(value);
    else if (key == "percent_plus") cfg.percent_plus = to_percent_list(key, value);
    else if (key == "percent_minus") cfg.percent_minus = to_percent_list(key, value);
    else if (key == "k_grid") cfg.k_grid = parse_number_list(value);
    else if (key == "years_per_day") cfg.years_per_day = to_double(key, value);
    else if (key == "seed") cfg.master_seed = to_int<std::uint64_t>(key, value);
    else if (key == "seed_mode") {
        if (value == "independent") cfg.seed_mode = SeedMode::independent;
        else if (value == "common") cfg.seed_mode = SeedMode::common;
        else throw ParameterError("config: seed_mode must be independent or common");
    } else if (key == "initial_regime") {
        if (value == "stationary") cfg.x0 = InitialRegime::stationary;
        else if (value == "1") cfg.x0 = InitialRegime::state1;
        else if (value == "2") cfg.x0 = InitialRegime::state2;
        else throw ParameterError("config: initial_regime must be stationary, 1 or 2");
    } else if (key == "max_retries") cfg.max_retries = to_int<int>(key, value);
    else if (key == "workers") cfg.workers = to_int<int>(key, value);
    else if (key == "input") cfg.inputs.emplace_back(std::string(value));
    else if (key == "out_dir") cfg.out_dir = std::string(value);
    else if (key == "family") cfg.families = parse_families(value);
    else if (key == "side") cfg.sides = parse_sides(value);
    else if (key == "dump_paths") cfg.dump_paths = to_bool(key, value);
    else if (key == "dump_boxplot") cfg.dump_boxplot = to_bool(key, value);
    else if (key == "detail") cfg.detail = to_bool(key, value);
    else throw ParameterError("config: unknown key '" + std::string(key) + "'");
}

void load_config_file(RunConfig& cfg, const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open config file: " + file.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ParameterError(file.string() + ":" + std::to_string(line_no) +
                                 ": expected key = value");
        }
        try {
            apply_setting(cfg, body.substr(0, eq), body.substr(eq + 1));
        } catch (const ParameterError& e) {
            throw ParameterError(file.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

void RunConfig::validate() const {
    if (!(delta > 0.0)) throw ParameterError("delta must be positive");
    if (!(p_hat > 0.0 && p_hat < 1.0)) throw ParameterError("p_hat must lie in (0, 1)");
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("p must lie in (0, 1)");
    if (window < 2) throw ParameterError("window must be >= 2");
    if (replicates < 2) throw ParameterError("replicates (B) must be >= 2");
    if (jump_iterations < 1) throw ParameterError("jump_iterations must be >= 1");
    if (max_retries < 0) throw ParameterError("max_retries must be >= 0");
    if (workers < 0) throw ParameterError("workers must be >= 0");
    if (holding_days.empty() || k_grid.empty()) throw ParameterError("grids must be non-empty");
    for (double h : holding_days) {
        if (!(h > 0.0)) throw ParameterError("holding_days must be positive");
    }
    for (double k : k_grid) {
        if (!(k > 0.0)) throw ParameterError("k_grid must be positive");
    }
    if (!(years_per_day > 0.0)) throw ParameterError("years_per_day must be positive");
    for (int q : percent_plus) {
        const auto ok = default_percent_grid(p, Side::plus);
        if (std::find(ok.begin(), ok.end(), q) == ok.end()) {
            throw ParameterError("percent_plus entry " + std::to_string(q) + " exceeds 100p");
        }
    }
    for (int q : percent_minus) {
        const auto ok = default_percent_grid(p, Side::minus);
        if (std::find(ok.begin(), ok.end(), q) == ok.end()) {
            throw ParameterError("percent_minus entry " + std::to_string(q) + " below 100(1-p)");
        }
    }
}

HypothesisSpec RunConfig::hypothesis(Family family, Side side) const {
    HypothesisSpec h;
    h.family = family;
    h.side = side;
    h.p = p;
    h.replicates = replicates;
    h.holding_grid = holding_days;
    h.percent_grid = side == Side::plus ? percent_plus : percent_minus;
    h.k_grid = k_grid;
    h.years_per_unit = years_per_day;
    h.window = window;
    h.master_seed = master_seed;
    h.seed_mode = seed_mode;
    h.x0 = x0;
    h.max_retries = max_retries;
    h.keep_samples = dump_boxplot;
    return h;
}

}  // namespace regime
