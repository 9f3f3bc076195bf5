#include "regime/timeseries.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <string_view>

#include "regime/errors.hpp"
#include "regime/numeric.hpp"

namespace regime {

PriceSeries::PriceSeries(std::vector<double> values, double delta, std::string label)
    : values_(std::move(values)), delta_(delta), label_(std::move(label)) {
    if (!(delta_ > 0.0) || !std::isfinite(delta_)) {
        throw ParameterError("price series: delta must be positive");
    }
    if (values_.size() < 2) {
        throw InputError("price series: insufficient data (need at least 2 prices)");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!(values_[i] > 0.0) || !std::isfinite(values_[i])) {
            throw InputError("price series: non-positive price at index " + std::to_string(i));
        }
    }
}

ReturnSeries make_return_series(std::vector<double> r, double delta) {
    ReturnSeries out;
    out.delta = delta;
    out.rbar = numeric::mean(r);
    if (r.size() >= 2) {
        numeric::CompensatedSum ss;
        for (double x : r) ss.add((x - out.rbar) * (x - out.rbar));
        out.sd = std::sqrt(ss.value() / static_cast<double>(r.size() - 1));
    }
    out.r = std::move(r);
    return out;
}

ReturnSeries simple_returns(const PriceSeries& s) {
    const auto v = s.values();
    std::vector<double> r(s.steps());
    for (std::size_t i = 1; i < v.size(); ++i) {
        r[i - 1] = (v[i] - v[i - 1]) / v[i - 1];
    }
    return make_return_series(std::move(r), s.delta());
}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

bool parse_double(std::string_view field, double& out) {
    field = trim(field);
    if (field.empty()) return false;
    if (field.front() == '+') field.remove_prefix(1);
    const auto* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

constexpr std::size_t kLastField = static_cast<std::size_t>(-1);

// Field `column` of a comma-separated record, or the last field.
std::string_view price_field(std::string_view body, std::size_t column) {
    if (column == kLastField) {
        const auto comma = body.rfind(',');
        return comma == std::string_view::npos ? body : body.substr(comma + 1);
    }
    std::size_t start = 0;
    for (std::size_t c = 0; c < column; ++c) {
        const auto comma = body.find(',', start);
        if (comma == std::string_view::npos) return {};
        start = comma + 1;
    }
    const auto end = body.find(',', start);
    return body.substr(start, end == std::string_view::npos ? body.size() - start : end - start);
}

std::size_t header_column(std::string_view header) {
    std::size_t c = 0, start = 0;
    while (true) {
        const auto end = header.find(',', start);
        auto name = trim(header.substr(start, end == std::string_view::npos ? header.size() - start
                                                                            : end - start));
        if (name == "price" || name == "close") return c;
        if (end == std::string_view::npos) return kLastField;
        start = end + 1;
        ++c;
    }
}

}  // namespace

PriceSeries load_prices(const std::filesystem::path& path, double delta, std::string label) {
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot open input file: " + path.string());
    }
    if (label.empty()) label = path.stem().string();

    std::vector<double> prices;
    std::string line;
    std::size_t line_no = 0;
    bool seen_record = false;
    std::size_t column = kLastField;
    while (std::getline(in, line)) {
        ++line_no;
        const auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;

        const auto field = price_field(body, column);
        double price = 0.0;
        if (!parse_double(field, price)) {
            if (!seen_record) {
                seen_record = true;  // header row; a "price" column takes precedence
                column = header_column(body);
                continue;
            }
            throw InputError(path.string() + ":" + std::to_string(line_no) +
                             ": cannot parse price '" + std::string(trim(field)) + "'");
        }
        seen_record = true;
        if (!(price > 0.0) || !std::isfinite(price)) {
            throw InputError(path.string() + ":" + std::to_string(line_no) +
                             ": non-positive price " + std::string(trim(field)));
        }
        prices.push_back(price);
    }
    if (prices.size() < 2) {
        throw InputError(path.string() + ": insufficient data (" + std::to_string(prices.size()) +
                         " prices, need at least 2)");
    }
    return PriceSeries(std::move(prices), delta, std::move(label));
}

}  // namespace regime
