#include "regime/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "regime/errors.hpp"

namespace regime::report {

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

std::string alpha(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    return buf;
}

BoxStats box_stats(std::vector<double> xs) {
    if (xs.empty()) throw ParameterError("box_stats: empty sample");
    std::sort(xs.begin(), xs.end());
    auto quantile = [&](double q) {
        const double pos = q * static_cast<double>(xs.size() - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const auto hi = std::min(lo + 1, xs.size() - 1);
        return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
    };
    return {xs.front(), quantile(0.25), quantile(0.5), quantile(0.75), xs.back()};
}

std::string family_csv(std::span<const ModelParams> family) {
    std::ostringstream out;
    out << "theta,family,side,mu1,mu2,sigma1,sigma2,lambda1,lambda2,k\n";
    for (std::size_t i = 0; i < family.size(); ++i) {
        out << i << ',';
        std::visit(
            [&](const auto& m) {
                using T = std::decay_t<decltype(m)>;
                if constexpr (std::is_same_v<T, UniRegimeParams>) {
                    out << "uni,," << num(m.mu) << ',' << num(m.mu) << ',' << num(m.beta) << ','
                        << num(m.beta) << ",,,";
                } else if constexpr (std::is_same_v<T, MarkovRegimeParams>) {
                    out << "markov," << to_string(m.side) << ',' << num(m.mu1) << ',' << num(m.mu2)
                        << ',' << num(m.sigma1) << ',' << num(m.sigma2) << ',' << num(m.lambda1)
                        << ',' << num(m.lambda2) << ",1";
                } else {
                    out << "semimarkov," << to_string(m.side) << ',' << num(m.mu1) << ','
                        << num(m.mu2) << ',' << num(m.sigma1) << ',' << num(m.sigma2) << ','
                        << num(m.lambda1) << ',' << num(m.lambda2) << ',' << num(m.k1);
                }
            },
            family[i]);
        out << '\n';
    }
    return out.str();
}

std::string alpha_table_csv(std::span<const AlphaRow> rows) {
    std::ostringstream out;
    out << "label,plus_alpha1,plus_alpha2,plus_alpha3,plus_alpha4,"
           "minus_alpha1,minus_alpha2,minus_alpha3,minus_alpha4\n";
    for (const auto& row : rows) {
        out << row.label;
        for (const TestReport* rep : {row.plus, row.minus}) {
            for (std::size_t j = 0; j < kMaxComponents; ++j) {
                out << ',';
                if (rep) out << alpha(rep->composite[j]);
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string theta_detail_csv(const TestReport& rep) {
    std::ostringstream out;
    out << "theta,model,used,discarded,unreliable,count1,count2,count3,count4,"
           "alpha1,alpha2,alpha3,alpha4\n";
    for (std::size_t i = 0; i < rep.per_theta.size(); ++i) {
        const auto& t = rep.per_theta[i];
        out << i << ",\"" << describe(t.theta) << "\"," << t.used << ',' << t.discarded << ','
            << (t.unreliable ? 1 : 0);
        for (auto c : t.counts) out << ',' << c;
        for (auto a : t.alpha) out << ',' << alpha(a);
        out << '\n';
    }
    return out.str();
}

std::string boxplot_csv(const TestReport& rep) {
    std::ostringstream out;
    out << "theta,component,n,min,q1,median,q3,max,t_star\n";
    for (std::size_t i = 0; i < rep.per_theta.size(); ++i) {
        const auto& samples = rep.per_theta[i].samples;
        if (samples.empty()) continue;
        for (int j = 0; j < kMaxComponents; ++j) {
            std::vector<double> xs;
            xs.reserve(samples.size());
            for (const auto& s : samples) {
                if (s.defined_up_to > j) xs.push_back(s[j]);
            }
            if (xs.empty()) continue;
            const auto b = box_stats(std::move(xs));
            out << i << ",T" << (j + 1) << ',' << samples.size() << ',' << num(b.min) << ','
                << num(b.q1) << ',' << num(b.median) << ',' << num(b.q3) << ',' << num(b.max)
                << ',' << num(rep.t_star[j]) << '\n';
        }
    }
    return out.str();
}

void write_file(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw InputError("cannot write " + file.string());
    out << text;
    if (!out) throw InputError("write failed: " + file.string());
}

std::string aligned(const std::vector<std::vector<std::string>>& rows) {
    std::vector<std::size_t> width;
    for (const auto& row : rows) {
        if (width.size() < row.size()) width.resize(row.size(), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            out << row[c];
            if (c + 1 < row.size()) out << std::string(width[c] - row[c].size() + 2, ' ');
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace regime::report
