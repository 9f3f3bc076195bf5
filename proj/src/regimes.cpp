#include "regime/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "regime/errors.hpp"
#include "regime/numeric.hpp"

namespace regime {

const char* to_string(Family f) noexcept {
    switch (f) {
        case Family::uni: return "uni";
        case Family::markov: return "markov";
        case Family::semimarkov: return "semimarkov";
    }
    return "?";
}

EmpiricalSummary summarize(const VolSeries& vol, const JumpEstimates& jumps, double p,
                           std::size_t n_steps) {
    if (vol.sigma_hat.empty()) throw ParameterError("summarize: empty volatility series");
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("summarize: p must lie in (0, 1)");

    EmpiricalSummary s;
    s.mu_bar = numeric::mean(vol.mu_hat);
    s.sigma_bar = numeric::mean(vol.sigma_hat);
    s.lambda_hat = jumps.lambda_hat;
    s.v = jumps.v;
    s.p = p;
    s.delta = vol.delta;
    s.n_steps = n_steps;

    std::vector<double> sorted(vol.sigma_hat);
    std::sort(sorted.begin(), sorted.end());
    for (int q = 1; q < 100; ++q) {
        s.sigma_percentiles[q] = percentile_sorted(sorted, q / 100.0);
    }
    s.sigma_percentiles[100] = sorted.back();
    s.level_low = percentile_sorted(sorted, p);
    s.level_high = percentile_sorted(sorted, 1.0 - p);
    return s;
}

UniRegimeParams uni_regime_fit(const EmpiricalSummary& summary) {
    return UniRegimeParams{summary.mu_bar, summary.sigma_bar, summary.sigma_bar == 0.0};
}

std::vector<int> default_percent_grid(double p, Side side) {
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("percent grid: p must lie in (0, 1)");
    std::vector<int> grid;
    if (side == Side::plus) {
        const int hi = static_cast<int>(std::floor(100.0 * p + 1e-9));
        for (int q = 1; q <= hi; ++q) grid.push_back(q);
    } else {
        const int lo = static_cast<int>(std::ceil(100.0 * (1.0 - p) - 1e-9));
        for (int q = std::max(lo, 1); q <= 100; ++q) grid.push_back(q);
    }
    return grid;
}

namespace {

bool rel_close(double a, double b, double tol) {
    return std::abs(a - b) <= tol * std::max({std::abs(a), std::abs(b), 1e-300});
}

void check_common_inputs(const EmpiricalSummary& summary, double p,
                         const std::vector<double>& holding_grid,
                         const std::vector<int>& percent_grid, Side side, double years_per_unit) {
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("family: p must lie in (0, 1)");
    if (holding_grid.empty() || percent_grid.empty()) {
        throw ParameterError("family: holding and percent grids must be non-empty");
    }
    if (!(summary.sigma_bar > 0.0)) {
        throw PipelineError("family: regime classes need non-constant volatility (sigma_bar > 0)");
    }
    if (!(years_per_unit > 0.0)) throw ParameterError("family: years_per_unit must be positive");
    for (double h : holding_grid) {
        if (!(h > 0.0)) throw ParameterError("family: holding times must be positive");
    }
    const auto allowed = default_percent_grid(p, side);
    for (int q : percent_grid) {
        if (std::find(allowed.begin(), allowed.end(), q) == allowed.end()) {
            throw ParameterError("family: percent " + std::to_string(q) +
                                 " is inconsistent with side " + to_string(side));
        }
        if (!summary.sigma_percentiles.contains(q)) {
            throw ParameterError("family: summary lacks percentile " + std::to_string(q));
        }
    }
}

void check_volatility(double sigma1, double sigma2, double mu1, double mu2, Side side,
                      const EmpiricalSummary& s, double p) {
    if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) {
        throw ParameterError("regime params: volatilities must be positive");
    }
    if (!rel_close(p * sigma1 + (1.0 - p) * sigma2, s.sigma_bar, 1e-12)) {
        throw ParameterError("regime params: volatility relation violated");
    }
    if (!rel_close(p * mu1 + (1.0 - p) * mu2, s.mu_bar, 1e-12) &&
        std::abs(p * mu1 + (1.0 - p) * mu2 - s.mu_bar) > 1e-15) {
        throw ParameterError("regime params: drift relation violated");
    }
    if (side == Side::plus && sigma1 > s.level_low) {
        throw ParameterError("regime params: sigma1 above the p-percentile for side plus");
    }
    if (side == Side::minus && sigma1 < s.level_high) {
        throw ParameterError("regime params: sigma1 below the (1-p)-percentile for side minus");
    }
}

}  // namespace

void validate(const MarkovRegimeParams& m, const EmpiricalSummary& s, double p) {
    if (!(m.lambda1 > 0.0) || !(m.lambda2 > 0.0)) {
        throw ParameterError("markov params: rates must be positive");
    }
    if (!rel_close(m.lambda1, (1.0 / p - 1.0) * m.lambda2, 1e-12)) {
        throw ParameterError("markov params: occupation constraint violated");
    }
    check_volatility(m.sigma1, m.sigma2, m.mu1, m.mu2, m.side, s, p);
}

void validate(const SemiMarkovRegimeParams& m, const EmpiricalSummary& s, double p) {
    if (!(m.lambda1 > 0.0) || !(m.lambda2 > 0.0) || !(m.k1 > 0.0) || m.k1 != m.k2) {
        throw ParameterError("semi-markov params: need positive rates and k1 == k2 > 0");
    }
    const double e1 = m.k1 / m.lambda1;
    const double e2 = m.k2 / m.lambda2;
    if (!rel_close(e1 / (e1 + e2), p, 1e-12)) {
        throw ParameterError("semi-markov params: mean sojourn constraint violated");
    }
    check_volatility(m.sigma1, m.sigma2, m.mu1, m.mu2, m.side, s, p);
}

FamilyBuild<MarkovRegimeParams> markov_family(const EmpiricalSummary& summary, double p,
                                              const std::vector<double>& holding_grid,
                                              const std::vector<int>& percent_grid, Side side,
                                              double years_per_unit) {
    check_common_inputs(summary, p, holding_grid, percent_grid, side, years_per_unit);
    FamilyBuild<MarkovRegimeParams> out;
    for (double h : holding_grid) {
        for (int q : percent_grid) {
            MarkovRegimeParams m;
            m.side = side;
            m.mu1 = m.mu2 = summary.mu_bar;
            m.lambda1 = 1.0 / (h * years_per_unit);
            m.lambda2 = m.lambda1 / (1.0 / p - 1.0);
            m.sigma1 = summary.sigma_percentiles.at(q);
            m.sigma2 = (summary.sigma_bar - p * m.sigma1) / (1.0 - p);
            if (!(m.sigma2 > 0.0) || !(m.sigma1 > 0.0)) {
                out.dropped.push_back({h, q, 1.0, m.sigma1, m.sigma2});
                continue;
            }
            validate(m, summary, p);
            out.members.push_back(m);
        }
    }
    if (out.members.empty()) throw PipelineError("markov_family: empty family (all points dropped)");
    return out;
}

FamilyBuild<SemiMarkovRegimeParams> semi_markov_family(
    const EmpiricalSummary& summary, double p, const std::vector<double>& holding_grid,
    const std::vector<int>& percent_grid, const std::vector<double>& k_grid, Side side,
    double years_per_unit) {
    check_common_inputs(summary, p, holding_grid, percent_grid, side, years_per_unit);
    if (k_grid.empty()) throw ParameterError("semi_markov_family: k grid must be non-empty");
    for (double k : k_grid) {
        if (!(k > 0.0)) throw ParameterError("semi_markov_family: shapes must be positive");
    }
    FamilyBuild<SemiMarkovRegimeParams> out;
    for (double h : holding_grid) {
        for (int q : percent_grid) {
            for (double k : k_grid) {
                SemiMarkovRegimeParams m;
                m.side = side;
                m.mu1 = m.mu2 = summary.mu_bar;
                m.k1 = m.k2 = k;
                const double mean1 = h * years_per_unit;
                m.lambda1 = k / mean1;
                m.lambda2 = k / ((1.0 / p - 1.0) * mean1);
                m.sigma1 = summary.sigma_percentiles.at(q);
                m.sigma2 = (summary.sigma_bar - p * m.sigma1) / (1.0 - p);
                if (!(m.sigma2 > 0.0) || !(m.sigma1 > 0.0)) {
                    out.dropped.push_back({h, q, k, m.sigma1, m.sigma2});
                    continue;
                }
                validate(m, summary, p);
                out.members.push_back(m);
            }
        }
    }
    if (out.members.empty()) {
        throw PipelineError("semi_markov_family: empty family (all points dropped)");
    }
    return out;
}

double gamma_hazard(double y, double k, double lambda) {
    if (!(k > 0.0) || !(lambda > 0.0) || y < 0.0 || std::isnan(y)) {
        throw ParameterError("gamma_hazard: requires k > 0, lambda > 0, y >= 0");
    }
    if (k == 1.0) return lambda;
    if (y == 0.0) {
        if (k < 1.0) throw ParameterError("gamma_hazard: infinite hazard at zero age for k < 1");
        return 0.0;
    }
    const double x = lambda * y;
    const double log_q = numeric::log_gamma_q(k, x);
    return lambda * std::exp((k - 1.0) * std::log(x) - x - std::lgamma(k) - log_q);
}

std::string describe(const ModelParams& m) {
    char buf[256];
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, UniRegimeParams>) {
                std::snprintf(buf, sizeof buf, "uni mu=%.6g beta=%.6g", v.mu, v.beta);
            } else if constexpr (std::is_same_v<T, MarkovRegimeParams>) {
                std::snprintf(buf, sizeof buf,
                              "markov %s mu=%.6g sigma1=%.6g sigma2=%.6g lambda1=%.6g lambda2=%.6g",
                              to_string(v.side), v.mu1, v.sigma1, v.sigma2, v.lambda1, v.lambda2);
            } else {
                std::snprintf(buf, sizeof buf,
                              "semimarkov %s mu=%.6g sigma1=%.6g sigma2=%.6g lambda1=%.6g "
                              "lambda2=%.6g k=%.6g",
                              to_string(v.side), v.mu1, v.sigma1, v.sigma2, v.lambda1, v.lambda2,
                              v.k1);
            }
        },
        m);
    return buf;
}

}  // namespace regime
