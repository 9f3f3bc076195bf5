#pragma once

#include "regime/harness.hpp"

namespace fixture {

inline constexpr double kDelta = 5.0 / (250.0 * 360.0);

struct Data {
    regime::ReturnSeries ret;
    regime::JumpEstimates jumps;
    regime::EmpiricalSummary summary;
};

inline regime::ReturnSeries returns_of(const regime::SimPath& path) {
    std::vector<double> r(path.prices.size() - 1);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] = path.prices[i + 1] / path.prices[i] - 1.0;
    return regime::make_return_series(std::move(r), path.delta);
}

// Data-side pipeline as the CLI runs it.
inline Data analyse(const regime::SimPath& path, std::size_t window = 20, double p = 0.15,
                    double p_hat = 2e-4) {
    Data d;
    d.ret = returns_of(path);
    d.jumps = regime::estimate_jump_params(d.ret, p_hat);
    const auto vol = regime::moving_stats(regime::strip_jumps(d.ret, d.jumps.c_hat), window, path.delta);
    d.summary = regime::summarize(vol, d.jumps, p, d.ret.size());
    return d;
}

}  // namespace fixture
