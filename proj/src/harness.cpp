#include "regime/harness.hpp"

#include <algorithm>
#include <exception>

#include "regime/errors.hpp"
#include "regime/volatility.hpp"

namespace regime {

TStat observed_tstar(const ReturnSeries& ret, const JumpEstimates& jumps, std::size_t window,
                     double p, Side side) {
    const auto rhat = strip_jumps(ret, jumps.c_hat);
    const auto vol = moving_stats(rhat, window, ret.delta);
    const auto d = durations(vol.sigma_hat, p, side);
    if (d.length() < 2) {
        throw PipelineError(std::string("insufficient durations: ") + std::to_string(d.length()) +
                            " completed " + (side == Side::plus ? "squeezes" : "expansions") +
                            " over " + std::to_string(vol.size()) + " volatility points (threshold " +
                            std::to_string(d.threshold) + ")");
    }
    return t_statistics(d);
}

std::pair<std::vector<ModelParams>, std::vector<DroppedPoint>> build_family(
    const EmpiricalSummary& summary, const HypothesisSpec& spec) {
    std::vector<ModelParams> members;
    std::vector<DroppedPoint> dropped;
    const auto percents =
        spec.percent_grid.empty() ? default_percent_grid(spec.p, spec.side) : spec.percent_grid;
    switch (spec.family) {
        case Family::uni:
            members.emplace_back(uni_regime_fit(summary));
            break;
        case Family::markov: {
            auto fam = markov_family(summary, spec.p, spec.holding_grid, percents, spec.side,
                                     spec.years_per_unit);
            members.assign(fam.members.begin(), fam.members.end());
            dropped = std::move(fam.dropped);
            break;
        }
        case Family::semimarkov: {
            auto fam = semi_markov_family(summary, spec.p, spec.holding_grid, percents, spec.k_grid,
                                          spec.side, spec.years_per_unit);
            members.assign(fam.members.begin(), fam.members.end());
            dropped = std::move(fam.dropped);
            break;
        }
    }
    return {std::move(members), std::move(dropped)};
}

SeedSpec surrogate_seed(const HypothesisSpec& spec, std::size_t theta_index, std::size_t slot,
                        int attempt) {
    SeedSpec s;
    s.master_seed = spec.master_seed;
    s.theta_index =
        spec.seed_mode == SeedMode::independent ? static_cast<std::uint32_t>(theta_index) : 0u;
    s.replicate_index =
        static_cast<std::uint32_t>(static_cast<std::size_t>(attempt) * spec.replicates + slot);
    return s;
}

std::optional<TStat> surrogate_statistic(const ModelParams& theta, const EmpiricalSummary& summary,
                                         const HypothesisSpec& spec, const SeedSpec& seed) {
    const auto path = simulate_model(theta, summary.n_steps, summary.delta, 1.0, spec.x0, seed);
    std::vector<double> r(path.prices.size() - 1);
    for (std::size_t i = 1; i < path.prices.size(); ++i) {
        r[i - 1] = (path.prices[i] - path.prices[i - 1]) / path.prices[i - 1];
    }
    const auto ret = make_return_series(std::move(r), summary.delta);
    const auto vol = moving_stats(ret, spec.window, summary.delta);
    const auto d = durations(vol.sigma_hat, spec.p, spec.side);
    if (d.empty()) return std::nullopt;
    auto t = t_statistics(d);
    if (t.defined_up_to < spec.r_max) return std::nullopt;
    return t;
}

namespace {

struct SlotOutcome {
    TStat stat;
    bool ok = false;
};

SlotOutcome run_slot(const ModelParams& theta, std::size_t theta_index, std::size_t slot,
                     const EmpiricalSummary& summary, const HypothesisSpec& spec) {
    for (int attempt = 0; attempt <= spec.max_retries; ++attempt) {
        auto t = surrogate_statistic(theta, summary, spec,
                                     surrogate_seed(spec, theta_index, slot, attempt));
        if (t) return {*t, true};
    }
    return {};
}

void check_spec(const EmpiricalSummary& summary, const TStat& t_star, const HypothesisSpec& spec) {
    if (spec.replicates < 2) throw ParameterError("run_test: B must be >= 2");
    if (spec.r_max < 1 || spec.r_max > kMaxComponents) {
        throw ParameterError("run_test: r_max must be in 1..4");
    }
    if (spec.max_retries < 0) throw ParameterError("run_test: max_retries must be >= 0");
    if (summary.n_steps < spec.window) {
        throw ParameterError("run_test: data shorter than the volatility window");
    }
    if (t_star.defined_up_to < spec.r_max) {
        throw PipelineError("run_test: observed statistic is not defined up to r_max");
    }
}

// Folds per-slot outcomes (in slot order) into a ThetaResult.
ThetaResult merge_theta(const ModelParams& theta, std::span<const SlotOutcome> slots,
                        const TStat& t_star, const HypothesisSpec& spec) {
    ThetaResult res;
    res.theta = theta;
    std::vector<TStat> kept;
    kept.reserve(slots.size());
    for (const auto& s : slots) {
        if (s.ok) {
            kept.push_back(s.stat);
        } else {
            ++res.discarded;
        }
    }
    res.used = kept.size();
    res.unreliable = static_cast<double>(res.discarded) > 0.1 * static_cast<double>(spec.replicates);
    if (!kept.empty()) {
        res.counts = rank_counts(t_star, kept, spec.r_max);
        res.alpha = alphas_from_counts(res.counts, kept.size());
        // Components beyond r_max carry the r_max value.
        for (int j = spec.r_max; j < kMaxComponents; ++j) {
            res.alpha[static_cast<std::size_t>(j)] = res.alpha[static_cast<std::size_t>(spec.r_max - 1)];
        }
    }
    if (spec.keep_samples) res.samples = std::move(kept);
    return res;
}

TestReport assemble(const TStat& t_star, const HypothesisSpec& spec, std::vector<ModelParams> family,
                    std::vector<DroppedPoint> dropped, const std::vector<SlotOutcome>& outcomes) {
    TestReport rep;
    rep.family = spec.family;
    rep.side = spec.side;
    rep.t_star = t_star;
    rep.dropped = std::move(dropped);
    const std::size_t b = spec.replicates;
    for (std::size_t t = 0; t < family.size(); ++t) {
        rep.per_theta.push_back(merge_theta(
            family[t], std::span<const SlotOutcome>(outcomes).subspan(t * b, b), t_star, spec));
    }
    for (std::size_t j = 0; j < kMaxComponents; ++j) {
        std::map<int, double> per;
        for (std::size_t t = 0; t < rep.per_theta.size(); ++t) {
            per[static_cast<int>(t)] = rep.per_theta[t].alpha[j];
        }
        const auto c = alpha_composite(per);
        rep.composite[j] = c.alpha;
        rep.confidence[j] = c.confidence_percent;
        rep.argmax[j] = c.argmax;
    }
    return rep;
}

}  // namespace

TestReport run_test_on(const EmpiricalSummary& summary, const TStat& t_star,
                       const HypothesisSpec& spec, std::vector<ModelParams> family, int workers,
                       std::vector<DroppedPoint> dropped) {
    check_spec(summary, t_star, spec);
    if (family.empty()) throw PipelineError("run_test: empty family");

    const std::size_t b = spec.replicates;
    const std::size_t tasks = family.size() * b;
    std::vector<SlotOutcome> outcomes(tasks);
    std::exception_ptr failure;
    const int threads = std::max(workers, 1);

    // Each task owns its output slot and derives its own stream, so the
    // schedule cannot affect the result.
#pragma omp parallel for schedule(dynamic, 4) num_threads(threads)
    for (std::size_t task = 0; task < tasks; ++task) {
        try {
            const std::size_t t = task / b;
            outcomes[task] = run_slot(family[t], t, task % b, summary, spec);
        } catch (...) {
#pragma omp critical(regime_run_test_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return assemble(t_star, spec, std::move(family), std::move(dropped), outcomes);
}

TestReport run_test(const EmpiricalSummary& summary, const TStat& t_star,
                    const HypothesisSpec& spec, int workers) {
    check_spec(summary, t_star, spec);
    auto [family, dropped] = build_family(summary, spec);
    return run_test_on(summary, t_star, spec, std::move(family), workers, std::move(dropped));
}

TestReport run_test_serial(const EmpiricalSummary& summary, const TStat& t_star,
                           const HypothesisSpec& spec) {
    check_spec(summary, t_star, spec);
    auto [family, dropped] = build_family(summary, spec);
    if (family.empty()) throw PipelineError("run_test: empty family");
    std::vector<SlotOutcome> outcomes;
    outcomes.reserve(family.size() * spec.replicates);
    for (std::size_t t = 0; t < family.size(); ++t) {
        for (std::size_t slot = 0; slot < spec.replicates; ++slot) {
            outcomes.push_back(run_slot(family[t], t, slot, summary, spec));
        }
    }
    return assemble(t_star, spec, std::move(family), std::move(dropped), outcomes);
}

const char* class_label(Side side) noexcept {
    return side == Side::plus ? "LVLP" : "HVLP";
}

BestFit summarize_best_fit(const std::map<ReportKey, TestReport>& reports) {
    if (reports.empty()) throw ParameterError("summarize_best_fit: no reports");
    double best = -1.0;
    for (const auto& [key, rep] : reports) best = std::max(best, rep.composite[3]);

    // Family enum order is the simplicity order: uni < markov < semimarkov.
    std::vector<ReportKey> tied;
    for (const auto& [key, rep] : reports) {
        if (rep.composite[3] == best) tied.push_back(key);
    }
    const Family simplest =
        std::min_element(tied.begin(), tied.end(), [](const auto& a, const auto& b) {
            return a.first < b.first;
        })->first;
    std::erase_if(tied, [&](const ReportKey& k) { return k.first != simplest; });

    BestFit out;
    out.alpha4 = best;
    out.confidence_percent = 100.0 * (1.0 - 2.0 * best);
    out.ambiguous = tied.size() > 1;
    // std::map order puts Side::plus first.
    const ReportKey chosen = tied.front();
    out.family = chosen.first;
    out.side = chosen.second;
    return out;
}

}  // namespace regime
