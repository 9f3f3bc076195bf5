#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "regime/errors.hpp"

using namespace regime;

namespace {

const fixture::Data& markov_data() {
    static const fixture::Data d = [] {
        const MarkovRegimeParams m{0.0, 0.0, 0.04, 0.12, 1.0 / (3 * 0.004), 1.0 / (17 * 0.004), Side::plus};
        return fixture::analyse(simulate_markov_glp(m, 9000, fixture::kDelta, 100.0,
                                                    InitialRegime::stationary, {31, 0, 0}));
    }();
    return d;
}

HypothesisSpec small_spec(Family f, Side side) {
    HypothesisSpec s;
    s.family = f;
    s.side = side;
    s.replicates = 12;
    s.holding_grid = {2, 6};
    s.percent_grid = side == Side::plus ? std::vector<int>{5, 10} : std::vector<int>{90, 95};
    s.k_grid = {1, 3};
    s.master_seed = 99;
    return s;
}

bool same(const TestReport& a, const TestReport& b) {
    if (a.per_theta.size() != b.per_theta.size()) return false;
    for (std::size_t i = 0; i < a.per_theta.size(); ++i) {
        const auto& x = a.per_theta[i];
        const auto& y = b.per_theta[i];
        if (x.counts != y.counts || x.alpha != y.alpha || x.used != y.used || x.discarded != y.discarded) {
            return false;
        }
        if (x.samples.size() != y.samples.size()) return false;
        for (std::size_t k = 0; k < x.samples.size(); ++k) {
            if (x.samples[k].t != y.samples[k].t) return false;
        }
    }
    return a.composite == b.composite && a.argmax == b.argmax;
}

}  // namespace

TEST_CASE("observed statistic") {
    const auto& d = markov_data();
    for (Side side : {Side::plus, Side::minus}) {
        const auto t = observed_tstar(d.ret, d.jumps, 20, 0.15, side);
        CHECK(t.defined_up_to == 4);
        CHECK(t.length >= 2);
        for (double x : t.t) CHECK(std::isfinite(x));
    }
    const auto flat = make_return_series(std::vector<double>(500, 0.0), fixture::kDelta);
    CHECK_THROWS_AS(observed_tstar(flat, estimate_jump_params(flat, 2e-4), 20, 0.15, Side::plus),
                    PipelineError);
}

TEST_CASE("parallel and serial runs agree") {
    const auto& d = markov_data();
    for (Family f : {Family::uni, Family::markov, Family::semimarkov}) {
        for (Side side : {Side::plus, Side::minus}) {
            const auto spec = small_spec(f, side);
            const auto t = observed_tstar(d.ret, d.jumps, 20, 0.15, side);
            const auto ref = run_test_serial(d.summary, t, spec);
            for (int w : {1, 2, 3, 8}) CHECK(same(ref, run_test(d.summary, t, spec, w)));

            for (const auto& th : ref.per_theta) {
                for (std::size_t j = 1; j < kMaxComponents; ++j) CHECK(th.alpha[j] <= th.alpha[j - 1]);
            }
            for (std::size_t j = 0; j < kMaxComponents; ++j) {
                double mx = 0.0;
                for (const auto& th : ref.per_theta) mx = std::max(mx, th.alpha[j]);
                CHECK(ref.composite[j] == mx);
                CHECK(ref.confidence[j] == doctest::Approx(100 * (1 - 2 * mx)));
            }
        }
    }
}

TEST_CASE("family sizes") {
    const auto& d = markov_data();
    auto spec = small_spec(Family::markov, Side::plus);
    CHECK(build_family(d.summary, spec).first.size() == 4);
    spec.family = Family::semimarkov;
    CHECK(build_family(d.summary, spec).first.size() == 8);
    spec.family = Family::uni;
    CHECK(build_family(d.summary, spec).first.size() == 1);

    spec = small_spec(Family::markov, Side::plus);
    spec.holding_grid = {4};
    spec.percent_grid = {10};
    const auto t = observed_tstar(d.ret, d.jumps, 20, 0.15, Side::plus);
    CHECK(run_test(d.summary, t, spec, 1).per_theta.size() == 1);

    // sigma1 above sigma_bar / p empties the minus family
    auto s = d.summary;
    for (auto& [q, v] : s.sigma_percentiles) v = s.sigma_bar / 0.1;
    s.level_high = s.sigma_bar / 0.1;
    auto minus = small_spec(Family::markov, Side::minus);
    CHECK_THROWS_AS(build_family(s, minus), PipelineError);
}

TEST_CASE("nested families under common seeds") {
    const auto& d = markov_data();
    for (Side side : {Side::plus, Side::minus}) {
        auto spec = small_spec(Family::markov, side);
        spec.seed_mode = SeedMode::common;
        const auto t = observed_tstar(d.ret, d.jumps, 20, 0.15, side);
        const auto mk = run_test(d.summary, t, spec, 2);
        spec.family = Family::semimarkov;
        const auto sm = run_test(d.summary, t, spec, 2);
        for (std::size_t j = 0; j < kMaxComponents; ++j) CHECK(sm.composite[j] >= mk.composite[j]);
    }
}

TEST_CASE("seeds") {
    auto spec = small_spec(Family::markov, Side::plus);
    const auto a = surrogate_seed(spec, 3, 5, 0);
    const auto b = surrogate_seed(spec, 3, 5, 1);
    CHECK(a.theta_index == 3);
    CHECK(a.replicate_index == 5);
    CHECK(b.replicate_index == 5 + spec.replicates);
    spec.seed_mode = SeedMode::common;
    CHECK(surrogate_seed(spec, 3, 5, 0).theta_index == surrogate_seed(spec, 0, 5, 0).theta_index);
}

TEST_CASE("best fit summary") {
    auto rep = [](Family f, Side s, double a4) {
        TestReport r;
        r.family = f;
        r.side = s;
        r.composite = {0.5, 0.5, 0.5, a4};
        return r;
    };
    std::map<ReportKey, TestReport> m;
    m[{Family::markov, Side::plus}] = rep(Family::markov, Side::plus, 0.025);
    m[{Family::semimarkov, Side::plus}] = rep(Family::semimarkov, Side::plus, 0.185);
    m[{Family::markov, Side::minus}] = rep(Family::markov, Side::minus, 0.385);
    m[{Family::semimarkov, Side::minus}] = rep(Family::semimarkov, Side::minus, 0.385);
    auto b = summarize_best_fit(m);
    CHECK(b.family == Family::markov);
    CHECK(b.side == Side::minus);
    CHECK(std::string(class_label(b.side)) == "HVLP");
    CHECK(b.confidence_percent == doctest::Approx(23.0));
    CHECK_FALSE(b.ambiguous);

    for (auto& [k, r] : m) r.composite[3] = 0.2;
    b = summarize_best_fit(m);
    CHECK(b.family == Family::markov);
    CHECK(b.ambiguous);

    std::map<ReportKey, TestReport> one;
    one[{Family::semimarkov, Side::minus}] = rep(Family::semimarkov, Side::minus, 0.1);
    b = summarize_best_fit(one);
    CHECK(b.family == Family::semimarkov);
    CHECK(b.side == Side::minus);
    CHECK(b.alpha4 == 0.1);
}
