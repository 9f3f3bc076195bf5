#include "regime/cli.hpp"

#include <filesystem>
#include <map>
#include <optional>

#include "CLI11.hpp"
#include "regime/config.hpp"
#include "regime/errors.hpp"
#include "regime/report.hpp"

namespace regime::cli {

namespace fs = std::filesystem;

namespace {

// Flags shared by the analysis subcommands. Optional values override the
// config file only when given.
struct Overrides {
    std::string config;
    std::vector<std::string> inputs;
    std::optional<std::string> family, side, out_dir, seed_mode, holding, k_grid, pplus, pminus;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    std::optional<double> delta, p_hat, p;
    std::optional<std::size_t> window, replicates;
    std::vector<std::string> settings;
    bool dump_paths = false, dump_boxplot = false, detail = false;
};

void add_common(CLI::App* app, Overrides& o) {
    app->add_option("--config", o.config, "key = value configuration file");
    app->add_option("--input,-i", o.inputs, "price CSV (repeatable)");
    app->add_option("--family", o.family, "uni|markov|semimarkov|all");
    app->add_option("--side", o.side, "plus|minus|both");
    app->add_option("--seed", o.seed, "master seed");
    app->add_option("--seed-mode", o.seed_mode, "independent|common");
    app->add_option("--workers", o.workers, "worker threads (0 = all)");
    app->add_option("--out-dir", o.out_dir, "output directory");
    app->add_option("--delta", o.delta, "sampling interval in years");
    app->add_option("--p-hat", o.p_hat, "jump false-flag probability");
    app->add_option("--p", o.p, "squeeze/expansion tail fraction");
    app->add_option("--window", o.window, "moving window length n");
    app->add_option("--replicates,-B", o.replicates, "surrogates per model");
    app->add_option("--holding-days", o.holding, "holding grid, e.g. 1..15");
    app->add_option("--k-grid", o.k_grid, "gamma shape grid, e.g. 0.5,1..16");
    app->add_option("--percent-plus", o.pplus, "percent grid for plus");
    app->add_option("--percent-minus", o.pminus, "percent grid for minus");
    app->add_option("--set", o.settings, "extra key=value setting (repeatable)");
    app->add_flag("--dump-paths", o.dump_paths, "write one surrogate path per model");
    app->add_flag("--dump-boxplot", o.dump_boxplot, "write surrogate box-plot summaries");
    app->add_flag("--detail", o.detail, "write per-model detail tables");
}

RunConfig resolve(const Overrides& o) {
    RunConfig cfg;
    if (!o.config.empty()) load_config_file(cfg, o.config);
    for (const auto& s : o.settings) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw ParameterError("--set expects key=value, got '" + s + "'");
        apply_setting(cfg, std::string_view(s).substr(0, eq), std::string_view(s).substr(eq + 1));
    }
    if (o.delta) cfg.delta = *o.delta;
    if (o.p_hat) cfg.p_hat = *o.p_hat;
    if (o.p) cfg.p = *o.p;
    if (o.window) cfg.window = *o.window;
    if (o.replicates) cfg.replicates = *o.replicates;
    if (o.holding) apply_setting(cfg, "holding_days", *o.holding);
    if (o.k_grid) apply_setting(cfg, "k_grid", *o.k_grid);
    if (o.pplus) apply_setting(cfg, "percent_plus", *o.pplus);
    if (o.pminus) apply_setting(cfg, "percent_minus", *o.pminus);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.seed_mode) apply_setting(cfg, "seed_mode", *o.seed_mode);
    if (o.workers) cfg.workers = *o.workers;
    if (o.out_dir) cfg.out_dir = *o.out_dir;
    if (o.family) cfg.families = parse_families(*o.family);
    if (o.side) cfg.sides = parse_sides(*o.side);
    if (!o.inputs.empty()) cfg.inputs.assign(o.inputs.begin(), o.inputs.end());
    cfg.dump_paths = cfg.dump_paths || o.dump_paths;
    cfg.dump_boxplot = cfg.dump_boxplot || o.dump_boxplot;
    cfg.detail = cfg.detail || o.detail;
    cfg.validate();
    if (cfg.inputs.empty()) throw ParameterError("no input files given");
    return cfg;
}

// Everything derived from one price file before any surrogate is drawn.
struct Analysed {
    std::string label;
    ReturnSeries ret;
    JumpEstimates jumps;
    EmpiricalSummary summary;
};

std::string label_for(const fs::path& p, std::size_t index, const std::vector<std::string>& seen) {
    std::string label = p.stem().string();
    if (label.empty()) label = "series";
    for (const auto& s : seen) {
        if (s == label) return label + "_" + std::to_string(index);
    }
    return label;
}

std::vector<Analysed> analyse_inputs(const RunConfig& cfg) {
    std::vector<Analysed> out;
    std::vector<std::string> seen;
    for (std::size_t i = 0; i < cfg.inputs.size(); ++i) {
        const auto label = label_for(cfg.inputs[i], i, seen);
        seen.push_back(label);
        const auto prices = load_prices(cfg.inputs[i], cfg.delta, label);
        Analysed a;
        a.label = label;
        a.ret = simple_returns(prices);
        a.jumps = estimate_jump_params(a.ret, cfg.p_hat, cfg.jump_iterations);
        const auto vol = moving_stats(strip_jumps(a.ret, a.jumps.c_hat), cfg.window, cfg.delta);
        a.summary = summarize(vol, a.jumps, cfg.p, a.ret.size());
        out.push_back(std::move(a));
    }
    return out;
}

void ensure_dir(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create directory " + dir.string() + ": " + ec.message());
}

// CSV text to aligned terminal text.
std::string as_table(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        auto nl = csv.find('\n', pos);
        if (nl == std::string::npos) nl = csv.size();
        std::vector<std::string> cells;
        std::string cell;
        bool quoted = false;
        for (std::size_t i = pos; i < nl; ++i) {
            const char c = csv[i];
            if (c == '"') quoted = !quoted;
            else if (c == ',' && !quoted) cells.push_back(std::move(cell)), cell.clear();
            else cell += c;
        }
        cells.push_back(std::move(cell));
        rows.push_back(std::move(cells));
        pos = nl + 1;
    }
    return report::aligned(rows);
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& csv, std::ostream& out) {
    report::write_file(cfg.out_dir / name, csv);
    out << "# " << name << '\n' << as_table(csv) << '\n';
}

int cmd_estimate(const RunConfig& cfg, std::ostream& out) {
    ensure_dir(cfg.out_dir);
    const auto series = analyse_inputs(cfg);
    std::string csv = "label,beta_hat,lambda_hat,v,mu_bar,sigma_bar,jumps,iterations\n";
    for (const auto& a : series) {
        csv += a.label + ',' + report::num(a.jumps.beta_hat) + ',' + report::num(a.jumps.lambda_hat) +
               ',' + report::num(a.jumps.v) + ',' + report::num(a.summary.mu_bar) + ',' +
               report::num(a.summary.sigma_bar) + ',' + std::to_string(a.jumps.jump_indices.size()) +
               ',' + std::to_string(a.jumps.iterations_used) + '\n';
    }
    emit(cfg, "params.csv", csv, out);
    return kOk;
}

std::string tstar_row(const std::string& label, Side side, const TStat& t) {
    std::string row = label + ',' + to_string(side) + ',' + std::to_string(t.length);
    for (int j = 0; j < kMaxComponents; ++j) row += ',' + report::num(t[j]);
    return row + '\n';
}

int cmd_tstar(const RunConfig& cfg, std::ostream& out) {
    ensure_dir(cfg.out_dir);
    const auto series = analyse_inputs(cfg);
    std::string csv = "label,side,L,t1,t2,t3,t4\n";
    for (const auto& a : series) {
        for (Side side : cfg.sides) {
            csv += tstar_row(a.label, side, observed_tstar(a.ret, a.jumps, cfg.window, cfg.p, side));
        }
    }
    emit(cfg, "tstar.csv", csv, out);
    return kOk;
}

void dump_paths(const RunConfig& cfg, const Analysed& a, const HypothesisSpec& spec) {
    const auto dir = cfg.out_dir / "paths";
    ensure_dir(dir);
    const auto family = build_family(a.summary, spec).first;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto path = simulate_model(family[i], a.summary.n_steps, a.summary.delta, 1.0, spec.x0,
                                         surrogate_seed(spec, i, 0, 0));
        write_path_csv(path, dir / (a.label + "_" + to_string(spec.family) + "_" +
                                    to_string(spec.side) + "_theta" + std::to_string(i) + ".csv"));
    }
}

int cmd_test(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    ensure_dir(cfg.out_dir);
    const auto series = analyse_inputs(cfg);

    // reports[label][(family, side)]
    std::vector<std::map<ReportKey, TestReport>> reports(series.size());
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto& a = series[s];
        for (Side side : cfg.sides) {
            const auto t_star = observed_tstar(a.ret, a.jumps, cfg.window, cfg.p, side);
            for (Family family : cfg.families) {
                const auto spec = cfg.hypothesis(family, side);
                auto rep = run_test(a.summary, t_star, spec, cfg.workers);
                for (const auto& t : rep.per_theta) {
                    if (t.unreliable) {
                        err << "warning: " << a.label << ' ' << to_string(family) << ' '
                            << to_string(side) << ": model '" << describe(t.theta) << "' discarded "
                            << t.discarded << " of " << spec.replicates << " surrogates\n";
                    }
                }
                const std::string tag =
                    a.label + "_" + to_string(family) + "_" + to_string(side) + ".csv";
                if (cfg.detail) {
                    std::vector<ModelParams> thetas;
                    for (const auto& t : rep.per_theta) thetas.push_back(t.theta);
                    report::write_file(cfg.out_dir / ("theta_" + tag), report::theta_detail_csv(rep));
                    report::write_file(cfg.out_dir / ("family_" + tag), report::family_csv(thetas));
                }
                if (cfg.dump_boxplot) {
                    report::write_file(cfg.out_dir / ("boxplot_" + tag), report::boxplot_csv(rep));
                }
                if (cfg.dump_paths) dump_paths(cfg, a, spec);
                reports[s].emplace(ReportKey{family, side}, std::move(rep));
            }
        }
    }

    for (Family family : cfg.families) {
        std::vector<report::AlphaRow> rows;
        for (std::size_t s = 0; s < series.size(); ++s) {
            report::AlphaRow row;
            row.label = series[s].label;
            if (auto it = reports[s].find({family, Side::plus}); it != reports[s].end()) {
                row.plus = &it->second;
            }
            if (auto it = reports[s].find({family, Side::minus}); it != reports[s].end()) {
                row.minus = &it->second;
            }
            rows.push_back(row);
        }
        emit(cfg, std::string("alpha_") + to_string(family) + ".csv", report::alpha_table_csv(rows),
             out);
    }

    std::string best = "label,family,class,alpha4,confidence,ambiguous\n";
    for (std::size_t s = 0; s < series.size(); ++s) {
        const auto fit = summarize_best_fit(reports[s]);
        best += series[s].label + ',' + to_string(fit.family) + ',' + class_label(fit.side) + ',' +
                report::alpha(fit.alpha4) + ',' + report::num(fit.confidence_percent) + ',' +
                (fit.ambiguous ? "1" : "0") + '\n';
    }
    emit(cfg, "best_fit.csv", best, out);
    return kOk;
}

struct SimOptions {
    std::string model = "gbm";
    double mu = 0.0, beta = 0.1;
    double sigma1 = 0.05, sigma2 = 0.15;
    double mean1_days = 3.0, mean2_days = 17.0;
    double k = 1.0;
    double jump_lambda = 0.0, jump_v = 0.0;
    std::size_t steps = 18000;
    double s0 = 100.0;
    double delta = 5.0 / (250.0 * 360.0);
    double years_per_day = kYearsPerTradingDay;
    std::uint64_t seed = 1;
    std::string initial = "stationary";
    std::string output = "path.csv";
};

int cmd_simulate(const SimOptions& o, std::ostream& out, std::ostream& err) {
    if (o.steps < 1) throw ParameterError("--steps must be >= 1");
    if (!(o.delta > 0.0)) throw ParameterError("--delta must be positive");
    InitialRegime x0 = InitialRegime::stationary;
    if (o.initial == "1") x0 = InitialRegime::state1;
    else if (o.initial == "2") x0 = InitialRegime::state2;
    else if (o.initial != "stationary") throw ParameterError("--initial must be stationary, 1 or 2");

    const SeedSpec seed{o.seed, 0, 0};
    const UniRegimeParams uni{o.mu, o.beta, o.beta == 0.0};
    SimPath path;
    if (o.model == "gbm") {
        path = simulate_gbm(uni, o.steps, o.delta, o.s0, seed);
    } else if (o.model == "jump") {
        path = simulate_jump_diffusion(uni, o.jump_lambda, o.jump_v, o.steps, o.delta, o.s0, seed);
    } else if (o.model == "markov" || o.model == "semimarkov") {
        if (!(o.mean1_days > 0.0 && o.mean2_days > 0.0)) {
            throw ParameterError("mean sojourns must be positive");
        }
        if (!(o.k > 0.0)) throw ParameterError("--k must be positive");
        const double m1 = o.mean1_days * o.years_per_day;
        const double m2 = o.mean2_days * o.years_per_day;
        const Side side = o.sigma1 <= o.sigma2 ? Side::plus : Side::minus;
        if (o.model == "markov") {
            path = simulate_markov_glp({o.mu, o.mu, o.sigma1, o.sigma2, 1.0 / m1, 1.0 / m2, side},
                                       o.steps, o.delta, o.s0, x0, seed);
        } else {
            path = simulate_semimarkov_glp(
                {o.mu, o.mu, o.sigma1, o.sigma2, o.k / m1, o.k / m2, o.k, o.k, side}, o.steps,
                o.delta, o.s0, x0, seed);
        }
    } else {
        throw ParameterError("unknown model '" + o.model + "' (gbm|jump|markov|semimarkov)");
    }
    for (const auto& w : path.warnings) err << "warning: " << w << '\n';
    write_path_csv(path, o.output);
    out << "wrote " << path.prices.size() << " prices to " << o.output << '\n';
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"regime-switching tests on price series", "regime-cli"};
    app.require_subcommand(1);

    Overrides est_o, tstar_o, test_o;
    auto* est = app.add_subcommand("estimate", "jump and volatility parameters per series");
    add_common(est, est_o);
    auto* tstar = app.add_subcommand("tstar", "observed duration statistic per series and side");
    add_common(tstar, tstar_o);
    auto* test = app.add_subcommand("test", "surrogate tests over model families");
    add_common(test, test_o);

    SimOptions sim_o;
    auto* sim = app.add_subcommand("simulate", "write a synthetic price path");
    sim->add_option("--model", sim_o.model, "gbm|jump|markov|semimarkov");
    sim->add_option("--mu", sim_o.mu);
    sim->add_option("--beta", sim_o.beta, "volatility of gbm and jump models");
    sim->add_option("--sigma1", sim_o.sigma1);
    sim->add_option("--sigma2", sim_o.sigma2);
    sim->add_option("--mean1-days", sim_o.mean1_days, "mean sojourn in state 1");
    sim->add_option("--mean2-days", sim_o.mean2_days, "mean sojourn in state 2");
    sim->add_option("--k", sim_o.k, "gamma shape (semimarkov)");
    sim->add_option("--jump-lambda", sim_o.jump_lambda, "jump intensity per year");
    sim->add_option("--jump-v", sim_o.jump_v, "jump size variance");
    sim->add_option("--steps", sim_o.steps);
    sim->add_option("--s0", sim_o.s0);
    sim->add_option("--delta", sim_o.delta);
    sim->add_option("--years-per-day", sim_o.years_per_day);
    sim->add_option("--seed", sim_o.seed);
    sim->add_option("--initial", sim_o.initial, "stationary|1|2");
    sim->add_option("--output,-o", sim_o.output);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        if (*est) return cmd_estimate(resolve(est_o), out);
        if (*tstar) return cmd_tstar(resolve(tstar_o), out);
        if (*test) return cmd_test(resolve(test_o), out, err);
        if (*sim) return cmd_simulate(sim_o, out, err);
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
        return kInputError;
    } catch (const ParameterError& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const PipelineError& e) {
        err << "error: " << e.what() << '\n';
        return kPipelineError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kPipelineError;
    }
    return kConfigError;
}

}  // namespace regime::cli
