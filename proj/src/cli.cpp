#include "herdsim/cli.hpp"

#include "herdsim/config.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace herdsim {

namespace {

using ojson = nlohmann::ordered_json;

std::string fmt_double(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << text;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + out_path + "'");
    f << text;
}

struct CommonOpts {
    std::string config_path;
    int horizon = -1;            // -1: keep config value
    std::string numeric_mode;    // "", "exact", "float"
    std::string format;          // "", "json", "csv"
    long long seed = -1;
    std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_config = true) {
    if (with_config)
        cmd->add_option("config", opts.config_path, "path to a run configuration (JSON)")
            ->required();
    cmd->add_option("--horizon", opts.horizon, "override the configured horizon");
    cmd->add_option("--mode", opts.numeric_mode, "numeric mode: exact|float")
        ->check(CLI::IsMember({"exact", "float"}));
    cmd->add_option("--format", opts.format, "output format: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--seed", opts.seed, "override the configured PRNG seed");
    cmd->add_option("--out", opts.out_path, "write output to a file instead of stdout");
}

void warn_horizon(const RunConfig& cfg, std::ostream& err) {
    if (cfg.effective_horizon() > kHorizonSoftCap)
        err << "warning: horizon " << cfg.effective_horizon()
            << " exceeds the soft cap " << kHorizonSoftCap
            << "; signal-path enumeration grows exponentially\n";
}

RunConfig load_with_overrides(const CommonOpts& opts) {
    RunConfig cfg = load_config(opts.config_path);
    if (opts.horizon >= 0) cfg.horizon = opts.horizon;
    if (opts.numeric_mode == "exact") cfg.numeric_mode = NumericMode::Exact;
    if (opts.numeric_mode == "float") cfg.numeric_mode = NumericMode::Float;
    if (opts.format == "json") cfg.format = OutputFormat::Json;
    if (opts.format == "csv") cfg.format = OutputFormat::Csv;
    if (opts.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opts.seed);
    return cfg;
}

std::string strategy_string(const Strategy& s) {
    std::string t;
    for (Act a : s.action) t.push_back(to_char(a));
    return t;
}

int cmd_validate(const CommonOpts& opts, std::ostream& out) {
    const RunConfig cfg = load_config(opts.config_path);
    const auto checks = SignalModel::validate(cfg.model);
    bool all_ok = true;
    std::ostringstream text;
    for (const auto& c : checks) {
        all_ok = all_ok && c.ok;
        text << (c.ok ? "PASS  " : "FAIL  ") << c.name << (c.structural ? "" : "  (assumption)")
             << "  [" << c.detail << "]\n";
    }
    text << (all_ok ? "model valid\n" : "model invalid\n");
    emit(text.str(), opts.out_path, out);
    return all_ok ? 0 : 1;
}

ojson update_json(const ActionUpdate& u) {
    ojson j;
    j["oddsFactor"] = format_rational(u.odds_factor);
    j["llr"] = u.on_path ? std::log(to_double(u.odds_factor)) : 0.0;
    j["onPath"] = u.on_path;
    return j;
}

int cmd_trace(const CommonOpts& opts, const std::string& history_text, std::ostream& out,
              std::ostream& err) {
    const RunConfig cfg = load_with_overrides(opts);
    warn_horizon(cfg, err);
    const History history = parse_history(history_text);
    const int horizon = cfg.effective_horizon();
    if (static_cast<int>(history.size()) >= horizon)
        throw std::invalid_argument("history length must stay below the horizon (" +
                                    std::to_string(horizon) + ")");
    const SignalModel model = SignalModel::build(cfg.model);
    const auto rows = trace(model, cfg.congestion, cfg.tiebreak, history);

    std::ostringstream text;
    if (cfg.format == OutputFormat::Csv) {
        text << "period,history,public_llr,public_odds,f,on_path,strategy,"
                "llr_after_L,llr_after_R,informative,herd,realized\n";
        for (const auto& r : rows) {
            text << r.period << ',' << format_history(r.history) << ','
                 << fmt_double(r.public_llr) << ',' << format_rational(r.public_odds) << ','
                 << format_rational(r.f) << ',' << (r.on_path ? 1 : 0) << ','
                 << strategy_string(r.strategy) << ','
                 << format_rational(r.public_odds * r.update_l.odds_factor) << ','
                 << format_rational(r.public_odds * r.update_r.odds_factor) << ','
                 << (r.informative ? 1 : 0) << ',' << (r.herd ? 1 : 0) << ','
                 << (r.realized ? std::string(1, to_char(*r.realized)) : std::string()) << '\n';
        }
    } else {
        ojson j;
        j["history"] = format_history(history);
        ojson jrows = ojson::array();
        for (const auto& r : rows) {
            ojson row;
            row["period"] = r.period;
            row["history"] = format_history(r.history);
            row["publicLlr"] = r.public_llr;
            row["publicOdds"] = format_rational(r.public_odds);
            row["f"] = format_rational(r.f);
            row["onPath"] = r.on_path;
            row["strategy"] = strategy_string(r.strategy);
            row["updateL"] = update_json(r.update_l);
            row["updateR"] = update_json(r.update_r);
            row["informative"] = r.informative;
            row["herd"] = r.herd;
            if (r.realized) row["realized"] = std::string(1, to_char(*r.realized));
            jrows.push_back(row);
        }
        j["rows"] = jrows;
        const DetectReport det =
            detect(model, cfg.congestion, cfg.tiebreak, history, horizon);
        ojson jd;
        jd["informative"] = det.informative;
        if (det.herd_start) jd["herdStart"] = *det.herd_start;
        if (det.cascade_start) jd["cascadeStart"] = *det.cascade_start;
        jd["cascadeCertified"] = det.cascade_certified;
        jd["uninformativeThroughHorizon"] = det.uninformative_through_horizon;
        jd["checkedHorizon"] = det.checked_horizon;
        j["detect"] = jd;
        text << j.dump(2) << '\n';
    }
    emit(text.str(), opts.out_path, out);
    return 0;
}

int cmd_check(const CommonOpts& opts, std::ostream& out) {
    const RunConfig cfg = load_with_overrides(opts);
    const SignalModel model = SignalModel::build(cfg.model);
    const ConditionReport report =
        check_conditions(model, cfg.congestion, cfg.effective_horizon());

    const bool use_float = cfg.numeric_mode == NumericMode::Float;
    bool all_hold = true;
    std::ostringstream text;
    for (const auto& r : report.results) {
        if (!r.applicable) {
            text << "N/A   " << r.name << "\n";
            continue;
        }
        const bool verdict = use_float ? r.holds_float : r.holds;
        all_hold = all_hold && verdict;
        text << (verdict ? "PASS  " : "FAIL  ") << r.name << "  product="
             << format_rational(r.product) << " (llr " << fmt_double(r.llr_sum) << ")";
        if (use_float && r.boundary_uncertain) text << "  [boundary-uncertain]";
        text << "\n";
    }
    text << "family conditions checked for i = 1.." << report.family_checked_up_to << "\n";
    for (const auto& e : report.implication_errors)
        text << "INTERNAL ERROR: implication violated: " << e << "\n";
    emit(text.str(), opts.out_path, out);
    if (!report.implication_errors.empty()) return 1;
    return all_hold ? 0 : 1;
}

int cmd_exact(const CommonOpts& opts, const std::string& event_text,
              const std::string& condition_text, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load_with_overrides(opts);
    warn_horizon(cfg, err);
    const SignalModel model = SignalModel::build(cfg.model);
    const EventSpec event = EventSpec::parse(event_text);
    std::optional<EventSpec> condition;
    if (!condition_text.empty()) condition = EventSpec::parse(condition_text);
    const ProbabilityResult res = exact_probability(model, cfg.congestion, cfg.tiebreak,
                                                    cfg.effective_horizon(), event, condition);
    std::ostringstream text;
    if (cfg.format == OutputFormat::Csv) {
        text << "event,condition,exact,float\n"
             << event.to_string() << ',' << (condition ? condition->to_string() : "") << ','
             << format_rational(res.exact) << ',' << fmt_double(res.value) << '\n';
    } else {
        ojson j;
        j["event"] = event.to_string();
        if (condition) j["condition"] = condition->to_string();
        j["exact"] = format_rational(res.exact);
        j["float"] = res.value;
        if (condition) {
            j["joint"] = format_rational(res.joint);
            j["conditionProbability"] = format_rational(res.condition_prob);
        }
        text << j.dump(2) << '\n';
    }
    emit(text.str(), opts.out_path, out);
    return 0;
}

int cmd_simulate(const CommonOpts& opts, const std::string& event_text, std::int64_t runs,
                 std::ostream& out, std::ostream& err) {
    const RunConfig cfg = load_with_overrides(opts);
    warn_horizon(cfg, err);
    const SignalModel model = SignalModel::build(cfg.model);
    const EventSpec event = EventSpec::parse(event_text);
    const MonteCarloResult res = monte_carlo(model, cfg.congestion, cfg.tiebreak,
                                             cfg.effective_horizon(), event, runs, cfg.seed);
    std::ostringstream text;
    if (cfg.format == OutputFormat::Csv) {
        text << "event,runs,hits,frequency,ci_low,ci_high,seed\n"
             << event.to_string() << ',' << res.runs << ',' << res.hits << ','
             << fmt_double(res.frequency) << ',' << fmt_double(res.ci_low) << ','
             << fmt_double(res.ci_high) << ',' << res.seed << '\n';
    } else {
        ojson j;
        j["event"] = event.to_string();
        j["runs"] = res.runs;
        j["hits"] = res.hits;
        j["frequency"] = res.frequency;
        j["ci95"] = ojson::array({res.ci_low, res.ci_high});
        j["seed"] = res.seed;
        text << j.dump(2) << '\n';
    }
    emit(text.str(), opts.out_path, out);
    return 0;
}

int cmd_discounted(const CommonOpts& opts, const std::string& delta_text, std::ostream& out,
                   std::ostream& err) {
    const RunConfig cfg = load_with_overrides(opts);
    warn_horizon(cfg, err);
    const SignalModel model = SignalModel::build(cfg.model);
    const Rat delta = parse_rational(delta_text);
    const DiscountedCorrectResult res = discounted_correct(
        model, cfg.congestion, cfg.tiebreak, cfg.effective_horizon(), delta);
    std::ostringstream text;
    ojson j;
    j["delta"] = format_rational(delta);
    j["horizon"] = cfg.effective_horizon();
    j["exact"] = format_rational(res.exact);
    j["float"] = res.value;
    ojson per = ojson::array();
    for (const auto& p : res.per_period) per.push_back(format_rational(p));
    j["perPeriodCorrect"] = per;
    text << j.dump(2) << '\n';
    emit(text.str(), opts.out_path, out);
    return 0;
}

GridSpec grid_from_json(const ojson& g) {
    GridSpec grid;
    const std::string variant = g.value("variant", "baseline4");
    if (variant == "appendix6")
        grid.variant = SignalVariant::Appendix6;
    else if (variant != "baseline4")
        throw ParseError("unknown grid variant '" + variant + "'");
    auto list = [&](const char* key) {
        std::vector<Rat> v;
        if (g.contains(key))
            for (const auto& item : g.at(key)) v.push_back(parse_rational(item.get<std::string>()));
        return v;
    };
    grid.p0 = list("p0");
    grid.pS = list("pS");
    grid.Q = list("Q");
    grid.q = list("q");
    grid.k = list("k");
    grid.ps = list("ps");
    grid.pSigma = list("pSigma");
    grid.eta = list("eta");
    const std::string mode = g.value("mode", "differ");
    grid.mode = mode == "conform" ? CongestionMode::Conform : CongestionMode::Differ;
    return grid;
}

int cmd_scan(const std::string& grid_path, const std::string& target, int horizon,
             const std::string& out_dir, int max_emit, const std::string& out_path,
             std::ostream& out) {
    std::ifstream in(grid_path);
    if (!in) throw ParseError("cannot open grid file '" + grid_path + "'");
    ojson g;
    try {
        in >> g;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("cannot parse grid: ") + e.what());
    }
    const GridSpec grid = grid_from_json(g);
    const ScanReport report = scan_parameters(grid, target, horizon);

    std::ostringstream text;
    ojson j;
    j["target"] = target;
    j["cellsTotal"] = report.total;
    j["cellsInvalid"] = report.invalid;
    j["cellsSatisfying"] = report.satisfied;
    ojson cells = ojson::array();
    int emitted = 0;
    for (const auto& cell : report.satisfying) {
        if (emitted >= max_emit) break;
        RunConfig cfg;
        cfg.model = cell.params;
        cfg.congestion.k = cell.k;
        cfg.congestion.mode = grid.mode;
        cfg.congestion.scope = grid.scope;
        const auto cfg_json = config_to_json(cfg);
        cells.push_back(ojson::parse(cfg_json.dump()));
        if (!out_dir.empty()) {
            char name[64];
            std::snprintf(name, sizeof(name), "/config_%04d.json", emitted);
            std::ofstream f(out_dir + name);
            if (!f) throw std::runtime_error("cannot write into '" + out_dir + "'");
            f << cfg_json.dump(2) << '\n';
        }
        ++emitted;
    }
    j["configs"] = cells;
    text << j.dump(2) << '\n';
    emit(text.str(), out_path, out);
    return 0;
}

void reproduce_line(std::ostringstream& text, const std::string& label, double reference,
                    const Rat& computed) {
    const double c = to_double(computed);
    text << label << ": reference " << fmt_double(reference) << ", computed "
         << format_rational(computed) << " (" << fmt_double(c) << "), |diff| "
         << fmt_double(std::fabs(c - reference)) << "\n";
}

int cmd_reproduce(const std::string& name, const std::string& out_path, std::ostream& out,
                  std::ostream& err) {
    if (name != "example1a" && name != "example1b" && name != "appendix") {
        err << "unknown reproduction '" << name
            << "' (valid names: example1a, example1b, appendix)\n";
        return 2;
    }
    const RunConfig cfg = bundled_config(name);
    const SignalModel model = SignalModel::build(cfg.model);
    CongestionSpec k0 = cfg.congestion;
    k0.k = 0;
    std::ostringstream text;
    text << "scenario " << name << "\n";

    if (name == "appendix") {
        const auto match2 = EventSpec::matches_predecessor(2);
        const auto inf3 = EventSpec::informative(3);
        const auto p_match_k0 =
            exact_probability(model, k0, cfg.tiebreak, cfg.effective_horizon(), match2);
        const auto p_match_k =
            exact_probability(model, cfg.congestion, cfg.tiebreak, cfg.effective_horizon(), match2);
        const auto p_inf_k0 =
            exact_probability(model, k0, cfg.tiebreak, cfg.effective_horizon(), inf3);
        const auto p_inf_k =
            exact_probability(model, cfg.congestion, cfg.tiebreak, cfg.effective_horizon(), inf3);
        reproduce_line(text, "P(a2 = a1), k = 0", 0.92, p_match_k0.exact);
        reproduce_line(text, "P(a2 = a1), k > 0", 0.94, p_match_k.exact);
        reproduce_line(text, "P(player 3 informative), k = 0", 0.08, p_inf_k0.exact);
        reproduce_line(text, "P(player 3 informative), k > 0", 1.0, p_inf_k.exact);
    } else {
        const auto& p = cfg.model;
        const Rat closed = (p.Q + p.q) * (p.Q + p.q) + (1 - p.Q - p.q) * (1 - p.Q - p.q);
        const auto inf3 = EventSpec::informative(3);
        const auto uninf_k0 =
            1 - exact_probability(model, k0, cfg.tiebreak, cfg.effective_horizon(), inf3).exact;
        const auto uninf_k =
            1 - exact_probability(model, cfg.congestion, cfg.tiebreak, cfg.effective_horizon(),
                                  inf3)
                    .exact;
        text << "closed form (Q+q)^2 + (1-Q-q)^2 = " << format_rational(closed) << " ("
             << fmt_double(to_double(closed)) << ")\n";
        reproduce_line(text, "P(player 3 uninformative), k = 0", 0.0, uninf_k0);
        reproduce_line(text, "P(player 3 uninformative), k = " + format_rational(cfg.congestion.k),
                       to_double(closed), uninf_k);
        if (uninf_k != closed) {
            const ConditionReport conds =
                check_conditions(model, cfg.congestion, cfg.effective_horizon());
            const auto* follow = conds.find("differ_p2_follows_own_signal");
            text << "note: reference value presumes differ_p2_follows_own_signal, which ";
            if (follow != nullptr && !follow->holds)
                text << "FAILS at these parameters (product "
                     << format_rational(follow->product) << ", needs < 1); see `check`\n";
            else
                text << "holds here; see `check` for the full report\n";
        }
    }
    emit(text.str(), out_path, out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact simulator for sequential observational learning with congestion"};
    app.require_subcommand(1);

    CommonOpts validate_o, trace_o, check_o, exact_o, sim_o, disc_o;
    std::string trace_history;
    std::string exact_event, exact_condition;
    std::string sim_event;
    std::int64_t sim_runs = 100000;
    std::string disc_delta = "9/10";
    std::string scan_grid, scan_target = "baseline_core", scan_outdir, scan_out;
    int scan_horizon = 8, scan_max_emit = 50;
    std::string repro_name, repro_out;

    auto* validate_cmd = app.add_subcommand("validate", "check a configuration's constraints");
    add_common(validate_cmd, validate_o);

    auto* trace_cmd = app.add_subcommand("trace", "public beliefs and strategies along a history");
    add_common(trace_cmd, trace_o);
    trace_cmd->add_option("--history", trace_history, "action history such as LRRL");

    auto* check_cmd = app.add_subcommand("check", "evaluate the equilibrium condition suite");
    add_common(check_cmd, check_o);

    auto* exact_cmd = app.add_subcommand("exact", "exact event probability by enumeration");
    add_common(exact_cmd, exact_o);
    exact_cmd->add_option("--event", exact_event, "event, e.g. herdstartedby:3")->required();
    exact_cmd->add_option("--condition", exact_condition, "conditioning event");

    auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo frequency of an event");
    add_common(sim_cmd, sim_o);
    sim_cmd->add_option("--event", sim_event, "event, e.g. herdstartedby:3")->required();
    sim_cmd->add_option("--n", sim_runs, "number of runs");

    auto* disc_cmd = app.add_subcommand("discounted", "discounted probability of correct decisions");
    add_common(disc_cmd, disc_o);
    disc_cmd->add_option("--delta", disc_delta, "discount factor in (0,1)");

    auto* scan_cmd = app.add_subcommand("scan", "scan a parameter grid for a condition set");
    scan_cmd->add_option("--grid", scan_grid, "grid file (JSON)")->required();
    scan_cmd->add_option("--target", scan_target, "condition set name (default baseline_core)");
    scan_cmd->add_option("--horizon", scan_horizon, "horizon for the family conditions");
    scan_cmd->add_option("--emit-dir", scan_outdir, "write satisfying configs to this directory");
    scan_cmd->add_option("--max-emit", scan_max_emit, "cap on emitted configs");
    scan_cmd->add_option("--out", scan_out, "write output to a file instead of stdout");

    auto* repro_cmd = app.add_subcommand("reproduce", "run a bundled reference scenario");
    repro_cmd->add_option("name", repro_name, "example1a | example1b | appendix")->required();
    repro_cmd->add_option("--out", repro_out, "write output to a file instead of stdout");

    std::vector<const char*> ptrs;
    ptrs.reserve(args.size() + 1);
    ptrs.push_back("herdsim");
    for (const auto& a : args) ptrs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(validate_o, out);
        if (trace_cmd->parsed()) return cmd_trace(trace_o, trace_history, out, err);
        if (check_cmd->parsed()) return cmd_check(check_o, out);
        if (exact_cmd->parsed()) return cmd_exact(exact_o, exact_event, exact_condition, out, err);
        if (sim_cmd->parsed()) return cmd_simulate(sim_o, sim_event, sim_runs, out, err);
        if (disc_cmd->parsed()) return cmd_discounted(disc_o, disc_delta, out, err);
        if (scan_cmd->parsed())
            return cmd_scan(scan_grid, scan_target, scan_horizon, scan_outdir, scan_max_emit,
                            scan_out, out);
        if (repro_cmd->parsed()) return cmd_reproduce(repro_name, repro_out, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    err << "no subcommand given\n";
    return 2;
}

}  // namespace herdsim
