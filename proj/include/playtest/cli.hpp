#pragma once
// Subcommand frontend: wires files, seeds, and worker pools to the library.
//
// Exit codes: 0 success, 1 usage, 2 input schema violation, 3 missing input
// file, 4 computation failure, 5 write failure. Errors print a single
// `error: <category>: <message>` line on stderr.
//
// Every artifact embeds a manifest comment with the tool version and the
// resolved command line, minus --workers: outputs must be byte-identical
// for any worker pool size, and the pool size is the one flag with no
// bearing on content.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "playtest/env.hpp"
#include "playtest/errors.hpp"
#include "playtest/eval.hpp"
#include "playtest/io.hpp"
#include "playtest/mcts.hpp"
#include "playtest/policy.hpp"
#include "playtest/predict.hpp"
#include "playtest/stats.hpp"
#include "playtest/svg.hpp"

namespace playtest {

inline constexpr int kDefaultWorkers = 16;

namespace cli_detail {

inline std::string single_line(std::string msg) {
    for (char& ch : msg)
        if (ch == '\n' || ch == '\r') ch = ' ';
    return msg;
}

inline void push_flag(std::vector<std::string>& m, const std::string& name, const std::string& value) {
    m.push_back(name);
    m.push_back(value);
}

}  // namespace cli_detail

// ---- train ----

struct TrainCmd {
    std::string levels;
    std::string out;
    std::uint64_t seed = 1;
    int iterations = 30;
    int population = 32;
    int episodes = 12;
    double elite_fraction = 0.25;
    int workers = kDefaultWorkers;
};

inline void cmd_train(const TrainCmd& c) {
    const auto levels = read_level_pack(c.levels);
    TrainConfig cfg;
    cfg.iterations = c.iterations;
    cfg.population = c.population;
    cfg.episodes_per_candidate = c.episodes;
    cfg.elite_fraction = c.elite_fraction;
    cfg.workers = c.workers;
    std::map<int, PolicyWeights> weights;
    for (const auto& level : levels)
        weights[level.level_id] =
            train_policy(level, cfg, derive_seed(c.seed, 0x7E, static_cast<std::uint64_t>(level.level_id)));
    std::vector<std::string> m = {"train"};
    cli_detail::push_flag(m, "--levels", c.levels);
    cli_detail::push_flag(m, "--out", c.out);
    cli_detail::push_flag(m, "--seed", format_u64(c.seed));
    cli_detail::push_flag(m, "--iterations", format_int(c.iterations));
    cli_detail::push_flag(m, "--population", format_int(c.population));
    cli_detail::push_flag(m, "--episodes", format_int(c.episodes));
    cli_detail::push_flag(m, "--elite-fraction", format_double(c.elite_fraction));
    write_weights(c.out, weights, manifest_line(m));
}

// ---- run-agent ----

struct RunAgentCmd {
    std::string levels;
    std::string agent = "vanilla";
    std::string weights;
    std::string out;
    int runs = 0;  // 0 = per-agent default (20 search, 1000 direct policy)
    std::uint64_t seed = 1;
    std::optional<int> budget;
    std::optional<int> rollout_cap;
    std::optional<double> gamma;
    std::optional<double> c;
    int workers = kDefaultWorkers;
};

inline void cmd_run_agent(const RunAgentCmd& c) {
    const auto kind = parse_agent(c.agent);
    if (!kind) throw ConfigError("unknown agent '" + c.agent + "'");
    const auto levels = read_level_pack(c.levels);
    std::map<int, PolicyWeights> weights;
    AgentSpec spec;
    spec.kind = *kind;
    spec.overrides.iteration_budget = c.budget;
    spec.overrides.rollout_cap = c.rollout_cap;
    spec.overrides.gamma = c.gamma;
    spec.overrides.c = c.c;
    if (uses_learned_rollouts(*kind)) {
        if (c.weights.empty())
            throw MissingInputError("agent '" + c.agent + "' needs trained weights, pass --weights");
        weights = read_weights(c.weights);
        spec.weights = &weights;
    }
    const int runs = c.runs > 0 ? c.runs : (*kind == AgentKind::PolicyOnly ? 1000 : 20);
    const auto records = collect_runs(levels, spec, runs, c.seed, c.workers);
    std::vector<std::string> m = {"run-agent"};
    cli_detail::push_flag(m, "--levels", c.levels);
    cli_detail::push_flag(m, "--agent", c.agent);
    if (uses_learned_rollouts(*kind)) cli_detail::push_flag(m, "--weights", c.weights);
    cli_detail::push_flag(m, "--runs", format_int(runs));
    cli_detail::push_flag(m, "--seed", format_u64(c.seed));
    if (c.budget) cli_detail::push_flag(m, "--budget", format_int(*c.budget));
    if (c.rollout_cap) cli_detail::push_flag(m, "--rollout-cap", format_int(*c.rollout_cap));
    if (c.gamma) cli_detail::push_flag(m, "--gamma", format_double(*c.gamma));
    if (c.c) cli_detail::push_flag(m, "--c", format_double(*c.c));
    cli_detail::push_flag(m, "--out", c.out);
    write_runs_csv(c.out, records, manifest_line(m));
}

// ---- features ----

struct FeaturesCmd {
    std::string runs;
    std::string policy_runs;
    std::string out;
    std::string set = "f3";
    double moves_fraction = kDefaultTopMovesFraction;
    double goals_fraction = kDefaultTopGoalsFraction;
};

inline void cmd_features(const FeaturesCmd& c) {
    const auto set = parse_feature_set(c.set);
    if (!set) throw ConfigError("unknown feature set '" + c.set + "'");
    const auto grouped = group_by_level(read_runs_csv(c.runs));
    std::map<int, std::vector<RunRecord>> policy_by_id;
    if (!c.policy_runs.empty())
        for (auto& [id, recs] : group_by_level(read_runs_csv(c.policy_runs)))
            policy_by_id[id] = std::move(recs);

    std::vector<std::string> header = {"level_id", "feature_set"};
    for (const auto& name : feature_names(*set)) header.push_back(name);
    std::vector<std::vector<std::string>> rows;
    for (const auto& [id, recs] : grouped) {
        FeatureVector fv;
        if (*set == FeatureSet::F3P && !policy_by_id.empty()) {
            const auto it = policy_by_id.find(id);
            if (it == policy_by_id.end())
                throw ConfigError("--policy-runs has no records for level " + std::to_string(id));
            fv = combine_f3p(recs, it->second, c.moves_fraction, c.goals_fraction);
        } else {
            fv = extract_features(recs, *set, c.moves_fraction, c.goals_fraction);
        }
        std::vector<std::string> row = {format_int(id), feature_set_name(*set)};
        for (const auto& [name, value] : fv.values) row.push_back(format_double(value));
        rows.push_back(std::move(row));
    }
    std::vector<std::string> m = {"features"};
    cli_detail::push_flag(m, "--runs", c.runs);
    if (!c.policy_runs.empty()) cli_detail::push_flag(m, "--policy-runs", c.policy_runs);
    cli_detail::push_flag(m, "--set", c.set);
    cli_detail::push_flag(m, "--moves-fraction", format_double(c.moves_fraction));
    cli_detail::push_flag(m, "--goals-fraction", format_double(c.goals_fraction));
    cli_detail::push_flag(m, "--out", c.out);
    write_text_file(c.out, render_csv(header, rows, manifest_line(m)));
}

// ---- sweep ----

struct SweepCmd {
    std::string runs;
    std::string truth;
    std::string out;
    std::vector<double> fractions;  // empty = default grid
};

inline void cmd_sweep(const SweepCmd& c) {
    const auto records = read_runs_csv(c.runs);
    std::map<int, double> truth_pass;
    for (const auto& t : read_truth_csv(c.truth)) truth_pass[t.level_id] = t.pass_rate;
    std::vector<double> fractions = c.fractions.empty() ? default_sweep_fractions() : c.fractions;
    for (double f : fractions)
        if (!(f > 0.0) || f > 1.0) throw ConfigError("sweep fractions must lie in (0, 1]");
    const auto cells = correlation_sweep(records, truth_pass, fractions);
    std::vector<std::string> m = {"sweep"};
    cli_detail::push_flag(m, "--runs", c.runs);
    cli_detail::push_flag(m, "--truth", c.truth);
    for (double f : fractions) cli_detail::push_flag(m, "--fraction", format_double(f));
    cli_detail::push_flag(m, "--out", c.out);
    write_sweep_csv(c.out, cells, manifest_line(m));
}

// ---- synth-truth ----

struct SynthTruthCmd {
    std::string levels;
    std::string policy_runs;
    std::string params;  // empty = built-in reference population
    std::string out;
    std::uint64_t seed = 1;
    double blend = kOracleBlendWeight;
    double moves_fraction = kDefaultTopMovesFraction;
    int workers = kDefaultWorkers;
};

inline void cmd_synth_truth(const SynthTruthCmd& c) {
    const auto levels = read_level_pack(c.levels);
    const auto policy_records = read_runs_csv(c.policy_runs);
    const PopulationParams params = c.params.empty() ? reference_population_params() : read_params(c.params);
    const auto result = generate_synthetic_truth(levels, params, policy_records, c.seed, c.blend,
                                                 c.moves_fraction, c.workers);
    std::vector<std::string> m = {"synth-truth"};
    cli_detail::push_flag(m, "--levels", c.levels);
    cli_detail::push_flag(m, "--policy-runs", c.policy_runs);
    if (!c.params.empty()) cli_detail::push_flag(m, "--params", c.params);
    cli_detail::push_flag(m, "--seed", format_u64(c.seed));
    cli_detail::push_flag(m, "--blend", format_double(c.blend));
    cli_detail::push_flag(m, "--moves-fraction", format_double(c.moves_fraction));
    cli_detail::push_flag(m, "--out", c.out);
    write_truth_csv(c.out, result.truth, manifest_line(m));
}

// ---- predict ----

struct PredictCmd {
    std::string mcts_runs;
    std::string policy_runs;
    std::string truth;
    std::string report;
    std::string folds_out;
    std::string predictions;
    std::string model = "both";  // baseline | extended | both
    std::string agent = "both";  // mcts | policy | both
    std::string set = "all";     // f16 | f3 | f3p | all
    int folds = 5;
    int seeds = 5;
    std::uint64_t seed = 1;
    int fit_iterations = 30;
    int fit_candidates = 24;
    int sim_population = 2000;
    int final_population = 10000;
    int workers = kDefaultWorkers;
};

inline void cmd_predict(const PredictCmd& c) {
    std::vector<int> model_sel;
    if (c.model == "baseline") model_sel = {0};
    else if (c.model == "extended") model_sel = {1};
    else if (c.model == "both") model_sel = {0, 1};
    else throw ConfigError("unknown model '" + c.model + "', expected baseline|extended|both");
    std::vector<int> agent_sel;
    if (c.agent == "mcts") agent_sel = {0};
    else if (c.agent == "policy") agent_sel = {1};
    else if (c.agent == "both") agent_sel = {0, 1};
    else throw ConfigError("unknown agent class '" + c.agent + "', expected mcts|policy|both");
    std::vector<int> set_sel;
    if (c.set == "f16") set_sel = {0};
    else if (c.set == "f3") set_sel = {1};
    else if (c.set == "f3p") set_sel = {2};
    else if (c.set == "all") set_sel = {0, 1, 2};
    else throw ConfigError("unknown feature set '" + c.set + "', expected f16|f3|f3p|all");

    const bool wants_mcts = std::count(agent_sel.begin(), agent_sel.end(), 0) > 0;
    const bool wants_f3p = std::count(set_sel.begin(), set_sel.end(), 2) > 0;
    const bool wants_policy = std::count(agent_sel.begin(), agent_sel.end(), 1) > 0 ||
                              (wants_mcts && wants_f3p);

    const auto truth = read_truth_csv(c.truth);
    EvalData data;
    if (wants_mcts) {
        if (c.mcts_runs.empty())
            throw MissingInputError("the mcts agent class needs --mcts-runs");
        data.mcts = group_by_level(read_runs_csv(c.mcts_runs));
    }
    if (wants_policy) {
        if (c.policy_runs.empty())
            throw MissingInputError("this configuration needs direct-policy records, pass --policy-runs");
        data.policy = group_by_level(read_runs_csv(c.policy_runs));
    }

    EvalOptions opt;
    opt.folds = c.folds;
    opt.extended_seeds = c.seeds;
    opt.fit.iterations = c.fit_iterations;
    opt.fit.population = c.fit_candidates;
    opt.fit.sim_population = c.sim_population;
    opt.final_population_size = c.final_population;
    opt.workers = c.workers;

    const Predictor predictors[] = {Predictor::Baseline, Predictor::Extended};
    const AgentClass agents[] = {AgentClass::Mcts, AgentClass::Policy};
    const FeatureSet sets[] = {FeatureSet::F16, FeatureSet::F3, FeatureSet::F3P};
    std::vector<SummaryReport> reports;
    for (int p : model_sel)
        for (int a : agent_sel)
            for (int s : set_sel)
                reports.push_back(
                    evaluate_config(predictors[p], agents[a], sets[s], data, truth, opt, c.seed));

    std::vector<std::string> m = {"predict"};
    if (wants_mcts) cli_detail::push_flag(m, "--mcts-runs", c.mcts_runs);
    if (wants_policy) cli_detail::push_flag(m, "--policy-runs", c.policy_runs);
    cli_detail::push_flag(m, "--truth", c.truth);
    cli_detail::push_flag(m, "--model", c.model);
    cli_detail::push_flag(m, "--agent", c.agent);
    cli_detail::push_flag(m, "--set", c.set);
    cli_detail::push_flag(m, "--folds", format_int(c.folds));
    cli_detail::push_flag(m, "--seeds", format_int(c.seeds));
    cli_detail::push_flag(m, "--seed", format_u64(c.seed));
    cli_detail::push_flag(m, "--fit-iterations", format_int(c.fit_iterations));
    cli_detail::push_flag(m, "--fit-candidates", format_int(c.fit_candidates));
    cli_detail::push_flag(m, "--sim-population", format_int(c.sim_population));
    cli_detail::push_flag(m, "--final-population", format_int(c.final_population));
    cli_detail::push_flag(m, "--report", c.report);
    const std::string manifest = manifest_line(m);

    write_report_csv(c.report, reports, manifest);
    if (!c.folds_out.empty()) write_report_folds_csv(c.folds_out, reports, manifest);
    if (!c.predictions.empty()) {
        // Per-level predictions come from the last configuration evaluated.
        std::map<int, const GroundTruthRecord*> truth_by_id;
        for (const auto& t : truth) truth_by_id[t.level_id] = &t;
        std::vector<PredictionRow> rows;
        for (const auto& p : reports.back().predictions) {
            const auto* t = truth_by_id.at(p.level_id);
            rows.push_back({p.level_id, p.pass_rate, p.churn_rate, t->pass_rate, t->churn_rate});
        }
        write_predictions_csv(c.predictions, rows, manifest);
    }
}

// ---- plot ----

struct PlotCmd {
    std::string sweep;
    std::string predictions;
    std::string out_dir = ".";
};

inline void cmd_plot(const PlotCmd& c) {
    std::vector<std::string> m = {"plot"};
    if (!c.sweep.empty()) cli_detail::push_flag(m, "--sweep", c.sweep);
    if (!c.predictions.empty()) cli_detail::push_flag(m, "--predictions", c.predictions);
    cli_detail::push_flag(m, "--out-dir", c.out_dir);
    const std::string manifest = "<!-- " + manifest_line(m) + " -->\n";
    const std::filesystem::path dir(c.out_dir);
    if (!c.sweep.empty()) {
        const auto cells = parse_sweep_csv(read_text_file(c.sweep), c.sweep);
        write_text_file((dir / "sweep.svg").string(), manifest + render_sweep_svg(cells));
    }
    if (!c.predictions.empty()) {
        const auto rows = parse_predictions_csv(read_text_file(c.predictions), c.predictions);
        write_text_file((dir / "predictions.svg").string(), manifest + render_predictions_svg(rows));
    }
}

// ---- parsing and dispatch ----

inline int run_cli(std::vector<std::string> args) {
    CLI::App app{"Agent playtesting, run statistics, and difficulty/churn prediction for ColorPop levels",
                 "playtest"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kToolVersion));
    app.set_help_all_flag("--help-all", "Show help for every subcommand");
    app.footer("Exit codes: 0 success, 1 usage, 2 input schema, 3 missing input, 4 computation, 5 write");

    TrainCmd train_c;
    auto* train = app.add_subcommand("train", "Train per-level rollout policy weights");
    train->add_option("--levels", train_c.levels, "Level pack file")->required();
    train->add_option("--out", train_c.out, "Output weights file")->required();
    train->add_option("--seed", train_c.seed, "Master seed")->capture_default_str();
    train->add_option("--iterations", train_c.iterations, "Optimizer iterations")
        ->check(CLI::PositiveNumber)->capture_default_str();
    train->add_option("--population", train_c.population, "Optimizer candidates per iteration")
        ->check(CLI::PositiveNumber)->capture_default_str();
    train->add_option("--episodes", train_c.episodes, "Episodes per candidate evaluation")
        ->check(CLI::PositiveNumber)->capture_default_str();
    train->add_option("--elite-fraction", train_c.elite_fraction, "Elite fraction per iteration")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    train->add_option("--workers", train_c.workers, "Worker threads")
        ->check(CLI::PositiveNumber)->capture_default_str();

    RunAgentCmd run_c;
    auto* runa = app.add_subcommand("run-agent", "Play every level repeatedly with one agent");
    runa->add_option("--levels", run_c.levels, "Level pack file")->required();
    runa->add_option("--agent", run_c.agent,
                     "Agent: vanilla | policy | myopic | policy-myopic | policy-only")
        ->capture_default_str();
    runa->add_option("--weights", run_c.weights, "Trained weights file (policy agents)");
    runa->add_option("--runs", run_c.runs, "Runs per level (default 20, direct policy 1000)");
    runa->add_option("--seed", run_c.seed, "Master seed")->capture_default_str();
    runa->add_option("--budget", run_c.budget, "Search iterations per move (default 200)");
    runa->add_option("--rollout-cap", run_c.rollout_cap, "Max rollout moves (default 10)");
    runa->add_option("--gamma", run_c.gamma, "Discount (default 1, myopic variants 0.9)");
    runa->add_option("--c", run_c.c, "Exploration constant (default 1.4142135623730951)");
    runa->add_option("--workers", run_c.workers, "Worker threads")
        ->check(CLI::PositiveNumber)->capture_default_str();
    runa->add_option("--out", run_c.out, "Output runs CSV")->required();

    FeaturesCmd feat_c;
    auto* feat = app.add_subcommand("features", "Per-level feature vectors from run records");
    feat->add_option("--runs", feat_c.runs, "Runs CSV")->required();
    feat->add_option("--policy-runs", feat_c.policy_runs,
                     "Direct-policy runs CSV for f3p percentile features of a search agent");
    feat->add_option("--set", feat_c.set, "Feature set: f16 | f3 | f3p")->capture_default_str();
    feat->add_option("--moves-fraction", feat_c.moves_fraction, "Best-run fraction for moves-left")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    feat->add_option("--goals-fraction", feat_c.goals_fraction, "Best-run fraction for cleared goals")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    feat->add_option("--out", feat_c.out, "Output features CSV")->required();

    SweepCmd sweep_c;
    auto* sweep = app.add_subcommand("sweep", "Rank correlation of features vs truth across fractions");
    sweep->add_option("--runs", sweep_c.runs, "Runs CSV")->required();
    sweep->add_option("--truth", sweep_c.truth, "Ground truth CSV")->required();
    sweep->add_option("--fractions", sweep_c.fractions,
                      "Best-run fractions (default 0.05 0.1 0.15 0.2 0.3 0.5 0.75 1)");
    sweep->add_option("--out", sweep_c.out, "Output sweep CSV")->required();

    SynthTruthCmd synth_c;
    auto* synth = app.add_subcommand("synth-truth", "Synthesize pass/churn truth from a reference population");
    synth->add_option("--levels", synth_c.levels, "Level pack file")->required();
    synth->add_option("--policy-runs", synth_c.policy_runs, "Direct-policy runs CSV")->required();
    synth->add_option("--params", synth_c.params, "Population parameter file (default: built-in reference)");
    synth->add_option("--seed", synth_c.seed, "Master seed")->capture_default_str();
    synth->add_option("--blend", synth_c.blend, "Pass-rate share of the capability blend")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    synth->add_option("--moves-fraction", synth_c.moves_fraction, "Best-run fraction for moves-left")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    synth->add_option("--workers", synth_c.workers, "Worker threads")
        ->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--out", synth_c.out, "Output truth CSV")->required();

    PredictCmd pred_c;
    auto* pred = app.add_subcommand("predict", "Cross-validated pass/churn prediction report");
    pred->add_option("--mcts-runs", pred_c.mcts_runs, "Search-agent runs CSV");
    pred->add_option("--policy-runs", pred_c.policy_runs, "Direct-policy runs CSV");
    pred->add_option("--truth", pred_c.truth, "Ground truth CSV")->required();
    pred->add_option("--model", pred_c.model, "Predictor: baseline | extended | both")->capture_default_str();
    pred->add_option("--agent", pred_c.agent, "Agent class: mcts | policy | both")->capture_default_str();
    pred->add_option("--set", pred_c.set, "Feature set: f16 | f3 | f3p | all")->capture_default_str();
    pred->add_option("--folds", pred_c.folds, "Cross-validation folds")
        ->check(CLI::PositiveNumber)->capture_default_str();
    pred->add_option("--seeds", pred_c.seeds, "Stochastic-fit repetitions per fold (extended)")
        ->check(CLI::PositiveNumber)->capture_default_str();
    pred->add_option("--seed", pred_c.seed, "Master seed")->capture_default_str();
    pred->add_option("--fit-iterations", pred_c.fit_iterations, "Population-fit optimizer iterations")
        ->check(CLI::PositiveNumber)->capture_default_str();
    pred->add_option("--fit-candidates", pred_c.fit_candidates, "Population-fit candidates per iteration")
        ->check(CLI::PositiveNumber)->capture_default_str();
    pred->add_option("--sim-population", pred_c.sim_population, "Players simulated per fit evaluation")
        ->check(CLI::PositiveNumber)->capture_default_str();
    pred->add_option("--final-population", pred_c.final_population, "Players simulated for predictions")
        ->check(CLI::PositiveNumber)->capture_default_str();
    pred->add_option("--workers", pred_c.workers, "Worker threads")
        ->check(CLI::PositiveNumber)->capture_default_str();
    pred->add_option("--report", pred_c.report, "Output report CSV")->required();
    pred->add_option("--folds-out", pred_c.folds_out, "Output per-fold CSV");
    pred->add_option("--predictions", pred_c.predictions,
                     "Output per-level predictions CSV (last configuration evaluated)");

    PlotCmd plot_c;
    auto* plot = app.add_subcommand("plot", "Render sweep and prediction SVG charts");
    plot->add_option("--sweep", plot_c.sweep, "Sweep CSV to chart");
    plot->add_option("--predictions", plot_c.predictions, "Predictions CSV to chart");
    plot->add_option("--out-dir", plot_c.out_dir, "Directory for SVG files")->capture_default_str();

    try {
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp" ||
            e.get_name() == "CallForVersion") {
            const CLI::App* target = &app;
            while (!target->get_subcommands().empty()) target = target->get_subcommands().front();
            if (e.get_name() == "CallForVersion") std::cout << kToolVersion << "\n";
            else if (e.get_name() == "CallForAllHelp") std::cout << app.help("", CLI::AppFormatMode::All);
            else std::cout << target->help();
            return 0;
        }
        std::cerr << "error: usage: " << cli_detail::single_line(e.what()) << "\n";
        return 1;
    }

    try {
        if (plot->parsed() && plot_c.sweep.empty() && plot_c.predictions.empty()) {
            std::cerr << "error: usage: plot needs --sweep and/or --predictions\n";
            return 1;
        }
        if (train->parsed()) cmd_train(train_c);
        else if (runa->parsed()) cmd_run_agent(run_c);
        else if (feat->parsed()) cmd_features(feat_c);
        else if (sweep->parsed()) cmd_sweep(sweep_c);
        else if (synth->parsed()) cmd_synth_truth(synth_c);
        else if (pred->parsed()) cmd_predict(pred_c);
        else if (plot->parsed()) cmd_plot(plot_c);
    } catch (const MissingInputError& e) {
        std::cerr << "error: missing-input: " << cli_detail::single_line(e.what()) << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "error: write: " << cli_detail::single_line(e.what()) << "\n";
        return 5;
    } catch (const ConfigError& e) {
        std::cerr << "error: schema: " << cli_detail::single_line(e.what()) << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: compute: " << cli_detail::single_line(e.what()) << "\n";
        return 4;
    }
    return 0;
}

inline int run_cli(int argc, char** argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_cli(std::move(args));
}

}  // namespace playtest
