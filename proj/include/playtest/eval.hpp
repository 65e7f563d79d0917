#pragma once
// Cross-validated comparison of predictor configurations, and the synthetic
// ground truth that stands in for human play data.
//
// Synthetic truth deliberately couples "human" difficulty to the agent's
// best-case capability: oracle difficulty for a level is
//   1 - (0.5 * direct-policy pass rate + 0.5 * best-15% moves-left ratio)
// from a large direct-policy run sweep, and the per-level pass/churn truth
// comes from simulating the reference player population over those
// difficulties. This makes best-run features predictive by construction, so
// the comparison between all-run and best-run feature sets is a real test
// rather than a foregone failure.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "playtest/errors.hpp"
#include "playtest/mcts.hpp"
#include "playtest/predict.hpp"
#include "playtest/rng.hpp"
#include "playtest/stats.hpp"

namespace playtest {

// Shuffle level ids with the seed, then split into k contiguous folds whose
// sizes differ by at most one.
inline std::vector<std::vector<int>> kfold_split(const std::vector<int>& level_ids, int k,
                                                 std::uint64_t seed) {
    const int n = static_cast<int>(level_ids.size());
    if (k < 1 || k > n) throw ContractViolation("kfold_split: need 1 <= k <= level count");
    std::vector<int> shuffled = level_ids;
    Rng rng(derive_seed(seed, 0xF01D));
    for (std::size_t i = shuffled.size(); i > 1; --i) {
        const std::size_t j = rng.index(i);
        std::swap(shuffled[i - 1], shuffled[j]);
    }
    std::vector<std::vector<int>> folds(static_cast<std::size_t>(k));
    const int base = n / k;
    const int extra = n % k;
    std::size_t pos = 0;
    for (int f = 0; f < k; ++f) {
        const int size = base + (f < extra ? 1 : 0);
        for (int i = 0; i < size; ++i) folds[static_cast<std::size_t>(f)].push_back(shuffled[pos++]);
    }
    return folds;
}

inline double mse(const std::vector<double>& predictions, const std::vector<double>& truth) {
    if (predictions.size() != truth.size()) throw ContractViolation("mse: length mismatch");
    if (predictions.empty()) throw ContractViolation("mse: empty input");
    double total = 0.0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        const double d = predictions[i] - truth[i];
        total += d * d;
    }
    return total / static_cast<double>(predictions.size());
}

enum class Predictor { Baseline, Extended };

inline std::string predictor_name(Predictor p) {
    return p == Predictor::Baseline ? "baseline" : "extended";
}

enum class AgentClass { Mcts, Policy };

inline std::string agent_class_name(AgentClass a) { return a == AgentClass::Mcts ? "mcts" : "policy"; }

// Run records by agent class, grouped per level in level order.
struct EvalData {
    std::vector<std::pair<int, std::vector<RunRecord>>> mcts;
    std::vector<std::pair<int, std::vector<RunRecord>>> policy;
};

struct EvalOptions {
    int folds = 5;
    int extended_seeds = 5;  // stochastic-fit repetitions averaged per fold
    double top_moves_fraction = kDefaultTopMovesFraction;
    double top_goals_fraction = kDefaultTopGoalsFraction;
    PopulationFitOptions fit;
    int final_population_size = 10000;  // players in the prediction simulation
    int workers = 1;
    // Observation hook for leak auditing: invoked before every fit with the
    // fit kind ("linear" or "population") and the level ids whose truth the
    // fit consumes. Held-out ids must never appear.
    std::function<void(const std::string&, const std::vector<int>&)> fit_observer;
};

struct FoldResult {
    std::vector<int> train_ids;
    std::vector<int> test_ids;
    double pass_mse = 0.0;
    double churn_mse = 0.0;
};

struct SummaryReport {
    std::string predictor;
    std::string agent;
    std::string feature_set;
    std::vector<FoldResult> folds;
    double pass_mse_mean = 0.0;
    double pass_mse_std = 0.0;
    double churn_mse_mean = 0.0;
    double churn_mse_std = 0.0;
    // Per-level predictions from the last fold pass, for inspection/plots.
    std::vector<LevelPrediction> predictions;
};

namespace detail {

inline std::pair<double, double> mean_std(const std::vector<double>& xs) {
    const double m = mean(xs);
    return {m, stddev_pop(xs, m)};
}

// Feature vectors per level for an (agent, set) pair. The f3p set for the
// search agent mixes in the direct-policy percentile features.
inline std::map<int, FeatureVector> build_features(AgentClass agent, FeatureSet set,
                                                   const EvalData& data, const EvalOptions& opt) {
    const auto& own = agent == AgentClass::Mcts ? data.mcts : data.policy;
    if (own.empty()) throw ConfigError("no run records for agent " + agent_class_name(agent));
    std::map<int, FeatureVector> features;
    if (agent == AgentClass::Mcts && set == FeatureSet::F3P) {
        std::map<int, const std::vector<RunRecord>*> policy_by_id;
        for (const auto& [id, recs] : data.policy) policy_by_id[id] = &recs;
        for (const auto& [id, recs] : own) {
            auto it = policy_by_id.find(id);
            if (it == policy_by_id.end())
                throw ConfigError("f3p for the search agent needs direct-policy records for level " +
                                  std::to_string(id));
            features[id] = combine_f3p(recs, *it->second, opt.top_moves_fraction, opt.top_goals_fraction);
        }
        return features;
    }
    for (const auto& [id, recs] : own)
        features[id] = extract_features(recs, set, opt.top_moves_fraction, opt.top_goals_fraction);
    return features;
}

}  // namespace detail

// Cross-validated error of one predictor configuration. Held-out levels
// never enter a fit: the linear model fits on training folds only, and the
// population fit sees training-level truth only (its simulation walks all
// levels with predicted difficulties, which involves no held-out truth).
// The extended predictor repeats its stochastic fit extended_seeds times per
// fold and averages the fold's errors; summary mean/std are over fold
// values.
inline SummaryReport evaluate_config(Predictor predictor, AgentClass agent, FeatureSet set,
                                     const EvalData& data, const std::vector<GroundTruthRecord>& truth,
                                     const EvalOptions& opt, std::uint64_t seed) {
    if (opt.extended_seeds < 1) throw ContractViolation("evaluate_config: extended_seeds must be >= 1");
    const auto features = detail::build_features(agent, set, data, opt);

    std::vector<int> level_ids;  // level order = truth order
    std::map<int, const GroundTruthRecord*> truth_by_id;
    for (const auto& t : truth) {
        if (features.find(t.level_id) == features.end())
            throw ConfigError("no features for level " + std::to_string(t.level_id));
        level_ids.push_back(t.level_id);
        truth_by_id[t.level_id] = &t;
    }
    if (level_ids.empty()) throw InsufficientDataError("evaluate_config: no levels");

    SummaryReport report;
    report.predictor = predictor_name(predictor);
    report.agent = agent_class_name(agent);
    report.feature_set = feature_set_name(set);

    const auto folds = kfold_split(level_ids, opt.folds, derive_seed(seed, 0xCF));
    for (std::size_t f = 0; f < folds.size(); ++f) {
        FoldResult fold;
        fold.test_ids = folds[f];
        std::set<int> test_set(fold.test_ids.begin(), fold.test_ids.end());
        for (int id : level_ids)
            if (!test_set.count(id)) fold.train_ids.push_back(id);

        std::vector<FeatureVector> train_features;
        std::vector<GroundTruthRecord> train_truth;
        for (int id : fold.train_ids) {
            train_features.push_back(features.at(id));
            train_truth.push_back(*truth_by_id.at(id));
        }

        if (opt.fit_observer) opt.fit_observer("linear", fold.train_ids);
        const LinearModel model = fit_linear(train_features, train_truth);

        std::map<int, LevelPrediction> linear_preds;
        for (int id : level_ids) linear_preds[id] = predict_linear(model, features.at(id));

        auto collect_mse = [&](const std::map<int, LevelPrediction>& preds) {
            std::vector<double> pass_p;
            std::vector<double> pass_t;
            std::vector<double> churn_p;
            std::vector<double> churn_t;
            for (int id : fold.test_ids) {
                const auto& p = preds.at(id);
                pass_p.push_back(p.pass_rate);
                churn_p.push_back(p.churn_rate);
                pass_t.push_back(truth_by_id.at(id)->pass_rate);
                churn_t.push_back(truth_by_id.at(id)->churn_rate);
            }
            return std::pair<double, double>{mse(pass_p, pass_t), mse(churn_p, churn_t)};
        };

        if (predictor == Predictor::Baseline) {
            const auto [pass_err, churn_err] = collect_mse(linear_preds);
            fold.pass_mse = pass_err;
            fold.churn_mse = churn_err;
            if (f + 1 == folds.size()) {
                report.predictions.clear();
                for (int id : level_ids) report.predictions.push_back(linear_preds.at(id));
            }
        } else {
            // Difficulties from training-fold normalization applied everywhere.
            double train_min = 1.0;
            double train_max = 0.0;
            bool first = true;
            for (int id : fold.train_ids) {
                const double p = linear_preds.at(id).pass_rate;
                if (first) {
                    train_min = train_max = p;
                    first = false;
                } else {
                    train_min = std::min(train_min, p);
                    train_max = std::max(train_max, p);
                }
            }
            std::vector<double> pass_all;
            for (int id : level_ids) pass_all.push_back(linear_preds.at(id).pass_rate);
            const auto difficulties = normalize_difficulty(pass_all, train_min, train_max);
            std::vector<LevelDifficulty> level_difficulties;
            for (std::size_t i = 0; i < level_ids.size(); ++i)
                level_difficulties.push_back({level_ids[i], difficulties[i]});

            double pass_total = 0.0;
            double churn_total = 0.0;
            for (int rep = 0; rep < opt.extended_seeds; ++rep) {
                const std::uint64_t fit_seed = derive_seed(seed, 0xE7, static_cast<std::uint64_t>(f),
                                                           static_cast<std::uint64_t>(rep));
                PopulationFitOptions fit_opt = opt.fit;
                fit_opt.workers = opt.workers;
                if (opt.fit_observer) opt.fit_observer("population", fold.train_ids);
                PopulationParams params = fit_population(level_difficulties, train_truth, fit_opt, fit_seed);
                params.population_size = opt.final_population_size;
                const auto sim = simulate_population(level_difficulties, params,
                                                     derive_seed(fit_seed, 0x51), opt.workers);
                std::map<int, LevelPrediction> preds;
                for (int id : level_ids) preds[id] = {id, 0.0, 1.0};  // truncated fallback
                for (const auto& p : sim.predictions) preds[p.level_id] = p;
                const auto [pass_err, churn_err] = collect_mse(preds);
                pass_total += pass_err;
                churn_total += churn_err;
                if (f + 1 == folds.size() && rep + 1 == opt.extended_seeds) {
                    report.predictions.clear();
                    for (int id : level_ids) report.predictions.push_back(preds.at(id));
                }
            }
            fold.pass_mse = pass_total / opt.extended_seeds;
            fold.churn_mse = churn_total / opt.extended_seeds;
        }
        report.folds.push_back(std::move(fold));
    }

    std::vector<double> pass_errs;
    std::vector<double> churn_errs;
    for (const auto& fold : report.folds) {
        pass_errs.push_back(fold.pass_mse);
        churn_errs.push_back(fold.churn_mse);
    }
    const auto [pm, ps] = detail::mean_std(pass_errs);
    const auto [cm, cs] = detail::mean_std(churn_errs);
    report.pass_mse_mean = pm;
    report.pass_mse_std = ps;
    report.churn_mse_mean = cm;
    report.churn_mse_std = cs;
    return report;
}

// The full comparison grid: 2 predictors x 2 agent classes x 3 feature sets.
// Every configuration gets the same seed, so folds (and the extended fits'
// random draws) are shared and cross-configuration comparisons are paired.
inline std::vector<SummaryReport> run_grid(const EvalData& data,
                                           const std::vector<GroundTruthRecord>& truth,
                                           const EvalOptions& opt, std::uint64_t seed) {
    std::vector<SummaryReport> reports;
    const Predictor predictors[] = {Predictor::Baseline, Predictor::Extended};
    const AgentClass agents[] = {AgentClass::Mcts, AgentClass::Policy};
    const FeatureSet sets[] = {FeatureSet::F16, FeatureSet::F3, FeatureSet::F3P};
    for (int p = 0; p < 2; ++p)
        for (int a = 0; a < 2; ++a)
            for (int s = 0; s < 3; ++s)
                reports.push_back(evaluate_config(predictors[p], agents[a], sets[s], data, truth, opt, seed));
    return reports;
}

// Reference player population behind the synthetic truth. Skill concentrates
// near 0.12 and the pass curve is steep, so the difficulty band a competent
// agent leaves behind (roughly 0.02 to 0.6) maps onto the full response range
// instead of the flat shoulder of a broad population.
inline PopulationParams reference_population_params() {
    PopulationParams p;
    p.skill_alpha = 4.0;
    p.skill_beta = 29.0;
    p.persistence_alpha = 8.0;
    p.persistence_beta = 2.0;
    p.boredom_alpha = 20.0;
    p.boredom_beta = 380.0;
    p.slope = 30.0;
    p.population_size = 10000;
    p.max_attempts = 50;
    return p;
}

inline constexpr double kOracleBlendWeight = 0.5;  // pass-rate share of capability

struct SyntheticTruth {
    std::vector<GroundTruthRecord> truth;
    std::vector<LevelDifficulty> difficulties;
    PopulationResult simulation;
};

// Build synthetic ground truth for a level pack from direct-policy records:
// capability = blend * pass_rate + (1 - blend) * best-15% moves-left ratio,
// oracle difficulty = 1 - capability, then the reference population walks
// the sequence. Regeneration with identical inputs is byte-identical.
inline SyntheticTruth generate_synthetic_truth(const std::vector<LevelConfig>& levels,
                                               const PopulationParams& params,
                                               const std::vector<RunRecord>& policy_records,
                                               std::uint64_t seed,
                                               double blend = kOracleBlendWeight,
                                               double top_moves_fraction = kDefaultTopMovesFraction,
                                               int workers = 1) {
    if (blend < 0.0 || blend > 1.0) throw ContractViolation("generate_synthetic_truth: blend outside [0, 1]");
    const auto grouped = group_by_level(policy_records);
    std::map<int, const std::vector<RunRecord>*> by_id;
    for (const auto& [id, recs] : grouped) by_id[id] = &recs;

    SyntheticTruth out;
    for (const auto& level : levels) {
        validate(level);
        auto it = by_id.find(level.level_id);
        if (it == by_id.end())
            throw ConfigError("no direct-policy records for level " + std::to_string(level.level_id));
        const auto fv = extract_features(*it->second, FeatureSet::F3P, top_moves_fraction,
                                         kDefaultTopGoalsFraction);
        const double capability =
            blend * fv.get("pass_rate") + (1.0 - blend) * fv.get("moves_left_ratio");
        out.difficulties.push_back({level.level_id, std::clamp(1.0 - capability, 0.0, 1.0)});
    }
    out.simulation = simulate_population(out.difficulties, params, derive_seed(seed, 0x57), workers);
    if (out.simulation.truncated || out.simulation.predictions.size() != levels.size())
        throw ConfigError("synthetic truth: reference population emptied before the last level");
    for (const auto& p : out.simulation.predictions)
        out.truth.push_back({p.level_id, p.pass_rate, p.churn_rate});
    return out;
}

}  // namespace playtest
