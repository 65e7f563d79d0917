#pragma once
// Aggregation of run records into per-level feature vectors, plus the rank
// correlation machinery behind the best-run sweep.
//
// Feature sets:
//   f3   pass_rate, moves_left_ratio, cleared_goals - all-run means.
//   f3p  same names, but moves_left_ratio averages only the best 15% of
//        runs (ranked by moves left) and cleared_goals only the best 5%
//        (ranked by cleared-goal fraction); pass_rate stays all-run.
//   f16  the wide descriptive set: mean and std of the pass flag, then
//        mean, std, min, max and the 5/10/25/50/75th percentiles of both
//        cleared-goal fraction and moves-left ratio (20 values).
//
// Every statistic is computed over a canonically sorted copy of the level's
// records, so feature values are invariant to record order, and f3 equals
// f3p at fractions (1.0, 1.0) bit for bit.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "playtest/errors.hpp"
#include "playtest/mcts.hpp"
#include "playtest/parallel.hpp"
#include "playtest/run_record.hpp"

namespace playtest {

enum class FeatureSet { F16, F3, F3P };

inline std::string feature_set_name(FeatureSet set) {
    switch (set) {
        case FeatureSet::F16: return "f16";
        case FeatureSet::F3: return "f3";
        case FeatureSet::F3P: return "f3p";
    }
    throw ContractViolation("feature_set_name: unknown set");
}

inline std::optional<FeatureSet> parse_feature_set(const std::string& name) {
    if (name == "f16") return FeatureSet::F16;
    if (name == "f3") return FeatureSet::F3;
    if (name == "f3p") return FeatureSet::F3P;
    return std::nullopt;
}

inline constexpr double kDefaultTopMovesFraction = 0.15;
inline constexpr double kDefaultTopGoalsFraction = 0.05;

struct FeatureVector {
    int level_id = 0;
    FeatureSet set = FeatureSet::F3;
    std::vector<std::pair<std::string, double>> values;  // fixed name order

    double get(const std::string& name) const {
        for (const auto& [n, v] : values)
            if (n == name) return v;
        throw ContractViolation("feature '" + name + "' not present");
    }
};

struct AgentSpec {
    AgentKind kind = AgentKind::Vanilla;
    VariantOverrides overrides;
    // Per-level trained weights; required for learned-rollout agents.
    const std::map<int, PolicyWeights>* weights = nullptr;
};

// Play n_runs seeded episodes per level. Run seeds are derived as
// hash(master_seed, level_id, run_index), and records come back ordered by
// (level position, run index) regardless of worker count.
inline std::vector<RunRecord> collect_runs(const std::vector<LevelConfig>& levels,
                                           const AgentSpec& spec, int n_runs,
                                           std::uint64_t master_seed, int workers = 1) {
    if (n_runs < 1) throw ContractViolation("collect_runs: n_runs must be >= 1");
    for (const auto& level : levels) {
        validate(level);
        if (uses_learned_rollouts(spec.kind)) {
            if (spec.weights == nullptr || spec.weights->find(level.level_id) == spec.weights->end())
                throw ConfigError("no trained weights for level " + std::to_string(level.level_id));
        }
    }
    std::vector<RunRecord> records(levels.size() * static_cast<std::size_t>(n_runs));
    parallel_for(records.size(), workers, [&](std::size_t task) {
        const std::size_t level_pos = task / static_cast<std::size_t>(n_runs);
        const int run_index = static_cast<int>(task % static_cast<std::size_t>(n_runs));
        const LevelConfig& level = levels[level_pos];
        const VariantConfig cfg = variant_config(spec.kind, level, spec.overrides);
        const PolicyWeights* w = nullptr;
        if (uses_learned_rollouts(spec.kind)) w = &spec.weights->at(level.level_id);
        const std::uint64_t seed = derive_seed(master_seed, static_cast<std::uint64_t>(level.level_id),
                                               static_cast<std::uint64_t>(run_index));
        records[task] = play_level(level, spec.kind, cfg, w, seed);
    });
    return records;
}

enum class RunKey { MovesLeft, GoalsFraction };

namespace detail {

inline double run_key_value(const RunRecord& r, RunKey key) {
    return key == RunKey::MovesLeft ? static_cast<double>(r.moves_left) : r.goals_cleared_fraction;
}

// Canonical order: better first (key descending), ties to the lower seed.
inline std::vector<RunRecord> sort_by_key(std::vector<RunRecord> records, RunKey key) {
    std::stable_sort(records.begin(), records.end(), [key](const RunRecord& a, const RunRecord& b) {
        const double ka = run_key_value(a, key);
        const double kb = run_key_value(b, key);
        if (ka != kb) return ka > kb;
        return a.seed < b.seed;
    });
    return records;
}

inline double mean(const std::vector<double>& xs) {
    double total = 0.0;
    for (double x : xs) total += x;
    return total / static_cast<double>(xs.size());
}

inline double stddev_pop(const std::vector<double>& xs, double m) {
    double total = 0.0;
    for (double x : xs) total += (x - m) * (x - m);
    return std::sqrt(total / static_cast<double>(xs.size()));
}

// Percentile with linear interpolation between adjacent order statistics;
// expects xs sorted ascending.
inline double percentile_sorted(const std::vector<double>& xs, double q) {
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return xs[lo] + frac * (xs[hi] - xs[lo]);
}

}  // namespace detail

// The best ceil(fraction * n) runs under the key, better-first, ties broken
// toward the lower seed.
inline std::vector<RunRecord> best_run_subset(const std::vector<RunRecord>& records, double fraction,
                                              RunKey key = RunKey::MovesLeft) {
    if (records.empty()) throw ContractViolation("best_run_subset: no records");
    if (!(fraction > 0.0) || fraction > 1.0)
        throw ContractViolation("best_run_subset: fraction must be in (0, 1]");
    auto sorted = detail::sort_by_key(records, key);
    const auto keep = static_cast<std::size_t>(
        std::ceil(fraction * static_cast<double>(sorted.size())));
    sorted.resize(std::min(keep, sorted.size()));
    return sorted;
}

namespace detail {

struct F3Values {
    double pass_rate = 0.0;
    double moves_left = 0.0;
    double cleared_goals = 0.0;
};

inline F3Values f3_values(const std::vector<RunRecord>& records, double moves_fraction,
                          double goals_fraction) {
    F3Values out;
    const auto all = sort_by_key(records, RunKey::MovesLeft);
    double pass_total = 0.0;
    for (const auto& r : all) pass_total += r.passed ? 1.0 : 0.0;
    out.pass_rate = pass_total / static_cast<double>(all.size());

    const auto best_moves = best_run_subset(records, moves_fraction, RunKey::MovesLeft);
    double ml_total = 0.0;
    for (const auto& r : best_moves) ml_total += moves_left_ratio(r);
    out.moves_left = ml_total / static_cast<double>(best_moves.size());

    const auto best_goals = best_run_subset(records, goals_fraction, RunKey::GoalsFraction);
    double goals_total = 0.0;
    for (const auto& r : best_goals) goals_total += r.goals_cleared_fraction;
    out.cleared_goals = goals_total / static_cast<double>(best_goals.size());
    return out;
}

}  // namespace detail

inline const std::vector<std::string>& feature_names(FeatureSet set) {
    static const std::vector<std::string> f3 = {"pass_rate", "moves_left_ratio", "cleared_goals"};
    static const std::vector<std::string> f16 = {
        "pass_mean",  "pass_std",   "goals_mean", "goals_std", "goals_min", "goals_max", "goals_p05",
        "goals_p10",  "goals_p25",  "goals_p50",  "goals_p75", "ml_mean",   "ml_std",    "ml_min",
        "ml_max",     "ml_p05",     "ml_p10",     "ml_p25",    "ml_p50",    "ml_p75"};
    return set == FeatureSet::F16 ? f16 : f3;
}

// Features for one level's records (all records must share the level).
inline FeatureVector extract_features(const std::vector<RunRecord>& records, FeatureSet set,
                                      double top_moves_fraction = kDefaultTopMovesFraction,
                                      double top_goals_fraction = kDefaultTopGoalsFraction) {
    if (records.empty()) throw ContractViolation("extract_features: no records");
    const int level_id = records.front().level_id;
    for (const auto& r : records)
        if (r.level_id != level_id)
            throw ContractViolation("extract_features: records span multiple levels");

    FeatureVector fv;
    fv.level_id = level_id;
    fv.set = set;

    if (set == FeatureSet::F3 || set == FeatureSet::F3P) {
        const double mf = set == FeatureSet::F3 ? 1.0 : top_moves_fraction;
        const double gf = set == FeatureSet::F3 ? 1.0 : top_goals_fraction;
        const auto v = detail::f3_values(records, mf, gf);
        fv.values = {{"pass_rate", v.pass_rate},
                     {"moves_left_ratio", v.moves_left},
                     {"cleared_goals", v.cleared_goals}};
        return fv;
    }

    const auto sorted = detail::sort_by_key(records, RunKey::MovesLeft);
    std::vector<double> pass;
    std::vector<double> goals;
    std::vector<double> ml;
    pass.reserve(sorted.size());
    goals.reserve(sorted.size());
    ml.reserve(sorted.size());
    for (const auto& r : sorted) {
        pass.push_back(r.passed ? 1.0 : 0.0);
        goals.push_back(r.goals_cleared_fraction);
        ml.push_back(moves_left_ratio(r));
    }
    auto goals_sorted = goals;
    auto ml_sorted = ml;
    std::sort(goals_sorted.begin(), goals_sorted.end());
    std::sort(ml_sorted.begin(), ml_sorted.end());

    const double pass_mean = detail::mean(pass);
    const double goals_mean = detail::mean(goals);
    const double ml_mean = detail::mean(ml);
    fv.values = {
        {"pass_mean", pass_mean},
        {"pass_std", detail::stddev_pop(pass, pass_mean)},
        {"goals_mean", goals_mean},
        {"goals_std", detail::stddev_pop(goals, goals_mean)},
        {"goals_min", goals_sorted.front()},
        {"goals_max", goals_sorted.back()},
        {"goals_p05", detail::percentile_sorted(goals_sorted, 0.05)},
        {"goals_p10", detail::percentile_sorted(goals_sorted, 0.10)},
        {"goals_p25", detail::percentile_sorted(goals_sorted, 0.25)},
        {"goals_p50", detail::percentile_sorted(goals_sorted, 0.50)},
        {"goals_p75", detail::percentile_sorted(goals_sorted, 0.75)},
        {"ml_mean", ml_mean},
        {"ml_std", detail::stddev_pop(ml, ml_mean)},
        {"ml_min", ml_sorted.front()},
        {"ml_max", ml_sorted.back()},
        {"ml_p05", detail::percentile_sorted(ml_sorted, 0.05)},
        {"ml_p10", detail::percentile_sorted(ml_sorted, 0.10)},
        {"ml_p25", detail::percentile_sorted(ml_sorted, 0.25)},
        {"ml_p50", detail::percentile_sorted(ml_sorted, 0.50)},
        {"ml_p75", detail::percentile_sorted(ml_sorted, 0.75)},
    };
    return fv;
}

// f3p for a search-agent level: pass_rate from the search agent's own runs,
// percentile features from the direct-policy agent's (large) run set.
inline FeatureVector combine_f3p(const std::vector<RunRecord>& mcts_records,
                                 const std::vector<RunRecord>& policy_records,
                                 double top_moves_fraction = kDefaultTopMovesFraction,
                                 double top_goals_fraction = kDefaultTopGoalsFraction) {
    const auto own = extract_features(mcts_records, FeatureSet::F3);
    const auto pol = extract_features(policy_records, FeatureSet::F3P, top_moves_fraction, top_goals_fraction);
    if (own.level_id != pol.level_id)
        throw ContractViolation("combine_f3p: record sets are for different levels");
    FeatureVector fv;
    fv.level_id = own.level_id;
    fv.set = FeatureSet::F3P;
    fv.values = {{"pass_rate", own.get("pass_rate")},
                 {"moves_left_ratio", pol.get("moves_left_ratio")},
                 {"cleared_goals", pol.get("cleared_goals")}};
    return fv;
}

// Group records per level id, preserving encounter order of levels.
inline std::vector<std::pair<int, std::vector<RunRecord>>> group_by_level(
    const std::vector<RunRecord>& records) {
    std::vector<std::pair<int, std::vector<RunRecord>>> grouped;
    std::map<int, std::size_t> where;
    for (const auto& r : records) {
        auto it = where.find(r.level_id);
        if (it == where.end()) {
            where.emplace(r.level_id, grouped.size());
            grouped.push_back({r.level_id, {r}});
        } else {
            grouped[it->second].second.push_back(r);
        }
    }
    return grouped;
}

namespace detail {

// Average ranks (1-based), ties share the mean rank of their run.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
        const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

}  // namespace detail

// Spearman rank correlation: Pearson correlation of average ranks. Strictly
// monotone inputs give exactly +/-1.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ContractViolation("spearman: length mismatch");
    if (x.size() < 3) throw ContractViolation("spearman: need at least 3 observations");
    const auto rx = detail::average_ranks(x);
    const auto ry = detail::average_ranks(y);
    const double mx = detail::mean(rx);
    const double my = detail::mean(ry);
    double sxx = 0.0;
    double syy = 0.0;
    double sxy = 0.0;
    bool identical = true;
    bool reversed = true;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        const double dx = rx[i] - mx;
        const double dy = ry[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
        if (rx[i] != ry[i]) identical = false;
        if (dx != -dy) reversed = false;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw UndefinedCorrelationError("spearman: zero rank variance");
    if (identical) return 1.0;
    if (reversed) return -1.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

struct SweepCell {
    double fraction = 0.0;
    std::string feature;
    std::optional<double> rho;  // empty when the correlation is undefined
};

inline const std::vector<double>& default_sweep_fractions() {
    static const std::vector<double> fractions = {0.05, 0.10, 0.15, 0.20, 0.30, 0.50, 0.75, 1.00};
    return fractions;
}

// Rank correlation of best-run feature averages against true pass rates,
// per feature and subset fraction. Rankings reuse the f3p keys: moves-left
// order for pass_rate and moves_left_ratio, cleared-goal order for
// cleared_goals. truth_pass maps level_id -> observed pass rate.
inline std::vector<SweepCell> correlation_sweep(const std::vector<RunRecord>& records,
                                                const std::map<int, double>& truth_pass,
                                                const std::vector<double>& fractions) {
    const auto grouped = group_by_level(records);
    if (grouped.empty()) throw ContractViolation("correlation_sweep: no records");
    std::vector<double> truth;
    for (const auto& [level_id, recs] : grouped) {
        auto it = truth_pass.find(level_id);
        if (it == truth_pass.end())
            throw ConfigError("no ground truth pass rate for level " + std::to_string(level_id));
        truth.push_back(it->second);
    }
    std::vector<SweepCell> cells;
    for (double fraction : fractions) {
        for (const std::string& feature : feature_names(FeatureSet::F3)) {
            SweepCell cell;
            cell.fraction = fraction;
            cell.feature = feature;
            std::vector<double> values;
            values.reserve(grouped.size());
            for (const auto& [level_id, recs] : grouped) {
                const RunKey key =
                    feature == "cleared_goals" ? RunKey::GoalsFraction : RunKey::MovesLeft;
                const auto subset = best_run_subset(recs, fraction, key);
                double total = 0.0;
                for (const auto& r : subset) {
                    if (feature == "pass_rate") total += r.passed ? 1.0 : 0.0;
                    else if (feature == "moves_left_ratio") total += moves_left_ratio(r);
                    else total += r.goals_cleared_fraction;
                }
                values.push_back(total / static_cast<double>(subset.size()));
            }
            try {
                cell.rho = spearman(values, truth);
            } catch (const UndefinedCorrelationError&) {
                cell.rho = std::nullopt;
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

}  // namespace playtest
