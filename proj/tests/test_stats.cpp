#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "playtest/stats.hpp"

using namespace playtest;

namespace {

RunRecord rec(int level, std::uint64_t seed, bool passed, int used, int left, double goals) {
    RunRecord r;
    r.level_id = level;
    r.agent = "vanilla";
    r.seed = seed;
    r.passed = passed;
    r.moves_used = used;
    r.moves_left = left;
    r.goals_cleared_fraction = goals;
    return r;
}

// Rank by counting comparisons instead of sorting, then Pearson via raw sums.
double oracle_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rank = [](const std::vector<double>& v) {
        std::vector<double> r(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            int less = 0;
            int equal = 0;
            for (std::size_t j = 0; j < v.size(); ++j) {
                if (v[j] < v[i]) ++less;
                if (v[j] == v[i]) ++equal;
            }
            r[i] = less + (equal + 1) / 2.0;
        }
        return r;
    };
    const auto rx = rank(x);
    const auto ry = rank(y);
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sx += rx[i];
        sy += ry[i];
        sxx += rx[i] * rx[i];
        syy += ry[i] * ry[i];
        sxy += rx[i] * ry[i];
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    return cov / std::sqrt(vx * vy);
}

std::vector<LevelConfig> tiny_levels() {
    return {{1, 4, 4, 2, 6, 6, 11}, {2, 5, 5, 3, 10, 7, 12}};
}

AgentSpec fast_vanilla() {
    AgentSpec spec;
    spec.kind = AgentKind::Vanilla;
    spec.overrides.iteration_budget = 8;
    spec.overrides.rollout_cap = 4;
    return spec;
}

}  // namespace

TEST_CASE("run collection is seeded per (level, run) and worker-independent", "[stats]") {
    const auto levels = tiny_levels();
    const auto spec = fast_vanilla();
    const auto runs = collect_runs(levels, spec, 5, 99, 1);
    REQUIRE(runs.size() == 10);
    for (int i = 0; i < 5; ++i) {
        REQUIRE(runs[static_cast<std::size_t>(i)].level_id == 1);
        REQUIRE(runs[static_cast<std::size_t>(i)].seed ==
                derive_seed(99, 1, static_cast<std::uint64_t>(i)));
        REQUIRE(runs[static_cast<std::size_t>(5 + i)].level_id == 2);
        REQUIRE(runs[static_cast<std::size_t>(5 + i)].seed ==
                derive_seed(99, 2, static_cast<std::uint64_t>(i)));
    }
    for (const auto& r : runs) {
        REQUIRE(r.agent == "vanilla");
        const double ratio = moves_left_ratio(r);
        REQUIRE(ratio >= 0.0);
        REQUIRE(ratio <= 1.0);
        if (r.passed) REQUIRE(r.goals_cleared_fraction == 1.0);
        if (!r.passed) REQUIRE(r.moves_left == 0);
    }

    const auto again = collect_runs(levels, spec, 5, 99, 1);
    const auto parallel = collect_runs(levels, spec, 5, 99, 3);
    for (std::size_t i = 0; i < runs.size(); ++i) {
        REQUIRE(runs[i].seed == again[i].seed);
        REQUIRE(runs[i].passed == again[i].passed);
        REQUIRE(runs[i].moves_used == again[i].moves_used);
        REQUIRE(runs[i].seed == parallel[i].seed);
        REQUIRE(runs[i].passed == parallel[i].passed);
        REQUIRE(runs[i].moves_used == parallel[i].moves_used);
        REQUIRE(runs[i].goals_cleared_fraction == parallel[i].goals_cleared_fraction);
    }
}

TEST_CASE("run collection validates its inputs", "[stats]") {
    const auto levels = tiny_levels();
    REQUIRE_THROWS_AS(collect_runs(levels, fast_vanilla(), 0, 1), ContractViolation);

    AgentSpec learned;
    learned.kind = AgentKind::Policy;
    REQUIRE_THROWS_AS(collect_runs(levels, learned, 2, 1), ConfigError);

    std::map<int, PolicyWeights> weights;
    weights[1] = PolicyWeights{};
    learned.weights = &weights;  // level 2 still missing
    REQUIRE_THROWS_AS(collect_runs(levels, learned, 2, 1), ConfigError);
}

TEST_CASE("best-run subsets follow the ceiling rule and seed tie-break", "[stats]") {
    std::vector<RunRecord> records;
    const int lefts[20] = {9, 7, 7, 5, 4, 4, 3, 3, 2, 2, 1, 1, 1, 0, 0, 0, 0, 0, 0, 0};
    for (int i = 0; i < 20; ++i)
        records.push_back(rec(1, static_cast<std::uint64_t>(i), lefts[i] > 0, 10 - lefts[i],
                              lefts[i], lefts[i] > 0 ? 1.0 : 0.5));

    SECTION("fraction one returns everything, sorted best-first") {
        const auto all = best_run_subset(records, 1.0);
        REQUIRE(all.size() == 20);
        for (std::size_t i = 1; i < all.size(); ++i)
            REQUIRE(all[i - 1].moves_left >= all[i].moves_left);
    }
    SECTION("twenty records at fraction 0.15 keep exactly three") {
        const auto top = best_run_subset(records, 0.15);
        REQUIRE(top.size() == 3);
        REQUIRE(top[0].moves_left == 9);
        REQUIRE(top[1].moves_left == 7);
        REQUIRE(top[2].moves_left == 7);
        REQUIRE(top[1].seed < top[2].seed);
    }
    SECTION("a 5% fraction keeps the single best record") {
        const auto top = best_run_subset(records, 0.05);
        REQUIRE(top.size() == 1);
        REQUIRE(top[0].moves_left == 9);
    }
    SECTION("subset size is the ceiling and contents are a subset of the input") {
        for (double fraction : {0.01, 0.1, 0.33, 0.5, 0.77, 1.0}) {
            const auto top = best_run_subset(records, fraction);
            REQUIRE(top.size() ==
                    static_cast<std::size_t>(std::ceil(fraction * 20.0)));
            for (const auto& r : top)
                REQUIRE(std::any_of(records.begin(), records.end(), [&](const RunRecord& o) {
                    return o.seed == r.seed && o.moves_left == r.moves_left;
                }));
        }
    }
    SECTION("goal-fraction key ranks by cleared goals") {
        const auto top = best_run_subset(records, 0.05, RunKey::GoalsFraction);
        REQUIRE(top.size() == 1);
        REQUIRE(top[0].goals_cleared_fraction == 1.0);
        REQUIRE(top[0].seed == 0);
    }
    SECTION("bad fractions and empty inputs are rejected") {
        REQUIRE_THROWS_AS(best_run_subset(records, 0.0), ContractViolation);
        REQUIRE_THROWS_AS(best_run_subset(records, 1.5), ContractViolation);
        REQUIRE_THROWS_AS(best_run_subset({}, 0.5), ContractViolation);
    }
}

TEST_CASE("feature extraction matches hand-computed values", "[stats]") {
    const std::vector<RunRecord> records = {
        rec(4, 0, true, 8, 2, 1.0),
        rec(4, 1, false, 10, 0, 0.6),
        rec(4, 2, false, 10, 0, 0.4),
        rec(4, 3, true, 5, 5, 1.0),
    };

    SECTION("F3 averages every run") {
        const auto fv = extract_features(records, FeatureSet::F3);
        REQUIRE(fv.level_id == 4);
        REQUIRE(fv.set == FeatureSet::F3);
        REQUIRE(fv.values.size() == 3);
        REQUIRE(fv.get("pass_rate") == Catch::Approx(0.5).margin(1e-15));
        REQUIRE(fv.get("moves_left_ratio") == Catch::Approx((0.2 + 0.0 + 0.0 + 0.5) / 4).margin(1e-15));
        REQUIRE(fv.get("cleared_goals") == Catch::Approx(0.75).margin(1e-15));
    }
    SECTION("all-passed records give unit pass and goal features") {
        const std::vector<RunRecord> wins = {rec(2, 0, true, 6, 4, 1.0), rec(2, 1, true, 7, 3, 1.0)};
        const auto fv = extract_features(wins, FeatureSet::F3);
        REQUIRE(fv.get("pass_rate") == 1.0);
        REQUIRE(fv.get("cleared_goals") == 1.0);
    }
    SECTION("F16 exposes the documented twenty statistics") {
        const auto fv = extract_features(records, FeatureSet::F16);
        REQUIRE(fv.values.size() == 20);
        const auto& names = feature_names(FeatureSet::F16);
        REQUIRE(names.size() == 20);
        for (std::size_t i = 0; i < names.size(); ++i) REQUIRE(fv.values[i].first == names[i]);
        for (const auto& [name, value] : fv.values) REQUIRE(std::isfinite(value));

        REQUIRE(fv.get("pass_mean") == Catch::Approx(0.5).margin(1e-15));
        REQUIRE(fv.get("pass_std") == Catch::Approx(0.5).margin(1e-15));
        REQUIRE(fv.get("goals_mean") == Catch::Approx(0.75).margin(1e-15));
        REQUIRE(fv.get("goals_min") == Catch::Approx(0.4).margin(1e-15));
        REQUIRE(fv.get("goals_max") == Catch::Approx(1.0).margin(1e-15));
        // sorted goals (0.4, 0.6, 1.0, 1.0): the median interpolates halfway
        REQUIRE(fv.get("goals_p50") == Catch::Approx(0.8).margin(1e-12));
        REQUIRE(fv.get("goals_p25") == Catch::Approx(0.55).margin(1e-12));
        REQUIRE(fv.get("ml_mean") == Catch::Approx(0.175).margin(1e-15));
        REQUIRE(fv.get("ml_min") == Catch::Approx(0.0).margin(1e-15));
        REQUIRE(fv.get("ml_max") == Catch::Approx(0.5).margin(1e-15));
    }
    SECTION("mixed-level records are rejected") {
        auto bad = records;
        bad.push_back(rec(9, 8, true, 4, 6, 1.0));
        REQUIRE_THROWS_AS(extract_features(bad, FeatureSet::F3), ContractViolation);
        REQUIRE_THROWS_AS(extract_features({}, FeatureSet::F3), ContractViolation);
    }
}

TEST_CASE("percentile features reward the best runs", "[stats]") {
    std::vector<RunRecord> records;
    records.push_back(rec(1, 0, true, 2, 8, 1.0));
    records.push_back(rec(1, 1, true, 4, 6, 1.0));
    for (int i = 2; i < 20; ++i) records.push_back(rec(1, static_cast<std::uint64_t>(i), false, 10, 0, 0.3));

    const auto f3 = extract_features(records, FeatureSet::F3);
    const auto f3p = extract_features(records, FeatureSet::F3P);
    REQUIRE(f3p.get("pass_rate") == f3.get("pass_rate"));
    REQUIRE(f3p.get("pass_rate") == Catch::Approx(0.1).margin(1e-15));
    REQUIRE(f3p.get("moves_left_ratio") > f3.get("moves_left_ratio"));
    REQUIRE(f3p.get("moves_left_ratio") == Catch::Approx((0.8 + 0.6 + 0.0) / 3).margin(1e-12));
    REQUIRE(f3p.get("cleared_goals") == Catch::Approx(1.0).margin(1e-15));

    SECTION("full-fraction percentile features collapse onto F3 exactly") {
        const auto collapsed = extract_features(records, FeatureSet::F3P, 1.0, 1.0);
        for (std::size_t i = 0; i < collapsed.values.size(); ++i) {
            REQUIRE(collapsed.values[i].first == f3.values[i].first);
            REQUIRE(collapsed.values[i].second == f3.values[i].second);
        }
    }
    SECTION("feature values ignore record order") {
        auto shuffled = records;
        std::mt19937 gen(17);
        std::shuffle(shuffled.begin(), shuffled.end(), gen);
        const auto a = extract_features(shuffled, FeatureSet::F3P);
        for (std::size_t i = 0; i < a.values.size(); ++i)
            REQUIRE(a.values[i].second == f3p.values[i].second);
        const auto b = extract_features(shuffled, FeatureSet::F16);
        const auto c = extract_features(records, FeatureSet::F16);
        for (std::size_t i = 0; i < b.values.size(); ++i)
            REQUIRE(b.values[i].second == c.values[i].second);
    }
}

TEST_CASE("search and policy records combine into one feature vector", "[stats]") {
    std::vector<RunRecord> mcts;
    for (int i = 0; i < 10; ++i) mcts.push_back(rec(3, static_cast<std::uint64_t>(i), i < 6, 8, i < 6 ? 2 : 0, i < 6 ? 1.0 : 0.5));
    std::vector<RunRecord> policy;
    for (int i = 0; i < 40; ++i)
        policy.push_back(rec(3, static_cast<std::uint64_t>(100 + i), i < 10, 6, i < 10 ? 4 : 0, i < 10 ? 1.0 : 0.25));

    const auto fv = combine_f3p(mcts, policy);
    REQUIRE(fv.set == FeatureSet::F3P);
    REQUIRE(fv.level_id == 3);
    REQUIRE(fv.get("pass_rate") == Catch::Approx(0.6).margin(1e-15));
    const auto pol = extract_features(policy, FeatureSet::F3P);
    REQUIRE(fv.get("moves_left_ratio") == pol.get("moves_left_ratio"));
    REQUIRE(fv.get("cleared_goals") == pol.get("cleared_goals"));

    auto other = policy;
    for (auto& r : other) r.level_id = 4;
    REQUIRE_THROWS_AS(combine_f3p(mcts, other), ContractViolation);
}

TEST_CASE("grouping preserves level encounter order", "[stats]") {
    const std::vector<RunRecord> records = {rec(7, 0, true, 1, 2, 1.0), rec(2, 1, false, 3, 0, 0.1),
                                            rec(7, 2, false, 3, 0, 0.2), rec(5, 3, true, 2, 1, 1.0)};
    const auto grouped = group_by_level(records);
    REQUIRE(grouped.size() == 3);
    REQUIRE(grouped[0].first == 7);
    REQUIRE(grouped[1].first == 2);
    REQUIRE(grouped[2].first == 5);
    REQUIRE(grouped[0].second.size() == 2);
    REQUIRE(grouped[0].second[1].seed == 2);
}

TEST_CASE("rank correlation handles monotone data exactly", "[stats]") {
    const std::vector<double> x = {0.1, 0.4, 0.5, 0.9, 1.3};
    std::vector<double> inc;
    std::vector<double> dec;
    for (double v : x) {
        inc.push_back(std::exp(v));
        dec.push_back(-v * v * v);
    }
    REQUIRE(spearman(x, inc) == 1.0);
    REQUIRE(spearman(x, dec) == -1.0);
}

TEST_CASE("rank correlation matches an independent oracle on tied data", "[stats]") {
    std::mt19937 gen(2718);
    std::uniform_int_distribution<int> small(0, 9);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> x(50);
        std::vector<double> y(50);
        for (auto& v : x) v = small(gen);
        for (auto& v : y) v = small(gen);
        double expected;
        try {
            expected = oracle_spearman(x, y);
        } catch (...) {
            continue;
        }
        if (!std::isfinite(expected)) continue;
        REQUIRE(spearman(x, y) == Catch::Approx(expected).margin(1e-12));
    }
}

TEST_CASE("rank correlation is invariant under monotone transforms", "[stats]") {
    std::mt19937 gen(31337);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> x(30);
    std::vector<double> y(30);
    for (auto& v : x) v = unit(gen);
    for (auto& v : y) v = unit(gen);
    const double base = spearman(x, y);
    std::vector<double> gx;
    std::vector<double> hy;
    for (double v : x) gx.push_back(std::exp(3.0 * v) + 1.0);
    for (double v : y) hy.push_back(std::atan(5.0 * v - 2.0));
    REQUIRE(spearman(gx, hy) == Catch::Approx(base).margin(1e-12));
}

TEST_CASE("rank correlation rejects degenerate inputs", "[stats]") {
    REQUIRE_THROWS_AS(spearman({1.0, 2.0}, {1.0, 2.0}), ContractViolation);
    REQUIRE_THROWS_AS(spearman({1.0, 2.0, 3.0}, {1.0, 2.0}), ContractViolation);
    REQUIRE_THROWS_AS(spearman({2.0, 2.0, 2.0}, {1.0, 2.0, 3.0}), UndefinedCorrelationError);
    REQUIRE_THROWS_AS(spearman({1.0, 2.0, 3.0}, {5.0, 5.0, 5.0}), UndefinedCorrelationError);
}

TEST_CASE("the correlation sweep reproduces all-run correlations at fraction one", "[stats]") {
    std::mt19937 gen(404);
    std::uniform_int_distribution<int> rand_left(0, 6);
    std::vector<RunRecord> records;
    std::map<int, double> truth;
    for (int level = 1; level <= 5; ++level) {
        int passed_count = 0;
        for (int i = 0; i < 20; ++i) {
            const int left = std::max(0, rand_left(gen) - level / 2);
            const bool passed = left > 0;
            passed_count += passed ? 1 : 0;
            records.push_back(rec(level, static_cast<std::uint64_t>(i), passed, 10 - left, left,
                                  passed ? 1.0 : 0.1 * level));
        }
        truth[level] = passed_count / 20.0 + 0.01 * level;
    }

    const auto cells = correlation_sweep(records, truth, {1.0});
    REQUIRE(cells.size() == 3);

    const auto grouped = group_by_level(records);
    std::vector<double> truth_vec;
    std::map<std::string, std::vector<double>> feature_values;
    for (const auto& [id, recs] : grouped) {
        truth_vec.push_back(truth.at(id));
        const auto fv = extract_features(recs, FeatureSet::F3);
        for (const auto& [name, value] : fv.values) feature_values[name].push_back(value);
    }
    for (const auto& cell : cells) {
        REQUIRE(cell.fraction == 1.0);
        REQUIRE(cell.rho.has_value());
        const double direct = spearman(feature_values.at(cell.feature), truth_vec);
        REQUIRE(*cell.rho == direct);
    }
}

TEST_CASE("the correlation sweep records undefined cells as missing", "[stats]") {
    std::vector<RunRecord> records;
    std::map<int, double> truth;
    for (int level = 1; level <= 4; ++level) {
        for (int i = 0; i < 4; ++i)
            records.push_back(rec(level, static_cast<std::uint64_t>(i), true, 5 + level, 5 - level + i % 2, 1.0));
        truth[level] = 0.2 * level;
    }
    const auto cells = correlation_sweep(records, truth, default_sweep_fractions());
    REQUIRE(cells.size() == default_sweep_fractions().size() * 3);
    bool saw_missing_pass = false;
    bool saw_defined_ml = false;
    for (const auto& cell : cells) {
        if (cell.feature == "pass_rate" && !cell.rho.has_value()) saw_missing_pass = true;
        if (cell.feature == "moves_left_ratio" && cell.rho.has_value()) saw_defined_ml = true;
    }
    REQUIRE(saw_missing_pass);
    REQUIRE(saw_defined_ml);

    std::map<int, double> sparse = truth;
    sparse.erase(2);
    REQUIRE_THROWS_AS(correlation_sweep(records, sparse, {1.0}), ConfigError);
}
