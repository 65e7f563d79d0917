#pragma once
// Per-level outcome prediction.
//
// Baseline: ordinary least squares from feature vectors to pass and churn
// rates (normal equations; a ridge term of 1e-8 kicks in when the system is
// singular or has more unknowns than levels). Predictions clamp to [0, 1].
//
// Extended: predicted pass rates are normalized into relative difficulties,
// then a simulated player population walks the level sequence. Each player
// draws skill, persistence and boredom from Beta distributions; at each
// level they churn out of boredom with probability boredom_i, then retry the
// level until passing (per-attempt pass chance sigmoid(slope * (skill_i -
// d_l))), churning with probability 1 - persistence_i after each failed
// attempt. Attempts cap at max_attempts; a capped player moves on with pass
// credit 0 and the cap event is counted. The reported per-level pass rate is
// the mean of 1/attempts-if-passed-else-0 over players who attempted, and
// churn rate is churners / players entering the level.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "playtest/cem.hpp"
#include "playtest/errors.hpp"
#include "playtest/parallel.hpp"
#include "playtest/rng.hpp"
#include "playtest/stats.hpp"

namespace playtest {

struct LevelPrediction {
    int level_id = 0;
    double pass_rate = 0.0;
    double churn_rate = 0.0;
};

struct GroundTruthRecord {
    int level_id = 0;
    double pass_rate = 0.0;
    double churn_rate = 0.0;
};

struct LinearModel {
    std::vector<std::string> feature_names;
    std::vector<double> pass_weights;  // aligned with feature_names
    double pass_intercept = 0.0;
    std::vector<double> churn_weights;
    double churn_intercept = 0.0;
};

namespace detail {

// Solve A x = b by Gaussian elimination with partial pivoting; returns false
// on a (near) singular pivot.
inline bool solve_linear_system(std::vector<std::vector<double>> a, std::vector<double> b,
                                std::vector<double>& x) {
    const std::size_t n = b.size();
    double scale = 0.0;
    for (const auto& row : a)
        for (double v : row) scale = std::max(scale, std::fabs(v));
    const double tol = std::max(scale, 1.0) * 1e-13;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        if (std::fabs(a[pivot][col]) < tol) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = a[r][col] / a[col][col];
            if (factor == 0.0) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
            b[r] -= factor * b[col];
        }
    }
    x.assign(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double v = b[i];
        for (std::size_t c = i + 1; c < n; ++c) v -= a[i][c] * x[c];
        x[i] = v / a[i][i];
    }
    return true;
}

// Least squares via normal equations, intercept in the last slot. Falls back
// to ridge (lambda = 1e-8 on the full diagonal) whenever plain OLS is
// singular, which also covers underdetermined designs such as the wide f16
// set on a small level pack.
inline std::vector<double> least_squares(const std::vector<std::vector<double>>& rows,
                                         const std::vector<double>& y) {
    const std::size_t n = rows.size();
    const std::size_t dim = rows.front().size() + 1;
    std::vector<std::vector<double>> gram(dim, std::vector<double>(dim, 0.0));
    std::vector<double> rhs(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> xi = rows[i];
        xi.push_back(1.0);
        for (std::size_t a = 0; a < dim; ++a) {
            rhs[a] += xi[a] * y[i];
            for (std::size_t b = 0; b < dim; ++b) gram[a][b] += xi[a] * xi[b];
        }
    }
    std::vector<double> beta;
    if (n >= dim && solve_linear_system(gram, rhs, beta)) return beta;
    auto ridge = gram;
    for (std::size_t d = 0; d < dim; ++d) ridge[d][d] += 1e-8;
    if (!solve_linear_system(ridge, rhs, beta))
        throw InsufficientDataError("least_squares: degenerate design matrix");
    return beta;
}

}  // namespace detail

// Fit the baseline linear model over matched (features, truth) levels.
inline LinearModel fit_linear(const std::vector<FeatureVector>& features,
                              const std::vector<GroundTruthRecord>& truth) {
    if (features.size() < 2)
        throw InsufficientDataError("fit_linear: need at least 2 levels");
    std::map<int, const GroundTruthRecord*> by_id;
    for (const auto& t : truth) by_id[t.level_id] = &t;

    LinearModel model;
    for (const auto& [name, value] : features.front().values) model.feature_names.push_back(name);

    std::vector<std::vector<double>> rows;
    std::vector<double> pass_y;
    std::vector<double> churn_y;
    for (const auto& fv : features) {
        if (fv.values.size() != model.feature_names.size())
            throw ContractViolation("fit_linear: inconsistent feature vectors");
        auto it = by_id.find(fv.level_id);
        if (it == by_id.end())
            throw ConfigError("fit_linear: no ground truth for level " + std::to_string(fv.level_id));
        std::vector<double> row;
        for (std::size_t i = 0; i < fv.values.size(); ++i) {
            if (fv.values[i].first != model.feature_names[i])
                throw ContractViolation("fit_linear: feature name mismatch");
            row.push_back(fv.values[i].second);
        }
        rows.push_back(std::move(row));
        pass_y.push_back(it->second->pass_rate);
        churn_y.push_back(it->second->churn_rate);
    }

    auto pass_beta = detail::least_squares(rows, pass_y);
    auto churn_beta = detail::least_squares(rows, churn_y);
    model.pass_intercept = pass_beta.back();
    pass_beta.pop_back();
    model.pass_weights = std::move(pass_beta);
    model.churn_intercept = churn_beta.back();
    churn_beta.pop_back();
    model.churn_weights = std::move(churn_beta);
    return model;
}

inline LevelPrediction predict_linear(const LinearModel& model, const FeatureVector& fv) {
    if (fv.values.size() != model.feature_names.size())
        throw ContractViolation("predict_linear: feature count mismatch");
    double pass = model.pass_intercept;
    double churn = model.churn_intercept;
    for (std::size_t i = 0; i < fv.values.size(); ++i) {
        if (fv.values[i].first != model.feature_names[i])
            throw ContractViolation("predict_linear: feature name mismatch");
        pass += model.pass_weights[i] * fv.values[i].second;
        churn += model.churn_weights[i] * fv.values[i].second;
    }
    LevelPrediction out;
    out.level_id = fv.level_id;
    out.pass_rate = std::clamp(pass, 0.0, 1.0);
    out.churn_rate = std::clamp(churn, 0.0, 1.0);
    return out;
}

// Map predicted pass rates to relative difficulties against a reference
// range: d = (ref_max - pass) / (ref_max - ref_min), clamped to [0, 1]. A
// collapsed range maps everything to 0.5.
inline std::vector<double> normalize_difficulty(const std::vector<double>& pass_rates,
                                                double ref_min, double ref_max) {
    std::vector<double> out;
    out.reserve(pass_rates.size());
    const double span = ref_max - ref_min;
    for (double p : pass_rates) {
        if (std::fabs(span) < 1e-12) out.push_back(0.5);
        else out.push_back(std::clamp((ref_max - p) / span, 0.0, 1.0));
    }
    return out;
}

// Self-normalizing variant: the reference range is the input's own range.
inline std::vector<double> normalize_difficulty(const std::vector<double>& pass_rates) {
    if (pass_rates.empty()) throw ContractViolation("normalize_difficulty: no levels");
    const auto [lo, hi] = std::minmax_element(pass_rates.begin(), pass_rates.end());
    return normalize_difficulty(pass_rates, *lo, *hi);
}

struct PopulationParams {
    double skill_alpha = 2.0;
    double skill_beta = 2.0;
    double persistence_alpha = 8.0;
    double persistence_beta = 2.0;
    double boredom_alpha = 2.0;
    double boredom_beta = 38.0;
    double slope = 6.0;
    int population_size = 10000;
    int max_attempts = 50;
};

inline void validate(const PopulationParams& p) {
    const double shapes[] = {p.skill_alpha,      p.skill_beta, p.persistence_alpha, p.persistence_beta,
                             p.boredom_alpha,    p.boredom_beta, p.slope};
    for (double v : shapes)
        if (!(v > 0.0) || !std::isfinite(v))
            throw ConfigError("population params: shapes and slope must be finite and > 0");
    if (p.population_size < 1) throw ConfigError("population params: population_size must be >= 1");
    if (p.max_attempts < 1) throw ConfigError("population params: max_attempts must be >= 1");
}

struct LevelDifficulty {
    int level_id = 0;
    double difficulty = 0.0;  // in [0, 1]
};

struct PopulationResult {
    std::vector<LevelPrediction> predictions;  // truncated if everyone left
    std::vector<int> entering;                 // players entering each level
    std::vector<int> capped;                   // cap events per level
    bool truncated = false;
};

namespace detail {

struct PopLevelTally {
    std::int64_t entering = 0;
    std::int64_t attempted = 0;
    std::int64_t churned = 0;
    std::int64_t capped = 0;
    double credit = 0.0;
};

}  // namespace detail

// Simulate the player population over the level sequence. Per-player and
// per-(player, level) RNG streams are derived from (seed, player index), so
// the result is independent of worker count and the per-level outcome of a
// player never depends on other players.
inline PopulationResult simulate_population(const std::vector<LevelDifficulty>& levels,
                                            const PopulationParams& params, std::uint64_t seed,
                                            int workers = 1) {
    validate(params);
    if (levels.empty()) throw ContractViolation("simulate_population: no levels");
    for (const auto& l : levels)
        if (l.difficulty < 0.0 || l.difficulty > 1.0)
            throw ContractViolation("simulate_population: difficulty outside [0, 1]");

    const std::size_t n_levels = levels.size();
    const std::size_t pop = static_cast<std::size_t>(params.population_size);
    constexpr std::size_t kBlock = 1024;
    const std::size_t n_blocks = (pop + kBlock - 1) / kBlock;
    std::vector<std::vector<detail::PopLevelTally>> block_tallies(
        n_blocks, std::vector<detail::PopLevelTally>(n_levels));

    parallel_for(n_blocks, workers, [&](std::size_t block) {
        auto& tally = block_tallies[block];
        const std::size_t begin = block * kBlock;
        const std::size_t end = std::min(begin + kBlock, pop);
        for (std::size_t i = begin; i < end; ++i) {
            Rng trait_rng(derive_seed(seed, 0xA0, static_cast<std::uint64_t>(i)));
            const double skill = trait_rng.beta(params.skill_alpha, params.skill_beta);
            const double persistence = trait_rng.beta(params.persistence_alpha, params.persistence_beta);
            const double boredom = trait_rng.beta(params.boredom_alpha, params.boredom_beta);
            for (std::size_t l = 0; l < n_levels; ++l) {
                auto& t = tally[l];
                t.entering += 1;
                Rng rng(derive_seed(seed, 0xB0, static_cast<std::uint64_t>(i), static_cast<std::uint64_t>(l)));
                if (rng.uniform01() < boredom) {
                    t.churned += 1;
                    break;
                }
                t.attempted += 1;
                const double q = 1.0 / (1.0 + std::exp(-params.slope * (skill - levels[l].difficulty)));
                bool passed = false;
                bool churned = false;
                for (int attempt = 1; attempt <= params.max_attempts; ++attempt) {
                    if (rng.uniform01() < q) {
                        t.credit += 1.0 / attempt;
                        passed = true;
                        break;
                    }
                    if (rng.uniform01() < 1.0 - persistence) {
                        churned = true;
                        break;
                    }
                }
                if (churned) {
                    t.churned += 1;
                    break;
                }
                if (!passed) t.capped += 1;  // moves on with credit 0
            }
        }
    });

    PopulationResult out;
    for (std::size_t l = 0; l < n_levels; ++l) {
        detail::PopLevelTally total;
        for (const auto& tally : block_tallies) {
            total.entering += tally[l].entering;
            total.attempted += tally[l].attempted;
            total.churned += tally[l].churned;
            total.capped += tally[l].capped;
            total.credit += tally[l].credit;
        }
        if (total.entering == 0) {
            out.truncated = true;
            break;
        }
        LevelPrediction p;
        p.level_id = levels[l].level_id;
        p.pass_rate = total.attempted > 0 ? total.credit / static_cast<double>(total.attempted) : 0.0;
        p.churn_rate = static_cast<double>(total.churned) / static_cast<double>(total.entering);
        out.predictions.push_back(p);
        out.entering.push_back(static_cast<int>(total.entering));
        out.capped.push_back(static_cast<int>(total.capped));
    }
    return out;
}

struct PopulationFitOptions {
    int iterations = 30;
    int population = 24;       // CEM candidates per iteration
    double elite_fraction = 0.25;
    double churn_weight = 1.0;
    int sim_population = 2000;  // players simulated per candidate evaluation
    int max_attempts = 50;
    int workers = 1;
};

// The fitting objective for a given parameter set, exposed so callers can
// compare fitted parameters against references under identical evaluation.
// The candidate's population_size and max_attempts are replaced by the
// fitting options; levels absent from a truncated simulation count as
// pass = 0, churn = 1 (worst case), steering the search away from parameter
// regions that empty the population.
inline double population_fit_objective(const std::vector<LevelDifficulty>& levels,
                                       const std::vector<GroundTruthRecord>& truth,
                                       const PopulationFitOptions& opt, std::uint64_t seed,
                                       const PopulationParams& candidate) {
    if (truth.empty()) throw InsufficientDataError("population_fit_objective: no ground truth");
    std::map<int, const GroundTruthRecord*> by_id;
    for (const auto& t : truth) by_id[t.level_id] = &t;
    PopulationParams p = candidate;
    p.population_size = opt.sim_population;
    p.max_attempts = opt.max_attempts;
    const auto sim = simulate_population(levels, p, derive_seed(seed, 0xF17), 1);
    std::map<int, const LevelPrediction*> predicted;
    for (const auto& lp : sim.predictions) predicted[lp.level_id] = &lp;
    double pass_se = 0.0;
    double churn_se = 0.0;
    int n = 0;
    for (const auto& [level_id, t] : by_id) {
        double pass_pred = 0.0;
        double churn_pred = 1.0;
        auto it = predicted.find(level_id);
        if (it != predicted.end()) {
            pass_pred = it->second->pass_rate;
            churn_pred = it->second->churn_rate;
        }
        pass_se += (pass_pred - t->pass_rate) * (pass_pred - t->pass_rate);
        churn_se += (churn_pred - t->churn_rate) * (churn_pred - t->churn_rate);
        ++n;
    }
    return 0.5 * (pass_se / n + opt.churn_weight * (churn_se / n));
}

namespace detail {

inline PopulationParams population_params_from_log(const std::vector<double>& theta,
                                                   const PopulationFitOptions& opt) {
    PopulationParams p;
    auto val = [&](std::size_t i) { return std::exp(std::clamp(theta[i], -10.0, 10.0)); };
    p.skill_alpha = val(0);
    p.skill_beta = val(1);
    p.persistence_alpha = val(2);
    p.persistence_beta = val(3);
    p.boredom_alpha = val(4);
    p.boredom_beta = val(5);
    p.slope = val(6);
    p.population_size = opt.sim_population;
    p.max_attempts = opt.max_attempts;
    return p;
}

}  // namespace detail

// Fit the seven population scalars (six Beta shapes + slope) by CEM in log
// space under population_fit_objective. Only levels present in `truth` enter
// the objective; the simulation still walks the full level sequence. All
// candidates share one fixed simulation seed, so fits are deterministic and
// comparisons across candidates use common random numbers.
inline PopulationParams fit_population(const std::vector<LevelDifficulty>& levels,
                                       const std::vector<GroundTruthRecord>& truth,
                                       const PopulationFitOptions& opt, std::uint64_t seed) {
    if (truth.empty()) throw InsufficientDataError("fit_population: no ground truth");
    CemOptions cem;
    cem.iterations = opt.iterations;
    cem.population = opt.population;
    cem.elite_fraction = opt.elite_fraction;
    cem.init_mean = {std::log(2.0), std::log(2.0), std::log(4.0), std::log(2.0),
                     std::log(2.0), std::log(18.0), std::log(5.0)};
    cem.init_std = 0.8;
    cem.workers = opt.workers;
    const CemResult r = cem_maximize(
        cem,
        [&](const std::vector<double>& theta, int, int) {
            return -population_fit_objective(levels, truth, opt, seed,
                                             detail::population_params_from_log(theta, opt));
        },
        seed);
    return detail::population_params_from_log(r.best, opt);
}

}  // namespace playtest
