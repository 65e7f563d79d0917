#pragma once
// Rollout policies over ColorPop moves: uniform random, and a softmax over
// four hand-crafted move features whose weights are fit per level with a
// cross-entropy-method search. The feature vector for popping a group is
//   [0] group size / board cells
//   [1] tiles the pop contributes toward the goal / max(goals_remaining, 1)
//   [2] 1 if the pop clears the remaining goal (wins), else 0
//   [3] fraction of the clear target already done
// All entries live in [0, 1].

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "playtest/cem.hpp"
#include "playtest/env.hpp"
#include "playtest/errors.hpp"
#include "playtest/rng.hpp"

namespace playtest {

inline constexpr int kNumActionFeatures = 4;

struct PolicyWeights {
    std::array<double, kNumActionFeatures> weights{};
    double temperature = 1.0;
    int level_id = 0;
    std::uint64_t training_seed = 0;
};

inline void validate(const PolicyWeights& w) {
    for (double v : w.weights)
        if (!std::isfinite(v)) throw ConfigError("policy weights must be finite");
    if (!(w.temperature > 0.0) || !std::isfinite(w.temperature))
        throw ConfigError("policy temperature must be > 0");
}

namespace detail {

inline std::array<double, kNumActionFeatures> group_features(const GameState& s, const Group& g) {
    const double cells = static_cast<double>(s.width) * s.height;
    std::array<double, kNumActionFeatures> f{};
    f[0] = g.size / cells;
    f[1] = static_cast<double>(std::min(g.size, s.goals_remaining)) / std::max(s.goals_remaining, 1);
    f[2] = g.size >= s.goals_remaining ? 1.0 : 0.0;
    f[3] = s.goals_cleared_fraction();
    return f;
}

inline double group_score(const GameState& s, const Group& g, const PolicyWeights& w) {
    const auto f = group_features(s, g);
    double dot = 0.0;
    for (int i = 0; i < kNumActionFeatures; ++i) dot += w.weights[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
    return dot / w.temperature;
}

}  // namespace detail

inline std::array<double, kNumActionFeatures> action_features(const GameState& s, const Action& a) {
    if (s.status != Status::InProgress) throw ContractViolation("action_features: state is terminal");
    for (const auto& g : poppable_groups(s))
        if (g.anchor == a.cell) return detail::group_features(s, g);
    throw ContractViolation("action_features: action is not legal in this state");
}

// Softmax probabilities over the legal actions, in legal_actions order.
inline std::vector<double> action_distribution(const GameState& s, const PolicyWeights& w) {
    const auto groups = poppable_groups(s);
    if (groups.empty()) throw ContractViolation("action_distribution: no legal actions");
    std::vector<double> scores(groups.size());
    double max_score = -1e300;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        scores[i] = detail::group_score(s, groups[i], w);
        max_score = std::max(max_score, scores[i]);
    }
    double total = 0.0;
    for (auto& v : scores) {
        v = std::exp(v - max_score);
        total += v;
    }
    for (auto& v : scores) v /= total;
    return scores;
}

// Sample a move. weights == nullptr means the uniform rollout policy.
inline Action sample_action(const GameState& s, const PolicyWeights* weights, Rng& rng) {
    const auto groups = poppable_groups(s);
    if (groups.empty()) throw ContractViolation("sample_action: no legal actions");
    if (weights == nullptr) return Action{groups[rng.index(groups.size())].anchor};
    std::vector<double> scores(groups.size());
    double max_score = -1e300;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        scores[i] = detail::group_score(s, groups[i], *weights);
        max_score = std::max(max_score, scores[i]);
    }
    double total = 0.0;
    for (auto& v : scores) {
        v = std::exp(v - max_score);
        total += v;
    }
    const double u = rng.uniform01() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        acc += scores[i];
        if (u < acc) return Action{groups[i].anchor};
    }
    return Action{groups.back().anchor};
}

struct TrainConfig {
    int iterations = 30;
    int population = 32;
    double elite_fraction = 0.25;
    int episodes_per_candidate = 12;
    double init_std = 1.0;
    int workers = 1;
};

// Total undiscounted reward of one policy-run episode with 4x the level's
// base move budget (the direct-policy agent's allowance).
inline double policy_episode_return(const LevelConfig& level, const PolicyWeights& w, std::uint64_t seed) {
    const int budget = 4 * level.move_budget;
    GameState s = new_level(level, derive_seed(seed, 0x01));
    Rng rng(derive_seed(seed, 0x02));
    double total = 0.0;
    while (s.status == Status::InProgress) {
        const Action a = sample_action(s, &w, rng);
        auto out = step(s, a, budget);
        total += out.reward;
        s = std::move(out.next_state);
    }
    return total;
}

// Fit softmax weights for one level by CEM over episode returns. Candidate
// fitness is the mean return over episodes_per_candidate seeded episodes;
// episode seeds are shared across candidates within an iteration so
// comparisons use common random numbers. Returns the best candidate seen.
inline PolicyWeights train_policy(const LevelConfig& level, const TrainConfig& cfg, std::uint64_t seed) {
    validate(level);
    if (cfg.episodes_per_candidate < 1)
        throw ContractViolation("train_policy: episodes_per_candidate must be >= 1");
    CemOptions opt;
    opt.iterations = cfg.iterations;
    opt.population = cfg.population;
    opt.elite_fraction = cfg.elite_fraction;
    opt.init_mean.assign(kNumActionFeatures, 0.0);
    opt.init_std = cfg.init_std;
    opt.workers = cfg.workers;
    auto objective = [&](const std::vector<double>& theta, int iter, int /*cand*/) {
        PolicyWeights w;
        for (int i = 0; i < kNumActionFeatures; ++i) w.weights[static_cast<std::size_t>(i)] = theta[static_cast<std::size_t>(i)];
        double total = 0.0;
        for (int e = 0; e < cfg.episodes_per_candidate; ++e) {
            const std::uint64_t ep_seed = derive_seed(seed, 0xE9, static_cast<std::uint64_t>(iter),
                                                     static_cast<std::uint64_t>(e));
            total += policy_episode_return(level, w, ep_seed);
        }
        return total / cfg.episodes_per_candidate;
    };
    const CemResult r = cem_maximize(opt, objective, seed);
    PolicyWeights w;
    for (int i = 0; i < kNumActionFeatures; ++i) w.weights[static_cast<std::size_t>(i)] = r.best[static_cast<std::size_t>(i)];
    w.temperature = 1.0;
    w.level_id = level.level_id;
    w.training_seed = seed;
    return w;
}

}  // namespace playtest
