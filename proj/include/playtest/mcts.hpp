#pragma once
// Monte Carlo tree search over any deterministic-transition environment E
// exposing:
//   using State / Action;            (Action totally ordered, State ==)
//   std::vector<Action> actions(s);  empty exactly when terminal
//   bool terminal(s);
//   std::pair<State, double> transition(s, a);
//
// Search follows UCT with two knobs that define the agent variants:
//   - rollouts are truncated at rollout_cap moves and summed with discount
//     gamma (gamma = 1 for the undiscounted variants);
//   - backpropagation is discounted with the same gamma: walking leaf to
//     root, v <- child_edge_reward + gamma * v, and each node accumulates
//     the v computed at its own depth.
//
// Counting convention: every node, the root included, carries one visit from
// its creation, so N(node) = 1 + sum of child visits holds at every expanded
// node after any number of iterations. A decide() call always runs its full
// iteration budget, leaving a fresh root at N = budget + 1.
//
// Tie-breaking is deterministic everywhere: equal UCT scores and equal visit
// counts resolve to the smallest action in the environment's action order.

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "playtest/env.hpp"
#include "playtest/errors.hpp"
#include "playtest/policy.hpp"
#include "playtest/rng.hpp"
#include "playtest/run_record.hpp"

namespace playtest {

inline constexpr double kDefaultUctC = 1.4142135623730951;  // sqrt(2)
inline constexpr int kDefaultIterationBudget = 200;
inline constexpr int kDefaultRolloutCap = 10;
inline constexpr double kMyopicGamma = 0.9;

enum class AgentKind { Vanilla, Policy, Myopic, PolicyMyopic, PolicyOnly };

inline std::string agent_name(AgentKind kind) {
    switch (kind) {
        case AgentKind::Vanilla: return "vanilla";
        case AgentKind::Policy: return "policy";
        case AgentKind::Myopic: return "myopic";
        case AgentKind::PolicyMyopic: return "policy-myopic";
        case AgentKind::PolicyOnly: return "policy-only";
    }
    throw ContractViolation("agent_name: unknown agent kind");
}

inline std::optional<AgentKind> parse_agent(const std::string& name) {
    if (name == "vanilla") return AgentKind::Vanilla;
    if (name == "policy") return AgentKind::Policy;
    if (name == "myopic") return AgentKind::Myopic;
    if (name == "policy-myopic") return AgentKind::PolicyMyopic;
    if (name == "policy-only") return AgentKind::PolicyOnly;
    return std::nullopt;
}

inline bool uses_learned_rollouts(AgentKind kind) {
    return kind == AgentKind::Policy || kind == AgentKind::PolicyMyopic || kind == AgentKind::PolicyOnly;
}

struct VariantConfig {
    int iteration_budget = kDefaultIterationBudget;
    int rollout_cap = kDefaultRolloutCap;
    double gamma = 1.0;        // rollout and backpropagation discount
    double c = kDefaultUctC;   // UCT exploration constant
    int agent_move_budget = 0; // moves the agent may spend on the level
};

struct VariantOverrides {
    std::optional<int> iteration_budget;
    std::optional<int> rollout_cap;
    std::optional<double> gamma;
    std::optional<double> c;
};

// Defaults per agent kind: myopic variants discount at 0.9, the others run
// undiscounted; the direct-policy agent gets four times the level's budget.
inline VariantConfig variant_config(AgentKind kind, const LevelConfig& level,
                                    const VariantOverrides& over = {}) {
    VariantConfig cfg;
    cfg.gamma = (kind == AgentKind::Myopic || kind == AgentKind::PolicyMyopic) ? kMyopicGamma : 1.0;
    cfg.agent_move_budget =
        kind == AgentKind::PolicyOnly ? 4 * level.move_budget : level.move_budget;
    if (over.iteration_budget) cfg.iteration_budget = *over.iteration_budget;
    if (over.rollout_cap) cfg.rollout_cap = *over.rollout_cap;
    if (over.gamma) cfg.gamma = *over.gamma;
    if (over.c) cfg.c = *over.c;
    if (cfg.iteration_budget < 1) throw ConfigError("iteration budget must be >= 1");
    if (cfg.rollout_cap < 0) throw ConfigError("rollout cap must be >= 0");
    if (!(cfg.gamma > 0.0) || cfg.gamma > 1.0) throw ConfigError("gamma must be in (0, 1]");
    if (cfg.c < 0.0) throw ConfigError("exploration constant must be >= 0");
    return cfg;
}

// Truncated discounted playout from state: at most rollout_cap moves sampled
// from the rollout policy, returning sum_t gamma^t r_t with t = 0 at the
// first rollout move. Terminal input yields 0.
template <typename Env, typename RolloutFn>
double rollout(const Env& env, const typename Env::State& state, const VariantConfig& cfg,
               RolloutFn&& policy, Rng& rng) {
    if (env.terminal(state)) return 0.0;
    double total = 0.0;
    double discount = 1.0;
    typename Env::State s = state;
    for (int t = 0; t < cfg.rollout_cap; ++t) {
        const auto a = policy(s, rng);
        auto [next, reward] = env.transition(s, a);
        total += discount * reward;
        discount *= cfg.gamma;
        s = std::move(next);
        if (env.terminal(s)) break;
    }
    return total;
}

template <typename Env>
class SearchTree {
  public:
    using State = typename Env::State;
    using Action = typename Env::Action;
    using RolloutPolicy = std::function<Action(const State&, Rng&)>;

    struct Node {
        State state;
        double edge_reward = 0.0;  // reward received entering this node
        int visits = 0;
        double value = 0.0;  // accumulated backup values
        bool terminal = false;
        std::vector<Action> untried;
        std::vector<std::pair<Action, std::unique_ptr<Node>>> children;
    };

    SearchTree(Env env, State root_state, VariantConfig cfg, RolloutPolicy rollout_policy,
               std::uint64_t seed)
        : env_(std::move(env)),
          cfg_(cfg),
          rollout_policy_(std::move(rollout_policy)),
          rng_(seed) {
        root_ = make_node(std::move(root_state), 0.0);
        root_->visits = 1;  // creation visit
    }

    const Node& root() const { return *root_; }
    const VariantConfig& config() const { return cfg_; }

    static double uct_score(const Node& parent, const Node& child, double c) {
        return child.value / child.visits + c * std::sqrt(std::log(static_cast<double>(parent.visits)) / child.visits);
    }

    // Descend by UCT until reaching a node that is terminal or still has
    // untried actions. Children are only ever ranked once visited, and ties
    // go to the smallest action.
    std::vector<Node*> select() {
        std::vector<Node*> path{root_.get()};
        Node* node = root_.get();
        while (!node->terminal && node->untried.empty() && !node->children.empty()) {
            Node* best = nullptr;
            const Action* best_action = nullptr;
            double best_score = 0.0;
            for (const auto& [action, child] : node->children) {
                const double score = uct_score(*node, *child, cfg_.c);
                if (best == nullptr || score > best_score ||
                    (score == best_score && action < *best_action)) {
                    best = child.get();
                    best_action = &action;
                    best_score = score;
                }
            }
            node = best;
            path.push_back(node);
        }
        return path;
    }

    // Expand one untried action (chosen uniformly) of a non-terminal node.
    Node* expand(Node* node) {
        if (node->terminal) throw ContractViolation("expand: node is terminal");
        if (node->untried.empty()) throw ContractViolation("expand: node is fully expanded");
        const std::size_t pick = rng_.index(node->untried.size());
        const Action action = node->untried[pick];
        node->untried.erase(node->untried.begin() + static_cast<std::ptrdiff_t>(pick));
        auto [next, reward] = env_.transition(node->state, action);
        auto child = make_node(std::move(next), reward);
        Node* out = child.get();
        node->children.emplace_back(action, std::move(child));
        return out;
    }

    // Discounted backup along a root..leaf path. leaf_value is the leaf's
    // own backup value (its rollout return; 0 for a terminal leaf, whose
    // entering reward then reaches the parent through the edge term).
    void backpropagate(const std::vector<Node*>& path, double leaf_value) {
        if (path.empty()) throw ContractViolation("backpropagate: empty path");
        double v = leaf_value;
        for (std::size_t i = path.size(); i-- > 0;) {
            Node* node = path[i];
            if (i + 1 < path.size()) v = path[i + 1]->edge_reward + cfg_.gamma * v;
            node->visits += 1;
            node->value += v;
        }
    }

    // Run the full iteration budget, then commit to the most-visited root
    // child (ties to the smallest action).
    Action decide() {
        if (root_->terminal) throw ContractViolation("decide: root is terminal");
        for (int iter = 0; iter < cfg_.iteration_budget; ++iter) {
            auto path = select();
            Node* leaf = path.back();
            if (leaf->terminal) {
                backpropagate(path, 0.0);
                continue;
            }
            Node* child = expand(leaf);
            path.push_back(child);
            const double value = rollout(env_, child->state, cfg_, rollout_policy_, rng_);
            backpropagate(path, value);
        }
        if (root_->children.empty()) throw ContractViolation("decide: no children after search");
        const std::pair<Action, std::unique_ptr<Node>>* best = nullptr;
        for (const auto& entry : root_->children) {
            if (best == nullptr || entry.second->visits > best->second->visits ||
                (entry.second->visits == best->second->visits && entry.first < best->first))
                best = &entry;
        }
        return best->first;
    }

    // Re-root after the environment's real transition: keep the committed
    // child's subtree when its cached state matches the observed next state,
    // otherwise start a fresh root from the observed state.
    void commit(const Action& action, const State& observed_next) {
        for (auto& [child_action, child] : root_->children) {
            if (child_action == action) {
                if (child->state == observed_next) {
                    root_ = std::move(child);
                    return;
                }
                break;
            }
        }
        root_ = make_node(State(observed_next), 0.0);
        root_->visits = 1;
    }

    int max_depth() const { return depth_below(*root_); }

  private:
    std::unique_ptr<Node> make_node(State state, double edge_reward) {
        auto node = std::make_unique<Node>();
        node->terminal = env_.terminal(state);
        if (!node->terminal) node->untried = env_.actions(state);
        node->state = std::move(state);
        node->edge_reward = edge_reward;
        return node;
    }

    static int depth_below(const Node& node) {
        int deepest = 0;
        for (const auto& [action, child] : node.children)
            deepest = std::max(deepest, 1 + depth_below(*child));
        return deepest;
    }

    Env env_;
    VariantConfig cfg_;
    RolloutPolicy rollout_policy_;
    Rng rng_;
    std::unique_ptr<Node> root_;
};

// Play one ColorPop episode with the given agent. MCTS variants search with
// the level's base budget and reuse the committed subtree between moves; the
// direct-policy agent samples moves straight from the weights with 4x the
// base budget. weights may be null only for the uniform-rollout variants.
inline RunRecord play_level(const LevelConfig& level, AgentKind kind, const VariantConfig& cfg,
                            const PolicyWeights* weights, std::uint64_t seed) {
    validate(level);
    if (uses_learned_rollouts(kind) && weights == nullptr)
        throw ConfigError("agent '" + agent_name(kind) + "' needs trained policy weights");
    if (cfg.agent_move_budget < 1) throw ContractViolation("play_level: agent_move_budget must be >= 1");

    GameState s = new_level(level, derive_seed(seed, 0x51));

    if (kind == AgentKind::PolicyOnly) {
        Rng rng(derive_seed(seed, 0x52));
        while (s.status == Status::InProgress) {
            const Action a = sample_action(s, weights, rng);
            s = step(s, a, cfg.agent_move_budget).next_state;
        }
    } else {
        ColorPopEnv env{cfg.agent_move_budget};
        typename SearchTree<ColorPopEnv>::RolloutPolicy rollout_policy;
        if (uses_learned_rollouts(kind)) {
            const PolicyWeights w = *weights;
            rollout_policy = [w](const GameState& state, Rng& rng) {
                return sample_action(state, &w, rng);
            };
        } else {
            rollout_policy = [](const GameState& state, Rng& rng) {
                return sample_action(state, nullptr, rng);
            };
        }
        SearchTree<ColorPopEnv> tree(env, s, cfg, std::move(rollout_policy), derive_seed(seed, 0x53));
        while (s.status == Status::InProgress) {
            const Action a = tree.decide();
            s = step(s, a, cfg.agent_move_budget).next_state;
            tree.commit(a, s);
        }
    }

    RunRecord rec;
    rec.level_id = level.level_id;
    rec.agent = agent_name(kind);
    rec.seed = seed;
    rec.passed = s.status == Status::Won;
    rec.moves_used = s.moves_used;
    rec.moves_left = rec.passed ? cfg.agent_move_budget - s.moves_used : 0;
    rec.goals_cleared_fraction = s.goals_cleared_fraction();
    return rec;
}

}  // namespace playtest
