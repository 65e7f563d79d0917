#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include "playtest/env.hpp"

using namespace playtest;

namespace {

GameState make_state(int w, int h, int colors, const std::vector<int>& cells, int goals_remaining,
                     int moves_used = 0, std::uint64_t rng_seed = 7) {
    GameState s;
    s.width = w;
    s.height = h;
    s.num_colors = colors;
    s.goal_count = goals_remaining;
    s.goals_remaining = goals_remaining;
    s.moves_used = moves_used;
    s.rng = Rng(rng_seed);
    s.grid.reserve(cells.size());
    for (int v : cells) s.grid.push_back(static_cast<std::int8_t>(v));
    return s;
}

// Independent flood fill over 4-neighbourhoods; returns the sorted smallest
// member of every same-color region of size >= 2.
std::vector<Cell> oracle_anchors(const GameState& s) {
    const int w = s.width;
    const int h = s.height;
    std::vector<char> seen(static_cast<std::size_t>(w) * h, 0);
    std::vector<Cell> anchors;
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (seen[static_cast<std::size_t>(r) * w + c]) continue;
            const auto color = s.at(r, c);
            std::vector<std::pair<int, int>> stack{{r, c}};
            std::vector<std::pair<int, int>> members;
            seen[static_cast<std::size_t>(r) * w + c] = 1;
            while (!stack.empty()) {
                const auto [cr, cc] = stack.back();
                stack.pop_back();
                members.emplace_back(cr, cc);
                constexpr int dr[] = {-1, 1, 0, 0};
                constexpr int dc[] = {0, 0, -1, 1};
                for (int k = 0; k < 4; ++k) {
                    const int nr = cr + dr[k];
                    const int nc = cc + dc[k];
                    if (nr < 0 || nr >= h || nc < 0 || nc >= w) continue;
                    auto& mark = seen[static_cast<std::size_t>(nr) * w + nc];
                    if (mark || s.at(nr, nc) != color) continue;
                    mark = 1;
                    stack.emplace_back(nr, nc);
                }
            }
            if (members.size() >= 2) {
                const auto mn = *std::min_element(members.begin(), members.end());
                anchors.push_back(Cell{mn.first, mn.second});
            }
        }
    }
    std::sort(anchors.begin(), anchors.end());
    return anchors;
}

GameState random_grid_state(std::mt19937& gen) {
    std::uniform_int_distribution<int> dim(4, 10);
    std::uniform_int_distribution<int> col(2, 8);
    const int w = dim(gen);
    const int h = dim(gen);
    const int colors = col(gen);
    std::uniform_int_distribution<int> pick(0, colors - 1);
    std::vector<int> cells(static_cast<std::size_t>(w) * h);
    for (auto& c : cells) c = pick(gen);
    return make_state(w, h, colors, cells, w * h / 2);
}

bool grid_full(const GameState& s) {
    return std::all_of(s.grid.begin(), s.grid.end(), [&](std::int8_t v) {
        return v >= 0 && v < s.num_colors;
    });
}

}  // namespace

TEST_CASE("level validation rejects out-of-range configs", "[env]") {
    LevelConfig ok{1, 8, 8, 4, 40, 15, 123};
    REQUIRE_NOTHROW(validate(ok));

    auto bad = ok;
    bad.width = 3;
    REQUIRE_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.height = 17;
    REQUIRE_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.num_colors = 1;
    REQUIRE_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.num_colors = 9;
    REQUIRE_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.goal_count = 0;
    REQUIRE_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.goal_count = 8 * 8 * 10 + 1;
    REQUIRE_THROWS_AS(validate(bad), ConfigError);
    bad = ok;
    bad.move_budget = 0;
    REQUIRE_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("new_level is deterministic in (level, seed) and varies across seeds", "[env]") {
    const LevelConfig level{3, 8, 8, 4, 40, 14, 777};
    const GameState a = new_level(level, 42);
    const GameState b = new_level(level, 42);
    REQUIRE(a == b);
    REQUIRE(a.moves_used == 0);
    REQUIRE(a.goals_remaining == level.goal_count);
    REQUIRE(a.status == Status::InProgress);
    REQUIRE(grid_full(a));
    REQUIRE_FALSE(legal_actions(a).empty());

    int distinct = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        if (!(new_level(level, seed).grid == a.grid)) ++distinct;
    }
    REQUIRE(distinct >= 99);
}

TEST_CASE("legal actions on handcrafted grids", "[env]") {
    SECTION("uniform single-color block has exactly one action at its smallest cell") {
        const auto s = make_state(2, 2, 3, {1, 1, 1, 1}, 4);
        const auto acts = legal_actions(s);
        REQUIRE(acts.size() == 1);
        REQUIRE(acts[0].cell == Cell{0, 0});
    }
    SECTION("checkerboard has no legal action") {
        const auto s = make_state(4, 4, 2,
                                  {0, 1, 0, 1,
                                   1, 0, 1, 0,
                                   0, 1, 0, 1,
                                   1, 0, 1, 0},
                                  8);
        REQUIRE(legal_actions(s).empty());
        REQUIRE(is_terminal(s) == Status::InProgress);
    }
    SECTION("two separate groups yield two sorted anchors") {
        const auto s = make_state(4, 4, 3,
                                  {0, 0, 1, 2,
                                   2, 1, 2, 1,
                                   1, 2, 1, 2,
                                   2, 1, 3, 3},
                                  8);
        const auto acts = legal_actions(s);
        REQUIRE(acts.size() == 2);
        REQUIRE(acts[0].cell == Cell{0, 0});
        REQUIRE(acts[1].cell == Cell{3, 2});
        REQUIRE(std::is_sorted(acts.begin(), acts.end()));
    }
}

TEST_CASE("legal actions match an independent flood fill on random grids", "[env]") {
    std::mt19937 gen(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto s = random_grid_state(gen);
        const auto expected = oracle_anchors(s);
        const auto acts = legal_actions(s);
        REQUIRE(acts.size() == expected.size());
        for (std::size_t i = 0; i < acts.size(); ++i) REQUIRE(acts[i].cell == expected[i]);

        const auto groups = poppable_groups(s);
        REQUIRE(groups.size() == expected.size());
        for (std::size_t i = 0; i < groups.size(); ++i) {
            REQUIRE(groups[i].anchor == expected[i]);
            REQUIRE(groups[i].size >= 2);
        }
    }
}

TEST_CASE("step applies move cost and goal credit", "[env]") {
    // Column 0 holds a vertical pair of color 0; everything else isolated.
    const auto s = make_state(4, 4, 4,
                              {0, 1, 2, 3,
                               0, 2, 3, 1,
                               1, 3, 2, 0,
                               2, 0, 1, 3},
                              10, 0);
    const auto out = step(s, Action{Cell{0, 0}}, 12);
    REQUIRE(out.events.tiles_cleared == 2);
    REQUIRE(out.events.goals_cleared == 2);
    REQUIRE_FALSE(out.events.won);
    REQUIRE_FALSE(out.events.lost);
    REQUIRE(out.reward == Catch::Approx(-0.01 + 0.1 * 2).margin(1e-15));
    REQUIRE(out.next_state.moves_used == 1);
    REQUIRE(out.next_state.goals_remaining == 8);
    REQUIRE(out.next_state.status == Status::InProgress);
    REQUIRE(grid_full(out.next_state));
}

TEST_CASE("gravity keeps survivors in column order and refill fills the top", "[env]") {
    // Pop the pair at rows 0-1 of column 0; rows 2-3 of that column survive.
    const auto s = make_state(4, 4, 4,
                              {0, 1, 2, 3,
                               0, 2, 3, 1,
                               1, 3, 2, 0,
                               2, 0, 1, 3},
                              16, 0);
    const auto out = step(s, Action{Cell{0, 0}}, 30);
    const auto& n = out.next_state;
    REQUIRE(n.at(2, 0) == 1);
    REQUIRE(n.at(3, 0) == 2);
    for (int col = 1; col < 4; ++col)
        for (int row = 0; row < 4; ++row) REQUIRE(n.at(row, col) == s.at(row, col));
    REQUIRE(grid_full(n));
}

TEST_CASE("clearing the final goals wins with the win bonus", "[env]") {
    const auto s = make_state(4, 4, 4,
                              {0, 0, 0, 3,
                               1, 2, 3, 1,
                               2, 3, 2, 0,
                               3, 0, 1, 3},
                              2, 0);
    const auto out = step(s, Action{Cell{0, 0}}, 10);
    REQUIRE(out.events.tiles_cleared == 3);
    REQUIRE(out.events.goals_cleared == 2);
    REQUIRE(out.events.won);
    REQUIRE(out.next_state.status == Status::Won);
    REQUIRE(out.next_state.goals_remaining == 0);
    REQUIRE(out.reward == Catch::Approx(-0.01 + 0.1 * 2 + 1.0).margin(1e-15));
}

TEST_CASE("winning on the last budgeted move beats losing", "[env]") {
    auto s = make_state(4, 4, 4,
                        {0, 0, 0, 3,
                         1, 2, 3, 1,
                         2, 3, 2, 0,
                         3, 0, 1, 3},
                        2, 4);
    const auto out = step(s, Action{Cell{0, 0}}, 5);
    REQUIRE(out.events.won);
    REQUIRE_FALSE(out.events.lost);
    REQUIRE(out.next_state.status == Status::Won);
}

TEST_CASE("exhausting the budget without the goal loses", "[env]") {
    auto s = make_state(4, 4, 4,
                        {0, 0, 1, 3,
                         1, 2, 3, 1,
                         2, 3, 2, 0,
                         3, 0, 1, 3},
                        10, 4);
    const auto out = step(s, Action{Cell{0, 0}}, 5);
    REQUIRE(out.events.lost);
    REQUIRE(out.next_state.status == Status::Lost);
    REQUIRE(out.reward == Catch::Approx(-0.01 + 0.1 * 2 - 1.0).margin(1e-15));
    REQUIRE(is_terminal(out.next_state) == Status::Lost);
}

TEST_CASE("step rejects terminal states and illegal actions", "[env]") {
    auto s = make_state(4, 4, 4,
                        {0, 0, 1, 3,
                         1, 2, 3, 1,
                         2, 3, 2, 0,
                         3, 0, 1, 3},
                        10, 0);
    REQUIRE_THROWS_AS(step(s, Action{Cell{-1, 0}}, 10), ContractViolation);
    REQUIRE_THROWS_AS(step(s, Action{Cell{0, 4}}, 10), ContractViolation);
    REQUIRE_THROWS_AS(step(s, Action{Cell{0, 2}}, 10), ContractViolation);  // singleton tile
    REQUIRE_THROWS_AS(step(s, Action{Cell{0, 1}}, 10), ContractViolation);  // not the anchor
    REQUIRE_THROWS_AS(step(s, Action{Cell{0, 0}}, 0), ContractViolation);

    auto done = s;
    done.status = Status::Won;
    REQUIRE_THROWS_AS(step(done, Action{Cell{0, 0}}, 10), ContractViolation);
}

TEST_CASE("step replay is deterministic", "[env]") {
    const LevelConfig level{5, 9, 9, 5, 54, 16, 31};
    const auto s = new_level(level, 9001);
    const auto acts = legal_actions(s);
    REQUIRE_FALSE(acts.empty());
    const auto first = step(s, acts[0], level.move_budget);
    for (int i = 0; i < 10; ++i) {
        const auto again = step(s, acts[0], level.move_budget);
        REQUIRE(again.next_state == first.next_state);
        REQUIRE(again.reward == first.reward);
    }
}

TEST_CASE("random play preserves invariants until the episode ends", "[env]") {
    std::mt19937 gen(5);
    for (int episode = 0; episode < 30; ++episode) {
        const LevelConfig level{2, 7, 7, 4, 26, 12, 55};
        auto s = new_level(level, 1000 + episode);
        int prev_goals = s.goals_remaining;
        int prev_moves = 0;
        while (is_terminal(s) == Status::InProgress) {
            const auto acts = legal_actions(s);
            REQUIRE_FALSE(acts.empty());
            std::uniform_int_distribution<std::size_t> pick(0, acts.size() - 1);
            const auto out = step(s, acts[pick(gen)], level.move_budget);
            s = out.next_state;
            REQUIRE(grid_full(s));
            REQUIRE(s.moves_used == prev_moves + 1);
            REQUIRE(s.goals_remaining <= prev_goals);
            REQUIRE(s.goals_remaining >= 0);
            REQUIRE(s.moves_used <= level.move_budget);
            prev_goals = s.goals_remaining;
            prev_moves = s.moves_used;
        }
        REQUIRE((s.status == Status::Won || s.status == Status::Lost));
        if (s.status == Status::Won) REQUIRE(s.goals_remaining == 0);
    }
}

TEST_CASE("dead boards are reshuffled into playable ones", "[env]") {
    auto s = make_state(4, 4, 2,
                        {0, 1, 0, 1,
                         1, 0, 1, 0,
                         0, 1, 0, 1,
                         1, 0, 1, 0},
                        8);
    REQUIRE(legal_actions(s).empty());
    auto a = s;
    detail::reshuffle_until_playable(a);
    REQUIRE(grid_full(a));
    REQUIRE_FALSE(legal_actions(a).empty());

    auto b = s;
    detail::reshuffle_until_playable(b);
    REQUIRE(a == b);
}

TEST_CASE("environment adapter mirrors the free functions", "[env]") {
    const LevelConfig level{4, 8, 8, 5, 44, 15, 99};
    const ColorPopEnv env{level.move_budget};
    const auto s = new_level(level, 11);
    REQUIRE(env.actions(s) == legal_actions(s));
    REQUIRE(env.terminal(s) == (is_terminal(s) != Status::InProgress));
    const auto acts = env.actions(s);
    const auto [next, reward] = env.transition(s, acts[0]);
    const auto out = step(s, acts[0], level.move_budget);
    REQUIRE(next == out.next_state);
    REQUIRE(reward == out.reward);
}

TEST_CASE("goals_cleared_fraction tracks progress", "[env]") {
    auto s = make_state(4, 4, 3, std::vector<int>(16, 0), 8);
    s.goal_count = 8;
    s.goals_remaining = 8;
    REQUIRE(s.goals_cleared_fraction() == Catch::Approx(0.0));
    s.goals_remaining = 2;
    REQUIRE(s.goals_cleared_fraction() == Catch::Approx(0.75));
    s.goals_remaining = 0;
    REQUIRE(s.goals_cleared_fraction() == Catch::Approx(1.0));
}

TEST_CASE("the reference pack is valid and ordered", "[env]") {
    const auto pack = reference_pack();
    REQUIRE(pack.size() == 10);
    for (std::size_t i = 0; i < pack.size(); ++i) {
        REQUIRE(pack[i].level_id == static_cast<int>(i) + 1);
        REQUIRE_NOTHROW(validate(pack[i]));
        REQUIRE(pack[i].goal_count <= pack[i].width * pack[i].height * 10);
    }
    std::set<std::uint64_t> salts;
    for (const auto& level : pack) salts.insert(level.refill_seed_salt);
    REQUIRE(salts.size() == pack.size());
}
