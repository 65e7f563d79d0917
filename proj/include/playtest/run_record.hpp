#pragma once

#include <cstdint>
#include <string>

#include "playtest/errors.hpp"

namespace playtest {

// One completed episode. moves_left counts unused moves of the agent's own
// budget when the run passed and is 0 otherwise, so the agent budget is
// recoverable as moves_used + moves_left for passed runs and moves_used for
// failed ones (a failed run always exhausts the budget).
struct RunRecord {
    int level_id = 0;
    std::string agent;
    std::uint64_t seed = 0;
    bool passed = false;
    int moves_used = 0;
    int moves_left = 0;
    double goals_cleared_fraction = 0.0;
};

inline int agent_budget(const RunRecord& r) { return r.moves_used + r.moves_left; }

inline double moves_left_ratio(const RunRecord& r) {
    const int budget = agent_budget(r);
    if (budget <= 0) throw ContractViolation("moves_left_ratio: record has no moves");
    return static_cast<double>(r.moves_left) / budget;
}

}  // namespace playtest
