#pragma once
// Umbrella header pulling in the whole toolkit.

#include "playtest/cem.hpp"
#include "playtest/env.hpp"
#include "playtest/errors.hpp"
#include "playtest/eval.hpp"
#include "playtest/io.hpp"
#include "playtest/mcts.hpp"
#include "playtest/parallel.hpp"
#include "playtest/policy.hpp"
#include "playtest/predict.hpp"
#include "playtest/rng.hpp"
#include "playtest/run_record.hpp"
#include "playtest/stats.hpp"
#include "playtest/svg.hpp"
