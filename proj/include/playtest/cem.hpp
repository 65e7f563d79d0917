#pragma once
// Cross-entropy-method search over real vectors, shared by policy training
// and population-parameter fitting. Candidates are drawn from a diagonal
// Gaussian; each iteration refits the Gaussian to the elite fraction.
// Candidate draws and objective calls are seeded up front, so results do not
// depend on the worker count.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "playtest/errors.hpp"
#include "playtest/parallel.hpp"
#include "playtest/rng.hpp"

namespace playtest {

struct CemOptions {
    int iterations = 30;
    int population = 32;
    double elite_fraction = 0.25;
    std::vector<double> init_mean;  // defines the dimension
    double init_std = 1.0;
    double std_floor = 0.02;
    int workers = 1;
};

struct CemResult {
    std::vector<double> best;
    double best_score = 0.0;  // higher is better
};

// objective(theta, iteration, candidate_index) -> score to maximize.
template <typename Objective>
CemResult cem_maximize(const CemOptions& opt, Objective&& objective, std::uint64_t seed) {
    if (opt.iterations < 1 || opt.population < 1)
        throw ContractViolation("cem_maximize: iterations and population must be >= 1");
    if (opt.elite_fraction <= 0.0 || opt.elite_fraction > 1.0)
        throw ContractViolation("cem_maximize: elite_fraction must be in (0, 1]");
    if (opt.init_mean.empty()) throw ContractViolation("cem_maximize: init_mean is empty");

    const std::size_t dim = opt.init_mean.size();
    std::vector<double> mean = opt.init_mean;
    std::vector<double> stddev(dim, opt.init_std);

    CemResult result;
    bool have_best = false;

    const int elite_count = std::max(1, static_cast<int>(std::ceil(opt.elite_fraction * opt.population)));
    std::vector<std::vector<double>> thetas(static_cast<std::size_t>(opt.population));
    std::vector<double> scores(static_cast<std::size_t>(opt.population));

    for (int iter = 0; iter < opt.iterations; ++iter) {
        for (int c = 0; c < opt.population; ++c) {
            Rng draw(derive_seed(seed, 0xCE11, static_cast<std::uint64_t>(iter), static_cast<std::uint64_t>(c)));
            auto& theta = thetas[static_cast<std::size_t>(c)];
            theta.resize(dim);
            for (std::size_t d = 0; d < dim; ++d) theta[d] = mean[d] + stddev[d] * draw.normal();
        }
        parallel_for(static_cast<std::size_t>(opt.population), opt.workers, [&](std::size_t c) {
            scores[c] = objective(thetas[c], iter, static_cast<int>(c));
        });

        std::vector<int> order(static_cast<std::size_t>(opt.population));
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return scores[static_cast<std::size_t>(a)] > scores[static_cast<std::size_t>(b)];
        });

        const int top = order[0];
        if (!have_best || scores[static_cast<std::size_t>(top)] > result.best_score) {
            result.best = thetas[static_cast<std::size_t>(top)];
            result.best_score = scores[static_cast<std::size_t>(top)];
            have_best = true;
        }

        for (std::size_t d = 0; d < dim; ++d) {
            double m = 0.0;
            for (int e = 0; e < elite_count; ++e) m += thetas[static_cast<std::size_t>(order[e])][d];
            m /= elite_count;
            double v = 0.0;
            for (int e = 0; e < elite_count; ++e) {
                const double diff = thetas[static_cast<std::size_t>(order[e])][d] - m;
                v += diff * diff;
            }
            v /= elite_count;
            mean[d] = m;
            stddev[d] = std::max(opt.std_floor, std::sqrt(v));
        }
    }
    return result;
}

}  // namespace playtest
