#pragma once

#include <functional>
#include <optional>

#include "rsg/game.hpp"

namespace rsg {

/// Projected-subgradient solver parameters. The default start is the
/// uniform strategy r/n.
struct SolverConfig {
    double step = 0.0;
    int iterations = 1;
    std::optional<MixedStrategy> start;
    /// Called with (t, p^t) before each oracle step; used by tests to audit
    /// iterate feasibility.
    std::function<void(int, const MixedStrategy&)> on_iterate;

    SolverConfig(double step, int iterations);

    /// beta = eps, T = ceil(1/eps^2); the error bound is then O(eps).
    static SolverConfig epsilon_scheme(double eps);

    /// beta = 1/sqrt(T * sum E_k^2), the bound-minimizing step for a fixed
    /// iteration budget.
    static SolverConfig default_step(const GameSpec& spec, int iterations);
};

struct MaximinResult {
    MixedStrategy strategy;   // p~, the best iterate
    LoadVector loads;         // x~ = argmin_x f(p~, x)
    double value = 0.0;       // f(p~, x~)
    double error_bound = 0.0; // a-priori gap certificate
};

/// Maximizes f_worst over the hypersimplex with the min-oracle subgradient
/// iteration: x^t = greedy_min_load(p^t), p^{t+1} = project(p^t + beta *
/// grad_p f(p^t, x^t)). Returns the iterate with the largest f(p^t, x^t).
MaximinResult solve_maximin(const GameSpec& spec, const SolverConfig& cfg);

/// dist_sq / (2 beta T) + (beta / 2) sum E_k^2, valid whenever dist_sq
/// bounds ||p^1 - p*||^2.
double error_bound(const GameSpec& spec, const SolverConfig& cfg, double dist_sq);

/// Certificate with the conservative default dist_sq = n (both points lie
/// in [0,1]^n).
double error_bound(const GameSpec& spec, const SolverConfig& cfg);

/// Exhaustive sweep of f_worst over a grid of the hypersimplex, n in {2,3}
/// only. Exact within max_k E_k * resolution * n.
double grid_oracle(const GameSpec& spec, double resolution);

}  // namespace rsg
