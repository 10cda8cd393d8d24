#pragma once

#include <random>
#include <vector>

#include "rsg/game.hpp"

namespace rsg {

/// One term of a convex combination of pure actions.
struct DecompositionTerm {
    double weight = 0.0;
    PureAction action;
};

/// Convex combination representing a mixed strategy: weights are
/// non-negative, sum to 1, and sum_t weight_t * action_t reconstructs the
/// strategy. At most n + 1 terms.
struct Decomposition {
    std::vector<DecompositionTerm> terms;
    int picks = 1;
};

/// Sorted-index window [a, b] (1-based) of unclipped coordinates in the
/// Euclidean projection, with its multiplier mu_{a,b}.
struct ProjectionWindow {
    int a = 1;
    int b = 1;
    double mu = 0.0;
};

/// Window and multiplier for a vector already sorted in non-increasing
/// order. Walks b up / a down from a = b = r until the window conditions
/// hold.
ProjectionWindow find_projection_window(const std::vector<double>& sorted_desc, int picks);

/// Euclidean projection onto the (n, r)-hypersimplex: the unique z with
/// z_i = clip(y_i - mu*, [0, 1]) and sum z_i = r. Input order is arbitrary.
MixedStrategy project(const std::vector<double>& y, int picks);

/// Expresses p as a convex combination of pure actions by repeatedly
/// peeling weight off the r largest residual coordinates (lowest index on
/// ties).
Decomposition decompose(const MixedStrategy& p);

/// Draws a pure action with the term probabilities of decompose(p), so the
/// marginals satisfy P(action_k = 1) = p_k.
PureAction sample(const MixedStrategy& p, std::mt19937_64& rng);

/// Same draw from a precomputed decomposition.
PureAction sample(const Decomposition& d, std::mt19937_64& rng);

/// Splits x in J_q into q pure actions summing to x, each obtained by
/// taking the r largest remaining entries (lowest index on ties).
std::vector<PureAction> split_load(const LoadVector& x, int picks);

/// Membership test: all coordinates in [-tol, 1 + tol] and |sum - r| <= tol.
bool contains(const std::vector<double>& y, int picks, double tol);

}  // namespace rsg
