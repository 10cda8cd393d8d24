#pragma once

#include <span>
#include <vector>

#include "rsg/game.hpp"

namespace rsg {

/// Exact minimizer of f(p, .) over J_{m-1} by greedy unit increments:
/// each of the (m-1)*r increments goes to the resource with x_k < m-1
/// whose marginal decrease p_k E_k (1/(1+x_k) - 1/(2+x_k)) is largest,
/// breaking ties toward the lowest index. O(n m r).
BestResponse greedy_min_load(const MixedStrategy& p, const GameSpec& spec);

/// Same oracle against arbitrary per-resource weights (e.g. optimistic mean
/// estimates that may exceed the game's cap).
BestResponse greedy_min_load(const MixedStrategy& p, std::span<const double> means,
                             int players);

/// Exact minimum by full enumeration of J_{m-1}. Guarded to n <= 8, m <= 5,
/// r <= 3; larger instances are an error.
BestResponse brute_force_min_load(const MixedStrategy& p, const GameSpec& spec);

/// All load vectors with entries in [0, level] summing to level * r, in
/// lexicographic order. Same guard as brute_force_min_load.
std::vector<LoadVector> enumerate_loads(int resources, int level, int picks);

}  // namespace rsg
