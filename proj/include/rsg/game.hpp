#pragma once

#include <optional>
#include <vector>

namespace rsg {

/// Parameters of one fair-reward resource-sharing game: n resources with
/// mean rewards E_k in [0, cap], m players, each selecting r distinct
/// resources per slot.
struct GameSpec {
    std::vector<double> means;
    int players = 2;
    int picks = 1;
    double cap = 0.0;

    /// Validates n >= 2, m >= 2, 0 < r < n and 0 <= E_k <= cap.
    /// When cap is not supplied it defaults to max_k E_k.
    GameSpec(std::vector<double> means, int players, int picks,
             std::optional<double> cap = std::nullopt);

    int resources() const { return static_cast<int>(means.size()); }
};

/// Point of the (n,r)-hypersimplex: per-resource marginal selection
/// probabilities p_k in [0,1] with sum p_k = r.
struct MixedStrategy {
    std::vector<double> probs;
    int picks = 1;

    MixedStrategy() = default;

    /// Accepts vectors whose sum is within 1e-9 of r and renormalizes the
    /// residual proportionally; anything further off is an error.
    MixedStrategy(std::vector<double> probs, int picks);

    static MixedStrategy uniform(int resources, int picks);

    int size() const { return static_cast<int>(probs.size()); }
};

/// Aggregate selections of `level` opponents: integer loads with
/// 0 <= x_k <= level and sum x_k = level * r.
struct LoadVector {
    std::vector<int> loads;
    int level = 0;

    LoadVector() = default;
    LoadVector(std::vector<int> loads, int level, int picks);

    int size() const { return static_cast<int>(loads.size()); }
};

/// One deterministic action: a 0/1 mask with exactly r ones.
struct PureAction {
    std::vector<int> mask;

    PureAction() = default;
    explicit PureAction(std::vector<int> mask);

    int size() const { return static_cast<int>(mask.size()); }
};

/// Expected utility of player 1 with marginals p against opponent loads x:
/// sum_k E_k p_k / (1 + x_k).
double utility(const MixedStrategy& p, const LoadVector& x, const GameSpec& spec);

/// Opponent loads minimizing player 1's expected utility, with the value
/// they induce.
struct BestResponse {
    double value = 0.0;
    LoadVector loads;
};

/// Worst-case expected utility min_{x in J_{m-1}} f(p, x) and a minimizer.
BestResponse worst_case_utility(const MixedStrategy& p, const GameSpec& spec);

inline constexpr double kStrategySumTol = 1e-9;

}  // namespace rsg
