#include "rsg/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rsg/best_response.hpp"

namespace rsg {

namespace {

void require(bool cond, const std::string& what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

GameSpec::GameSpec(std::vector<double> means_in, int players_in, int picks_in,
                   std::optional<double> cap_in)
    : means(std::move(means_in)), players(players_in), picks(picks_in) {
    const int n = resources();
    require(n >= 2, "GameSpec: need at least two resources");
    require(players >= 2, "GameSpec: need at least two players");
    require(picks > 0 && picks < n, "GameSpec: picks must satisfy 0 < r < n");
    for (double e : means) {
        require(std::isfinite(e) && e >= 0.0, "GameSpec: means must be finite and non-negative");
    }
    cap = cap_in.value_or(*std::max_element(means.begin(), means.end()));
    require(std::isfinite(cap), "GameSpec: cap must be finite");
    for (double e : means) {
        require(e <= cap, "GameSpec: every mean must be at most cap");
    }
}

MixedStrategy::MixedStrategy(std::vector<double> probs_in, int picks_in)
    : probs(std::move(probs_in)), picks(picks_in) {
    const int n = size();
    require(n >= 2, "MixedStrategy: need at least two resources");
    require(picks > 0 && picks < n, "MixedStrategy: picks must satisfy 0 < r < n");
    double sum = 0.0;
    for (double p : probs) {
        require(std::isfinite(p), "MixedStrategy: entries must be finite");
        require(p >= -kStrategySumTol && p <= 1.0 + kStrategySumTol,
                "MixedStrategy: entries must lie in [0,1]");
        sum += p;
    }
    require(std::abs(sum - picks) <= kStrategySumTol,
            "MixedStrategy: entries must sum to r within 1e-9");
    if (sum != static_cast<double>(picks) && sum > 0.0) {
        const double scale = static_cast<double>(picks) / sum;
        for (double& p : probs) p *= scale;
    }
    for (double& p : probs) p = std::clamp(p, 0.0, 1.0);
}

MixedStrategy MixedStrategy::uniform(int resources, int picks) {
    return MixedStrategy(
        std::vector<double>(resources, static_cast<double>(picks) / resources), picks);
}

LoadVector::LoadVector(std::vector<int> loads_in, int level_in, int picks)
    : loads(std::move(loads_in)), level(level_in) {
    require(level >= 0, "LoadVector: level must be non-negative");
    long sum = 0;
    for (int x : loads) {
        require(x >= 0 && x <= level, "LoadVector: entries must lie in [0, level]");
        sum += x;
    }
    require(sum == static_cast<long>(level) * picks,
            "LoadVector: entries must sum to level * r");
}

PureAction::PureAction(std::vector<int> mask_in) : mask(std::move(mask_in)) {
    for (int b : mask) {
        require(b == 0 || b == 1, "PureAction: mask entries must be 0 or 1");
    }
}

double utility(const MixedStrategy& p, const LoadVector& x, const GameSpec& spec) {
    const int n = spec.resources();
    require(p.size() == n && x.size() == n, "utility: dimension mismatch");
    require(p.picks == spec.picks, "utility: strategy picks do not match the game");
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        total += spec.means[k] * p.probs[k] / (1.0 + x.loads[k]);
    }
    return total;
}

BestResponse worst_case_utility(const MixedStrategy& p, const GameSpec& spec) {
    return greedy_min_load(p, spec);
}

}  // namespace rsg
