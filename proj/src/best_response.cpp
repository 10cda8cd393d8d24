#include "rsg/best_response.hpp"

#include <stdexcept>

namespace rsg {

namespace {

BestResponse greedy_impl(const MixedStrategy& p, std::span<const double> means,
                         int players, int picks) {
    const int n = static_cast<int>(means.size());
    if (p.size() != n) throw std::invalid_argument("greedy_min_load: dimension mismatch");
    if (players < 2) throw std::invalid_argument("greedy_min_load: need at least two players");
    const int level = players - 1;

    std::vector<int> x(n, 0);
    for (int step = 0; step < level * picks; ++step) {
        int best = -1;
        double best_gain = -1.0;
        for (int k = 0; k < n; ++k) {
            if (x[k] >= level) continue;
            const double w = p.probs[k] * means[k];
            const double gain = w / (1.0 + x[k]) - w / (2.0 + x[k]);
            if (gain > best_gain) {
                best_gain = gain;
                best = k;
            }
        }
        ++x[best];
    }

    double value = 0.0;
    for (int k = 0; k < n; ++k) value += means[k] * p.probs[k] / (1.0 + x[k]);
    return BestResponse{value, LoadVector(std::move(x), level, picks)};
}

void check_enumeration_guard(int n, int level, int picks) {
    if (n > 8 || level > 4 || picks > 3) {
        throw std::invalid_argument(
            "load enumeration guarded to n <= 8, m <= 5, r <= 3");
    }
}

}  // namespace

BestResponse greedy_min_load(const MixedStrategy& p, const GameSpec& spec) {
    if (p.picks != spec.picks)
        throw std::invalid_argument("greedy_min_load: strategy picks do not match the game");
    return greedy_impl(p, spec.means, spec.players, spec.picks);
}

BestResponse greedy_min_load(const MixedStrategy& p, std::span<const double> means,
                             int players) {
    return greedy_impl(p, means, players, p.picks);
}

BestResponse brute_force_min_load(const MixedStrategy& p, const GameSpec& spec) {
    const int n = spec.resources();
    if (p.size() != n)
        throw std::invalid_argument("brute_force_min_load: dimension mismatch");
    BestResponse best;
    bool first = true;
    for (auto& x : enumerate_loads(n, spec.players - 1, spec.picks)) {
        const double value = utility(p, x, spec);
        if (first || value < best.value) {
            best = BestResponse{value, std::move(x)};
            first = false;
        }
    }
    return best;
}

std::vector<LoadVector> enumerate_loads(int resources, int level, int picks) {
    if (resources < 2 || level < 0 || picks <= 0 || picks >= resources)
        throw std::invalid_argument("enumerate_loads: invalid instance");
    check_enumeration_guard(resources, level, picks);

    std::vector<LoadVector> out;
    std::vector<int> current(resources, 0);
    const int total = level * picks;

    // Depth-first fill in lexicographic order: position i takes the smallest
    // admissible value first.
    auto rec = [&](auto&& self, int i, int remaining) -> void {
        if (i == resources - 1) {
            if (remaining <= level) {
                current[i] = remaining;
                out.emplace_back(current, level, picks);
            }
            return;
        }
        const int slots_after = resources - 1 - i;
        for (int v = 0; v <= level; ++v) {
            if (v > remaining) break;
            if (remaining - v > static_cast<long>(slots_after) * level) continue;
            current[i] = v;
            self(self, i + 1, remaining - v);
        }
        current[i] = 0;
    };
    rec(rec, 0, total);
    return out;
}

}  // namespace rsg
