#include "rsg/hypersimplex.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace rsg {

namespace {

constexpr double kResidualZero = 1e-12;

std::vector<int> indices_sorted_desc(const std::vector<double>& v) {
    std::vector<int> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return v[i] > v[j]; });
    return order;
}

}  // namespace

ProjectionWindow find_projection_window(const std::vector<double>& y, int picks) {
    const int n = static_cast<int>(y.size());
    // 1-based window [a, b]; the window holds the coordinates left unclipped.
    int a = picks;
    int b = picks;
    double window_sum = y[picks - 1];
    auto mu = [&] { return (window_sum - (picks - a + 1)) / (b - a + 1); };
    // B: everything below the window clips to 0; C: everything above clips
    // to 1. Condition A (y_b >= mu >= y_a - 1) is invariant under both moves
    // and is not tested here: checking it with exact comparisons can fail by
    // one ulp and stall the walk.
    auto b_holds = [&] { return b == n || y[b] < mu(); };
    auto c_holds = [&] { return a == 1 || y[a - 2] - 1.0 > mu(); };
    while (!(b_holds() && c_holds())) {
        while (!b_holds()) window_sum += y[b++];
        while (!c_holds()) window_sum += y[--a - 1];
    }
    return ProjectionWindow{a, b, mu()};
}

MixedStrategy project(const std::vector<double>& y, int picks) {
    const int n = static_cast<int>(y.size());
    if (n < 2 || picks <= 0 || picks >= n)
        throw std::invalid_argument("project: need n >= 2 and 0 < r < n");
    for (double v : y) {
        if (!std::isfinite(v)) throw std::invalid_argument("project: non-finite entry");
    }
    std::vector<double> sorted(y);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double mu = find_projection_window(sorted, picks).mu;

    std::vector<double> z(n);
    for (int i = 0; i < n; ++i) z[i] = std::clamp(y[i] - mu, 0.0, 1.0);
    // The multiplier solves sum clip(y - mu) = r up to rounding; fold the
    // leftover into the constructor's renormalization.
    return MixedStrategy(std::move(z), picks);
}

Decomposition decompose(const MixedStrategy& p) {
    const int n = p.size();
    const int r = p.picks;
    if (!contains(p.probs, r, kStrategySumTol))
        throw std::invalid_argument("decompose: strategy is not in the hypersimplex");

    Decomposition out;
    out.picks = r;
    std::vector<double> residual = p.probs;
    double used = 0.0;

    for (int iter = 0; iter < 2 * n; ++iter) {
        const bool spent = used >= 1.0 - kResidualZero;
        const bool empty = std::all_of(residual.begin(), residual.end(),
                                       [](double v) { return v < kResidualZero; });
        if (spent || empty) return out;

        const auto order = indices_sorted_desc(residual);
        const double d = std::min(1.0 - used - residual[order[r]], residual[order[r - 1]]);
        if (d <= 0.0) break;  // no progress: numerical bug

        std::vector<int> mask(n, 0);
        for (int i = 0; i < r; ++i) {
            mask[order[i]] = 1;
            residual[order[i]] -= d;
        }
        out.terms.push_back({d, PureAction(std::move(mask))});
        used += d;
    }
    if (used >= 1.0 - kResidualZero) return out;
    throw std::runtime_error("decompose: failed to terminate within 2n iterations");
}

PureAction sample(const Decomposition& d, std::mt19937_64& rng) {
    if (d.terms.empty()) throw std::invalid_argument("sample: empty decomposition");
    double total = 0.0;
    for (const auto& term : d.terms) total += term.weight;
    const double u = std::uniform_real_distribution<double>(0.0, total)(rng);
    double acc = 0.0;
    for (const auto& term : d.terms) {
        acc += term.weight;
        if (u <= acc) return term.action;
    }
    return d.terms.back().action;
}

PureAction sample(const MixedStrategy& p, std::mt19937_64& rng) {
    return sample(decompose(p), rng);
}

std::vector<PureAction> split_load(const LoadVector& x, int picks) {
    const int n = x.size();
    const int q = x.level;
    std::vector<int> remaining = x.loads;
    std::vector<PureAction> actions;
    actions.reserve(q);
    for (int step = 0; step < q; ++step) {
        const auto order = indices_sorted_desc(
            std::vector<double>(remaining.begin(), remaining.end()));
        std::vector<int> mask(n, 0);
        for (int i = 0; i < picks; ++i) {
            const int k = order[i];
            if (remaining[k] <= 0)
                throw std::invalid_argument("split_load: load vector is not in J_q");
            mask[k] = 1;
            --remaining[k];
        }
        actions.emplace_back(std::move(mask));
    }
    if (std::any_of(remaining.begin(), remaining.end(), [](int v) { return v != 0; }))
        throw std::invalid_argument("split_load: load vector is not in J_q");
    return actions;
}

bool contains(const std::vector<double>& y, int picks, double tol) {
    double sum = 0.0;
    for (double v : y) {
        if (!std::isfinite(v) || v < -tol || v > 1.0 + tol) return false;
        sum += v;
    }
    return std::abs(sum - picks) <= tol;
}

}  // namespace rsg
