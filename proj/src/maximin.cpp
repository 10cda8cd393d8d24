#include "rsg/maximin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rsg/best_response.hpp"
#include "rsg/hypersimplex.hpp"

namespace rsg {

SolverConfig::SolverConfig(double step_in, int iterations_in)
    : step(step_in), iterations(iterations_in) {
    if (!(step > 0.0) || !std::isfinite(step))
        throw std::invalid_argument("SolverConfig: step must be positive");
    if (iterations < 1)
        throw std::invalid_argument("SolverConfig: need at least one iteration");
}

SolverConfig SolverConfig::epsilon_scheme(double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon_scheme: eps must be positive");
    return SolverConfig(eps, static_cast<int>(std::ceil(1.0 / (eps * eps))));
}

SolverConfig SolverConfig::default_step(const GameSpec& spec, int iterations) {
    double sum_sq = 0.0;
    for (double e : spec.means) sum_sq += e * e;
    if (sum_sq <= 0.0) sum_sq = 1.0;  // all-zero means: any step works
    return SolverConfig(1.0 / std::sqrt(iterations * sum_sq), iterations);
}

MaximinResult solve_maximin(const GameSpec& spec, const SolverConfig& cfg) {
    const int n = spec.resources();
    MixedStrategy p = cfg.start.value_or(MixedStrategy::uniform(n, spec.picks));
    if (p.size() != n)
        throw std::invalid_argument("solve_maximin: start strategy has wrong dimension");

    MaximinResult best;
    bool first = true;
    std::vector<double> shifted(n);
    for (int t = 1; t <= cfg.iterations; ++t) {
        if (cfg.on_iterate) cfg.on_iterate(t, p);
        BestResponse response = greedy_min_load(p, spec);
        if (first || response.value > best.value) {
            best.strategy = p;
            best.loads = response.loads;
            best.value = response.value;
            first = false;
        }
        if (t == cfg.iterations) break;
        for (int k = 0; k < n; ++k) {
            shifted[k] = p.probs[k] +
                         cfg.step * spec.means[k] / (1.0 + response.loads.loads[k]);
        }
        p = project(shifted, spec.picks);
    }
    best.error_bound = error_bound(spec, cfg);
    return best;
}

double error_bound(const GameSpec& spec, const SolverConfig& cfg, double dist_sq) {
    if (!(cfg.step > 0.0) || cfg.iterations < 1)
        throw std::invalid_argument("error_bound: invalid solver configuration");
    if (dist_sq < 0.0) throw std::invalid_argument("error_bound: dist_sq must be >= 0");
    double sum_sq = 0.0;
    for (double e : spec.means) sum_sq += e * e;
    return dist_sq / (2.0 * cfg.step * cfg.iterations) + 0.5 * cfg.step * sum_sq;
}

double error_bound(const GameSpec& spec, const SolverConfig& cfg) {
    return error_bound(spec, cfg, static_cast<double>(spec.resources()));
}

double grid_oracle(const GameSpec& spec, double resolution) {
    const int n = spec.resources();
    if (n > 3) throw std::invalid_argument("grid_oracle: supported for n in {2, 3} only");
    if (!(resolution > 0.0)) throw std::invalid_argument("grid_oracle: resolution must be positive");
    const int r = spec.picks;

    double best = 0.0;
    bool first = true;
    auto consider = [&](std::vector<double> probs) {
        MixedStrategy p(std::move(probs), r);
        const double value = greedy_min_load(p, spec).value;
        if (first || value > best) {
            best = value;
            first = false;
        }
    };

    const int steps = static_cast<int>(std::llround(1.0 / resolution));
    if (n == 2) {
        // r = 1 is the only admissible pick count; sweep p_1.
        for (int i = 0; i <= steps; ++i) {
            const double p1 = static_cast<double>(i) / steps;
            consider({p1, 1.0 - p1});
        }
    } else {
        for (int i = 0; i <= steps; ++i) {
            const double p1 = static_cast<double>(i) / steps;
            for (int j = 0; j <= steps; ++j) {
                const double p2 = static_cast<double>(j) / steps;
                const double p3 = r - p1 - p2;
                if (p3 < -kStrategySumTol || p3 > 1.0 + kStrategySumTol) continue;
                consider({p1, p2, std::clamp(p3, 0.0, 1.0)});
            }
        }
    }
    return best;
}

}  // namespace rsg
