#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "rsg/game.hpp"

namespace rsg {

/// Zero-mean, 1-sub-Gaussian per-slot reward noise. `custom_draw`, when
/// set, replaces the built-in kinds and may correlate the resources within
/// a slot; it must still produce zero-mean 1-sub-Gaussian entries.
struct NoiseModel {
    enum class Kind { none, gaussian, uniform_bounded };

    Kind kind = Kind::gaussian;
    double param = 1.0;  // sigma for gaussian, half-width for uniform
    std::uint64_t seed = 1;
    std::function<std::vector<double>(std::mt19937_64&)> custom_draw;

    static NoiseModel none(std::uint64_t seed);
    static NoiseModel gaussian(double sigma, std::uint64_t seed);          // sigma <= 1
    static NoiseModel uniform_bounded(double half_width, std::uint64_t seed);  // w <= sqrt(3)
};

/// UCB(beta, delta) parameters for a fixed horizon.
struct UcbParams {
    int horizon = 1;        // T
    double confidence = 0.5;  // delta in (0,1)
    double step = 1.0;      // beta > 0
    double cap = 1.0;       // C

    UcbParams(int horizon, double confidence, double step, double cap);

    /// delta = 1/(2 n r C T^2), beta = 1/(sqrt(T) D) with
    /// D = C + 2 sqrt(2 log(T(T+1)/delta)).
    static UcbParams theorem_defaults(const GameSpec& spec, int horizon);

    /// sqrt(2 log(T(T+1)/delta)), the confidence-bonus scale.
    double bonus_scale() const;

    /// Horizon-size condition bonus_scale() >= C; violations are recorded
    /// as trace warnings, not errors.
    bool horizon_condition_ok() const;
};

/// Learner bookkeeping after t - 1 completed slots. Empirical means are
/// kept by incremental update, so constant observations stay bit-exact.
struct UcbState {
    std::vector<long> counts;   // n_k
    std::vector<double> means;  // empirical means (0 when unseen)
    MixedStrategy strategy;     // p[t]
    int step_index = 1;         // t
};

/// Optimistic index: empirical mean plus sqrt(2 log(T(T+1)/delta) / max(n_k, 1)).
double ucb_index(const UcbState& state, const UcbParams& params, int resource);

/// Optional concrete opponent policy used only for the illustrative
/// observed-payoff column; the regret accounting never depends on it.
enum class OpponentSim { none, worst_case, uniform_random };

struct TraceRecord {
    int t = 0;
    std::vector<double> probs;   // exact p[t]
    std::vector<int> action;     // sampled pure action
    double f_worst = 0.0;        // f_worst(p[t]) under the true means
    double inst_regret = 0.0;
    double cum_regret = 0.0;
    double observed_payoff = 0.0;  // only populated when an opponent is simulated
};

struct RegretTrace {
    std::vector<TraceRecord> records;
    UcbState final_state;  // learner bookkeeping after the last slot
    double f_maximin = 0.0;
    double f_maximin_certificate = 0.0;  // widens the regret error bar, never the values
    int horizon = 0;
    double confidence = 0.0;
    double step = 0.0;
    double cap = 0.0;
    std::uint64_t seed = 0;
    OpponentSim opponent = OpponentSim::none;
    std::vector<std::string> warnings;
};

/// Runs UCB(beta, delta) for the full horizon: per slot, optimistic means
/// via ucb_index, opponent loads via the greedy oracle on those means, an
/// action sampled from p[t], then a projected subgradient step.
RegretTrace run_ucb(const GameSpec& spec, const UcbParams& params, const NoiseModel& noise,
                    OpponentSim opponent = OpponentSim::none);

/// Cumulative worst-case regret of a trace: sum_t (f_maximin - f_worst(p[t])),
/// with f_maximin recomputed from the game description (closed form when
/// available).
double regret_of(const RegretTrace& trace, const GameSpec& spec);

/// Worst-case regret bound n D sqrt(T) + 4 n sqrt(2 r T log(2 n r C T^3 (T+1))) + 1
/// with D = C + 2 sqrt(2 log(2 n r C T^3 (T+1))).
double theoretical_regret_bound(const GameSpec& spec, int horizon);

/// CSV with header t,p_1..p_n,action,f_worst,inst_regret,cum_regret
/// (plus observed_payoff when an opponent was simulated); LF endings,
/// shortest round-trip doubles.
void write_trace_csv(const RegretTrace& trace, std::ostream& out);

/// JSON sidecar: parameters, seed, game value, warnings.
void write_trace_metadata(const RegretTrace& trace, std::ostream& out);

}  // namespace rsg
