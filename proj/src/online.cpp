#include "rsg/online.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "rsg/best_response.hpp"
#include "rsg/closed_form.hpp"
#include "rsg/csv.hpp"
#include "rsg/hypersimplex.hpp"

namespace rsg {

namespace {

constexpr double kMaxUniformHalfWidth = 1.7320508075688772;  // sqrt(3)

std::vector<double> draw_noise(const NoiseModel& noise, int n, std::mt19937_64& rng) {
    if (noise.custom_draw) return noise.custom_draw(rng);
    std::vector<double> eta(n, 0.0);
    switch (noise.kind) {
        case NoiseModel::Kind::none:
            break;
        case NoiseModel::Kind::gaussian: {
            std::normal_distribution<double> dist(0.0, noise.param);
            for (double& v : eta) v = dist(rng);
            break;
        }
        case NoiseModel::Kind::uniform_bounded: {
            std::uniform_real_distribution<double> dist(-noise.param, noise.param);
            for (double& v : eta) v = dist(rng);
            break;
        }
    }
    return eta;
}

LoadVector random_opponent_loads(const GameSpec& spec, std::mt19937_64& rng) {
    const int n = spec.resources();
    std::vector<int> loads(n, 0);
    std::vector<int> pool(n);
    for (int opponent = 0; opponent < spec.players - 1; ++opponent) {
        std::iota(pool.begin(), pool.end(), 0);
        for (int i = 0; i < spec.picks; ++i) {
            const int j = i + static_cast<int>(std::uniform_int_distribution<size_t>(
                                  0, n - 1 - i)(rng));
            std::swap(pool[i], pool[j]);
            ++loads[pool[i]];
        }
    }
    return LoadVector(std::move(loads), spec.players - 1, spec.picks);
}

}  // namespace

NoiseModel NoiseModel::none(std::uint64_t seed) {
    NoiseModel model;
    model.kind = Kind::none;
    model.param = 0.0;
    model.seed = seed;
    return model;
}

NoiseModel NoiseModel::gaussian(double sigma, std::uint64_t seed) {
    if (!(sigma > 0.0) || sigma > 1.0)
        throw std::invalid_argument("NoiseModel: gaussian sigma must lie in (0, 1]");
    NoiseModel model;
    model.kind = Kind::gaussian;
    model.param = sigma;
    model.seed = seed;
    return model;
}

NoiseModel NoiseModel::uniform_bounded(double half_width, std::uint64_t seed) {
    if (!(half_width > 0.0) || half_width > kMaxUniformHalfWidth)
        throw std::invalid_argument("NoiseModel: uniform half-width must lie in (0, sqrt(3)]");
    NoiseModel model;
    model.kind = Kind::uniform_bounded;
    model.param = half_width;
    model.seed = seed;
    return model;
}

UcbParams::UcbParams(int horizon_in, double confidence_in, double step_in, double cap_in)
    : horizon(horizon_in), confidence(confidence_in), step(step_in), cap(cap_in) {
    if (horizon < 1) throw std::invalid_argument("UcbParams: horizon must be >= 1");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("UcbParams: confidence must lie in (0, 1)");
    if (!(step > 0.0)) throw std::invalid_argument("UcbParams: step must be positive");
    if (!(cap > 0.0)) throw std::invalid_argument("UcbParams: cap must be positive");
}

UcbParams UcbParams::theorem_defaults(const GameSpec& spec, int horizon) {
    const double c = spec.cap;
    if (!(c > 0.0))
        throw std::invalid_argument("UcbParams: theorem defaults need a positive cap");
    const double t = horizon;
    const double delta = 1.0 / (2.0 * spec.resources() * spec.picks * c * t * t);
    if (!(delta < 1.0))
        throw std::invalid_argument("UcbParams: horizon too small for delta < 1");
    const double scale = std::sqrt(2.0 * std::log(t * (t + 1.0) / delta));
    const double d = c + 2.0 * scale;
    return UcbParams(horizon, delta, 1.0 / (std::sqrt(t) * d), c);
}

double UcbParams::bonus_scale() const {
    const double t = horizon;
    return std::sqrt(2.0 * std::log(t * (t + 1.0) / confidence));
}

bool UcbParams::horizon_condition_ok() const { return bonus_scale() >= cap; }

double ucb_index(const UcbState& state, const UcbParams& params, int resource) {
    if (resource < 0 || resource >= static_cast<int>(state.counts.size()))
        throw std::invalid_argument("ucb_index: resource out of range");
    const double visits = std::max<long>(state.counts[resource], 1);
    return state.means[resource] + params.bonus_scale() / std::sqrt(visits);
}

RegretTrace run_ucb(const GameSpec& spec, const UcbParams& params, const NoiseModel& noise,
                    OpponentSim opponent) {
    const int n = spec.resources();
    const int r = spec.picks;

    RegretTrace trace;
    trace.horizon = params.horizon;
    trace.confidence = params.confidence;
    trace.step = params.step;
    trace.cap = params.cap;
    trace.seed = noise.seed;
    trace.opponent = opponent;
    if (!params.horizon_condition_ok()) {
        trace.warnings.push_back(
            "horizon condition sqrt(2 log(T(T+1)/delta)) >= C violated; the regret "
            "bound of the UCB analysis does not apply");
    }

    const ValueEstimate game_value = best_value_estimate(spec, 1e-3);
    trace.f_maximin = game_value.value;
    trace.f_maximin_certificate = game_value.certificate;

    std::mt19937_64 rng(noise.seed);
    UcbState state;
    state.counts.assign(n, 0);
    state.means.assign(n, 0.0);
    state.strategy = MixedStrategy::uniform(n, r);

    std::vector<double> optimistic(n);
    std::vector<double> shifted(n);
    double cum_regret = 0.0;
    trace.records.reserve(params.horizon);

    for (int t = 1; t <= params.horizon; ++t) {
        state.step_index = t;
        for (int k = 0; k < n; ++k) optimistic[k] = ucb_index(state, params, k);

        const BestResponse optimistic_response =
            greedy_min_load(state.strategy, optimistic, spec.players);
        const BestResponse true_response = greedy_min_load(state.strategy, spec);

        TraceRecord record;
        record.t = t;
        record.probs = state.strategy.probs;
        record.f_worst = true_response.value;
        record.inst_regret = trace.f_maximin - true_response.value;
        cum_regret += record.inst_regret;
        record.cum_regret = cum_regret;

        const PureAction action = sample(state.strategy, rng);
        record.action = action.mask;

        const std::vector<double> eta = draw_noise(noise, n, rng);
        if (opponent != OpponentSim::none) {
            const LoadVector& loads = opponent == OpponentSim::worst_case
                                          ? true_response.loads
                                          : random_opponent_loads(spec, rng);
            double payoff = 0.0;
            for (int k = 0; k < n; ++k) {
                if (action.mask[k])
                    payoff += (spec.means[k] + eta[k]) / (1.0 + loads.loads[k]);
            }
            record.observed_payoff = payoff;
        }

        for (int k = 0; k < n; ++k) {
            if (!action.mask[k]) continue;
            const double observed = spec.means[k] + eta[k];
            ++state.counts[k];
            state.means[k] += (observed - state.means[k]) / state.counts[k];
        }

        trace.records.push_back(std::move(record));

        for (int k = 0; k < n; ++k) {
            shifted[k] = state.strategy.probs[k] +
                         params.step * optimistic[k] /
                             (1.0 + optimistic_response.loads.loads[k]);
        }
        state.strategy = project(shifted, r);
    }
    state.step_index = params.horizon + 1;
    trace.final_state = std::move(state);
    return trace;
}

double regret_of(const RegretTrace& trace, const GameSpec& spec) {
    const double f_maximin = best_value_estimate(spec, 1e-3).value;
    double total = 0.0;
    for (const auto& record : trace.records) total += f_maximin - record.f_worst;
    return total;
}

double theoretical_regret_bound(const GameSpec& spec, int horizon) {
    const double n = spec.resources();
    const double r = spec.picks;
    const double c = spec.cap;
    const double t = horizon;
    if (!(c > 0.0) || !(2.0 * n * r * c * t * t > 1.0))
        throw std::invalid_argument(
            "theoretical_regret_bound: requires 1/(2 n r C T^2) < 1");
    const double log_term =
        std::log(2.0 * n * r * c) + 3.0 * std::log(t) + std::log(t + 1.0);
    const double d = c + 2.0 * std::sqrt(2.0 * log_term);
    return n * d * std::sqrt(t) + 4.0 * n * std::sqrt(2.0 * r * t * log_term) + 1.0;
}

void write_trace_csv(const RegretTrace& trace, std::ostream& out) {
    const bool with_payoff = trace.opponent != OpponentSim::none;
    out << "t";
    if (!trace.records.empty()) {
        for (size_t k = 1; k <= trace.records.front().probs.size(); ++k)
            out << ",p_" << k;
    }
    out << ",action,f_worst,inst_regret,cum_regret";
    if (with_payoff) out << ",observed_payoff";
    out << "\n";
    for (const auto& record : trace.records) {
        out << record.t;
        for (double p : record.probs) out << ',' << format_double(p);
        out << ',';
        for (int bit : record.action) out << (bit ? '1' : '0');
        out << ',' << format_double(record.f_worst) << ','
            << format_double(record.inst_regret) << ','
            << format_double(record.cum_regret);
        if (with_payoff) out << ',' << format_double(record.observed_payoff);
        out << "\n";
    }
}

void write_trace_metadata(const RegretTrace& trace, std::ostream& out) {
    nlohmann::json meta{
        {"horizon", trace.horizon},
        {"confidence", trace.confidence},
        {"step", trace.step},
        {"cap", trace.cap},
        {"seed", trace.seed},
        {"f_maximin", trace.f_maximin},
        {"f_maximin_certificate", trace.f_maximin_certificate},
        {"opponent", trace.opponent == OpponentSim::none
                         ? "none"
                         : (trace.opponent == OpponentSim::worst_case ? "worst_case"
                                                                      : "uniform_random")},
        {"warnings", trace.warnings},
    };
    out << meta.dump(2) << "\n";
}

}  // namespace rsg
