#include "rsg/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "rsg/best_response.hpp"
#include "rsg/maximin.hpp"

namespace rsg {

namespace {

constexpr double kIntegralityTol = 1e-12;

// Caller-order instance split into positive means (sorted non-increasing)
// and zero-mean slots.
struct SortedReduction {
    std::vector<double> means;      // positive, non-increasing
    std::vector<int> to_original;   // caller index of each sorted slot
    std::vector<int> zero_slots;    // caller indices with zero mean
    int original_n = 0;
};

SortedReduction reduce_and_sort(const GameSpec& spec) {
    SortedReduction red;
    red.original_n = spec.resources();
    std::vector<int> order(red.original_n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return spec.means[i] > spec.means[j];
    });
    for (int idx : order) {
        if (spec.means[idx] > 0.0) {
            red.means.push_back(spec.means[idx]);
            red.to_original.push_back(idx);
        } else {
            red.zero_slots.push_back(idx);
        }
    }
    return red;
}

// Rebuilds a caller-order strategy from sorted-slot probabilities; zero-mean
// slots absorb `leftover` units of mass (used when the positive slots are
// saturated).
MixedStrategy expand(const SortedReduction& red, const std::vector<double>& sorted_probs,
                     int picks, double leftover = 0.0) {
    std::vector<double> full(red.original_n, 0.0);
    for (size_t i = 0; i < sorted_probs.size(); ++i)
        full[red.to_original[i]] = sorted_probs[i];
    for (int idx : red.zero_slots) {
        const double take = std::min(1.0, leftover);
        full[idx] = take;
        leftover -= take;
        if (leftover <= 0.0) break;
    }
    return MixedStrategy(std::move(full), picks);
}

ClosedFormResult make_result(const SortedReduction& red, MixedStrategy strategy,
                             double value, std::string tag) {
    ClosedFormResult out;
    out.strategy = std::move(strategy);
    out.value = value;
    out.case_tag = std::move(tag);
    out.permutation = red.to_original;
    out.permutation.insert(out.permutation.end(), red.zero_slots.begin(),
                           red.zero_slots.end());
    return out;
}

// All positive means saturated (n' <= r) or gone: the only freedom is where
// the excess mass sits, and zero-mean slots make it irrelevant.
ClosedFormResult solve_degenerate(const GameSpec& spec, const SortedReduction& red) {
    const int n_pos = static_cast<int>(red.means.size());
    std::vector<double> sorted_probs(n_pos, 1.0);
    MixedStrategy p = expand(red, sorted_probs, spec.picks, spec.picks - n_pos);
    const double value = greedy_min_load(p, spec).value;
    return make_result(red, std::move(p), value, "degenerate");
}

double inverse_sum(const std::vector<double>& means, int first, int last) {
    double s = 0.0;
    for (int i = first; i <= last; ++i) s += 1.0 / means[i - 1];
    return s;
}

bool a1_holds(const std::vector<double>& sorted_means) {
    return std::adjacent_find(sorted_means.begin(), sorted_means.end()) ==
           sorted_means.end();
}

bool a2_holds(const std::vector<double>& sorted_means, int picks) {
    const int n = static_cast<int>(sorted_means.size());
    for (int a = 1; a <= picks; ++a) {
        for (int b = picks + 1; b <= n; ++b) {
            const double v = sorted_means[b - 1] * inverse_sum(sorted_means, a, b);
            if (std::abs(v - std::round(v)) <= kIntegralityTol) return false;
        }
    }
    return true;
}

bool triplet_good(const std::vector<double>& means, int picks, int a, int b, int c) {
    return (picks - a + b - c) < means[b - 1] * inverse_sum(means, a + 1, b);
}

double top_sum(std::vector<double> values, int count) {
    std::partial_sort(values.begin(), values.begin() + count, values.end(),
                      std::greater<>());
    return std::accumulate(values.begin(), values.begin() + count, 0.0);
}

}  // namespace

SequencesUV sequences_uv(const std::vector<double>& sorted_means) {
    const int n = static_cast<int>(sorted_means.size());
    if (n < 2) throw std::invalid_argument("sequences_uv: need at least two means");
    for (int i = 0; i < n; ++i) {
        if (!(sorted_means[i] > 0.0))
            throw std::invalid_argument("sequences_uv: means must be positive");
        if (i > 0 && sorted_means[i] > sorted_means[i - 1])
            throw std::invalid_argument("sequences_uv: means must be non-increasing");
    }
    SequencesUV seq;
    double denom_u = 3.0 / sorted_means[0];
    double denom_v = 1.0 / sorted_means[0];
    for (int i = 1; i <= n; ++i) {
        if (i >= 2) {
            denom_u += 1.0 / sorted_means[i - 1];
            denom_v += 1.0 / sorted_means[i - 1];
            seq.V.push_back((i - 1) / denom_v);
        }
        seq.U.push_back(i / denom_u);
    }
    seq.u = 1;
    for (int i = 2; i <= n; ++i) {
        if (seq.U[i - 1] > seq.U[seq.u - 1]) seq.u = i;
    }
    seq.v = 2;
    for (int i = 3; i <= n; ++i) {
        if (seq.V[i - 2] > seq.V[seq.v - 2]) seq.v = i;
    }
    return seq;
}

Triplet classify_triplet(int a, int b, int c, const GameSpec& spec) {
    const int n = spec.resources();
    const int r = spec.picks;
    if (a < 0 || a > r - 1 || b < r + 1 || b > n || c < r + 1 || c > n)
        throw std::invalid_argument("classify_triplet: indices out of range");
    for (int i = 0; i < n; ++i) {
        if (!(spec.means[i] > 0.0))
            throw std::invalid_argument("classify_triplet: means must be positive");
        if (i > 0 && spec.means[i] > spec.means[i - 1])
            throw std::invalid_argument("classify_triplet: means must be non-increasing");
    }
    return Triplet{a, b, c, triplet_good(spec.means, r, a, b, c)};
}

BoundaryTables boundary_functions(const GameSpec& spec) {
    if (spec.players != 2)
        throw std::invalid_argument("boundary_functions: defined for two players");
    const int n = spec.resources();
    const int r = spec.picks;
    if (!a1_holds(spec.means) || !a2_holds(spec.means, r))
        throw std::invalid_argument("boundary_functions: assumptions A1/A2 violated");
    const int span = n - r;  // size of [r+1 : n]

    BoundaryTables tables;
    tables.picks = r;
    tables.resources = n;
    tables.h.assign(r, std::vector<int>(span, r));
    tables.e.assign(r, std::vector<int>(span, n + 1));
    tables.g.assign(span, std::vector<int>(span, r));

    for (int a = 0; a <= r - 1; ++a) {
        for (int c = r + 1; c <= n; ++c) {
            for (int b = r + 1; b <= n; ++b) {
                if (triplet_good(spec.means, r, a, b, c)) tables.h[a][c - r - 1] = b;
            }
        }
        for (int b = r + 1; b <= n; ++b) {
            for (int c = n; c >= r + 1; --c) {
                if (triplet_good(spec.means, r, a, b, c)) tables.e[a][b - r - 1] = c;
            }
        }
    }
    for (int b = r + 1; b <= n; ++b) {
        for (int c = r + 1; c <= n; ++c) {
            for (int a = r - 1; a >= 0; --a) {
                if (triplet_good(spec.means, r, a, b, c)) tables.g[b - r - 1][c - r - 1] = a;
            }
        }
    }
    return tables;
}

std::string CandidateStrategy::label() const {
    switch (kind) {
        case CandidateKind::P0:
            return "P0";
        case CandidateKind::X1:
            return "X1(" + std::to_string(first) + "," + std::to_string(second) + ")";
        case CandidateKind::X2:
            return "X2(" + std::to_string(first) + "," + std::to_string(second) + ")";
        case CandidateKind::X3:
            return "X3(" + std::to_string(first) + "," + std::to_string(second) + ")";
    }
    return "?";
}

std::vector<CandidateStrategy> enumerate_candidates(const GameSpec& spec) {
    const int n = spec.resources();
    const int r = spec.picks;
    const auto& E = spec.means;
    const BoundaryTables tables = boundary_functions(spec);  // also validates A1/A2

    std::vector<CandidateStrategy> out;
    auto push = [&](CandidateKind kind, int first, int second, std::vector<double> probs,
                    double gamma) {
        CandidateStrategy cand;
        cand.kind = kind;
        cand.first = first;
        cand.second = second;
        cand.strategy = MixedStrategy(std::move(probs), r);
        cand.gamma = gamma;
        cand.objective = f_worst_m2(cand.strategy, spec);
        out.push_back(std::move(cand));
    };

    {
        std::vector<double> probs(n, 0.0);
        std::fill(probs.begin(), probs.begin() + r, 1.0);
        push(CandidateKind::P0, 0, 0, std::move(probs), E[r]);
    }

    for (int a = 0; a <= r - 1; ++a) {
        for (int c = r + 1; c <= n; ++c) {
            const int h = tables.h[a][c - r - 1];
            if (h <= r) continue;
            const int b = std::min(h, c);
            const double delta = r - a + b - c;
            const double s = inverse_sum(E, a + 1, b);
            std::vector<double> probs(n, 0.0);
            for (int k = 1; k <= a; ++k) probs[k - 1] = 1.0;
            for (int k = a + 1; k <= b; ++k) probs[k - 1] = delta / (E[k - 1] * s);
            for (int k = b + 1; k <= c; ++k) probs[k - 1] = 1.0;
            push(CandidateKind::X1, a, c, std::move(probs), delta / s);
        }
    }

    for (int a = 0; a <= r - 1; ++a) {
        for (int b = r + 1; b <= n; ++b) {
            const int c = tables.e[a][b - r - 1];
            if (!(b < c && c <= n)) continue;
            std::vector<double> probs(n, 0.0);
            for (int k = 1; k <= a; ++k) probs[k - 1] = 1.0;
            for (int k = a + 1; k <= b; ++k) probs[k - 1] = E[b - 1] / E[k - 1];
            for (int k = b + 1; k <= c - 1; ++k) probs[k - 1] = 1.0;
            probs[c - 1] = (r - a) + b - c - E[b - 1] * inverse_sum(E, a + 1, b - 1);
            push(CandidateKind::X2, a, b, std::move(probs), E[b - 1]);
        }
    }

    for (int b = r + 1; b <= n; ++b) {
        for (int c = b; c <= n; ++c) {
            const int a = tables.g[b - r - 1][c - r - 1];
            if (!(0 < a && a <= r - 1)) continue;
            std::vector<double> probs(n, 0.0);
            for (int k = 1; k <= a - 1; ++k) probs[k - 1] = 1.0;
            probs[a - 1] = r - a + b - c - E[b - 1] * inverse_sum(E, a + 1, b - 1);
            for (int k = a + 1; k <= b; ++k) probs[k - 1] = E[b - 1] / E[k - 1];
            for (int k = b + 1; k <= c; ++k) probs[k - 1] = 1.0;
            push(CandidateKind::X3, b, c, std::move(probs), E[b - 1]);
        }
    }
    return out;
}

ClosedFormResult solve_m2_r1(const GameSpec& spec) {
    if (spec.players != 2 || spec.picks != 1)
        throw std::invalid_argument("solve_m2_r1: requires m = 2 and r = 1");
    const SortedReduction red = reduce_and_sort(spec);
    if (static_cast<int>(red.means.size()) <= spec.picks)
        return solve_degenerate(spec, red);

    const int n = static_cast<int>(red.means.size());
    int u = 1;
    double best = 0.0;
    double inv = 0.0;
    for (int k = 1; k <= n; ++k) {
        inv += 1.0 / red.means[k - 1];
        const double value = (k - 0.5) / inv;
        if (k == 1 || value > best) {
            best = value;
            u = k;
        }
    }
    const double s = inverse_sum(red.means, 1, u);
    std::vector<double> probs(n, 0.0);
    for (int k = 1; k <= u; ++k) probs[k - 1] = 1.0 / (red.means[k - 1] * s);
    MixedStrategy p = expand(red, probs, spec.picks);
    const double value = f_worst_m2(p, spec);
    return make_result(red, std::move(p), value, "m2-r1");
}

ClosedFormResult solve_m3_r1(const GameSpec& spec) {
    if (spec.players != 3 || spec.picks != 1)
        throw std::invalid_argument("solve_m3_r1: requires m = 3 and r = 1");
    const SortedReduction red = reduce_and_sort(spec);
    if (static_cast<int>(red.means.size()) <= spec.picks)
        return solve_degenerate(spec, red);

    const int n = static_cast<int>(red.means.size());
    const SequencesUV seq = sequences_uv(red.means);
    std::vector<double> probs(n, 0.0);
    std::string tag;
    if (seq.V[seq.v - 2] > seq.U[seq.u - 1]) {
        const double s = inverse_sum(red.means, 1, seq.v);
        for (int k = 1; k <= seq.v; ++k) probs[k - 1] = 1.0 / (red.means[k - 1] * s);
        tag = "m3-r1-case1";
    } else {
        const double denom = 3.0 / red.means[0] + inverse_sum(red.means, 2, seq.u);
        probs[0] = (3.0 / red.means[0]) / denom;
        for (int k = 2; k <= seq.u; ++k) probs[k - 1] = 1.0 / (red.means[k - 1] * denom);
        tag = "m3-r1-case2";
    }
    MixedStrategy p = expand(red, probs, spec.picks);
    const double value = f_worst_m3_r1(p, spec);
    return make_result(red, std::move(p), value, std::move(tag));
}

ClosedFormResult solve_m2_general(const GameSpec& spec) {
    if (spec.players != 2)
        throw std::invalid_argument("solve_m2_general: requires m = 2");
    const SortedReduction red = reduce_and_sort(spec);
    const int n_pos = static_cast<int>(red.means.size());
    if (n_pos <= spec.picks) return solve_degenerate(spec, red);

    if (!a1_holds(red.means) || !a2_holds(red.means, spec.picks)) {
        const SolverConfig cfg = SolverConfig::epsilon_scheme(1e-3);
        MaximinResult fallback = solve_maximin(spec, cfg);
        ClosedFormResult out;
        out.strategy = std::move(fallback.strategy);
        out.value = fallback.value;
        out.case_tag = "fallback";
        out.permutation = red.to_original;
        out.permutation.insert(out.permutation.end(), red.zero_slots.begin(),
                               red.zero_slots.end());
        return out;
    }

    const GameSpec reduced(red.means, 2, spec.picks);
    const auto candidates = enumerate_candidates(reduced);
    const CandidateStrategy* best = &candidates.front();
    for (const auto& cand : candidates) {
        if (cand.objective > best->objective) best = &cand;
    }
    MixedStrategy p = expand(red, best->strategy.probs, spec.picks);
    const double value = f_worst_m2(p, spec);
    return make_result(red, std::move(p), value, "m2-" + best->label());
}

double f_worst_m2(const MixedStrategy& p, const GameSpec& spec) {
    if (spec.players != 2)
        throw std::invalid_argument("f_worst_m2: requires m = 2");
    const int n = spec.resources();
    if (p.size() != n) throw std::invalid_argument("f_worst_m2: dimension mismatch");
    std::vector<double> products(n);
    double total = 0.0;
    for (int k = 0; k < n; ++k) {
        products[k] = p.probs[k] * spec.means[k];
        total += products[k];
    }
    return total - 0.5 * top_sum(std::move(products), spec.picks);
}

double f_worst_m3_r1(const MixedStrategy& p, const GameSpec& spec) {
    const int n = spec.resources();
    if (n < 2) throw std::invalid_argument("f_worst_m3_r1: need at least two resources");
    if (p.size() != n) throw std::invalid_argument("f_worst_m3_r1: dimension mismatch");
    double total = 0.0;
    double top1 = 0.0, top2 = 0.0;
    for (int k = 0; k < n; ++k) {
        const double prod = p.probs[k] * spec.means[k];
        total += prod;
        if (prod > top1) {
            top2 = top1;
            top1 = prod;
        } else if (prod > top2) {
            top2 = prod;
        }
    }
    if (top1 > 3.0 * top2) return total - 2.0 * top1 / 3.0;
    return total - 0.5 * top1 - 0.5 * top2;
}

bool has_closed_form(const GameSpec& spec) {
    return spec.players == 2 || (spec.players == 3 && spec.picks == 1);
}

bool assumptions_hold_m2(const GameSpec& spec) {
    const SortedReduction red = reduce_and_sort(spec);
    if (static_cast<int>(red.means.size()) <= spec.picks) return true;  // degenerate path is exact
    return a1_holds(red.means) && a2_holds(red.means, spec.picks);
}

ValueEstimate best_value_estimate(const GameSpec& spec, double eps) {
    if (spec.players == 3 && spec.picks == 1) return {solve_m3_r1(spec).value, 0.0};
    if (spec.players == 2 && spec.picks == 1) return {solve_m2_r1(spec).value, 0.0};
    if (spec.players == 2) {
        ClosedFormResult result = solve_m2_general(spec);
        if (result.case_tag != "fallback") return {result.value, 0.0};
        return {result.value, error_bound(spec, SolverConfig::epsilon_scheme(1e-3))};
    }
    const SolverConfig cfg = SolverConfig::epsilon_scheme(eps);
    MaximinResult result = solve_maximin(spec, cfg);
    return {result.value, result.error_bound};
}

}  // namespace rsg
