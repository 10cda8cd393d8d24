#pragma once

#include <string>
#include <vector>

#include "rsg/game.hpp"

namespace rsg {

/// Scalar sequences whose argmax indices select the support size and case
/// of the three-player singleton solution. Entries are 1-based: U covers
/// [1:n], V covers [2:n]. Means must be sorted in non-increasing order and
/// positive.
struct SequencesUV {
    std::vector<double> U;  // U[i-1] = i / (3/F_1 + sum_{k=2..i} 1/F_k)
    std::vector<double> V;  // V[i-2] = (i-1) / sum_{k=1..i} 1/F_k
    int u = 1;              // argmax of U over [1:n], lowest index on ties
    int v = 2;              // argmax of V over [2:n], lowest index on ties
};

SequencesUV sequences_uv(const std::vector<double>& sorted_means);

/// Index triple for the two-player general-r solution; classified good when
/// r - a + b - c < E_b * S_{a+1,b}.
struct Triplet {
    int a = 0;
    int b = 0;
    int c = 0;
    bool good = false;
};

/// Classifies (a, b, c) with a in [0:r-1], b, c in [r+1:n]. Means must be
/// sorted in non-increasing order and positive.
Triplet classify_triplet(int a, int b, int c, const GameSpec& spec);

/// Monotone transition indices of the good/bad classification:
///   h(a,c): largest good b (r if none exist, n if all are good)
///   e(a,b): smallest good c (n+1 if none exist, r+1 if all are good)
///   g(b,c): smallest good a (r if none exist, 0 if all are good)
/// Requires assumptions A1 (distinct means) and A2 (E_b S_{a,b} never an
/// integer).
struct BoundaryTables {
    int picks = 1;
    int resources = 2;
    std::vector<std::vector<int>> h;  // h[a][c - (r+1)], a in [0:r-1]
    std::vector<std::vector<int>> e;  // e[a][b - (r+1)]
    std::vector<std::vector<int>> g;  // g[b - (r+1)][c - (r+1)]
};

BoundaryTables boundary_functions(const GameSpec& spec);

enum class CandidateKind { P0, X1, X2, X3 };

/// One member of the finite optimal-candidate family for the two-player
/// problem, with its prescribed multiplier gamma and its objective value.
struct CandidateStrategy {
    CandidateKind kind = CandidateKind::P0;
    int first = 0;   // (a) for X1/X2, (b) for X3; unused for P0
    int second = 0;  // (c) for X1, (b) for X2, (c) for X3; unused for P0
    MixedStrategy strategy;
    double gamma = 0.0;
    double objective = 0.0;

    std::string label() const;
};

/// The full candidate set {p^0} + X1 + X2 + X3 for a sorted, positive,
/// A1/A2-satisfying instance with m = 2.
std::vector<CandidateStrategy> enumerate_candidates(const GameSpec& spec);

struct ClosedFormResult {
    MixedStrategy strategy;  // in the caller's original resource order
    double value = 0.0;
    std::string case_tag;
    std::vector<int> permutation;  // permutation[i] = original index of sorted slot i
};

/// Two players, one pick: inverse-proportional weights on the top-u means.
ClosedFormResult solve_m2_r1(const GameSpec& spec);

/// Three players, one pick: the U/V case split.
ClosedFormResult solve_m3_r1(const GameSpec& spec);

/// Two players, arbitrary r: candidate enumeration when A1 and A2 hold,
/// otherwise a subgradient fallback with an eps = 1e-3 certificate (tagged
/// "fallback").
ClosedFormResult solve_m2_general(const GameSpec& spec);

/// Worst case against one opponent: sum p_k E_k minus half the sum of the r
/// largest products.
double f_worst_m2(const MixedStrategy& p, const GameSpec& spec);

/// Worst case against two opponents with r = 1, from the two largest
/// products Gamma_1 >= Gamma_2: subtract (2/3) Gamma_1 when Gamma_1 >
/// 3 Gamma_2, else (Gamma_1 + Gamma_2) / 2.
double f_worst_m3_r1(const MixedStrategy& p, const GameSpec& spec);

/// True when (m, r) matches one of the explicit cases: m = 2 (any r) or
/// m = 3 with r = 1.
bool has_closed_form(const GameSpec& spec);

/// A1 and A2 on the positive, descending-sorted means (integrality checked
/// within 1e-12).
bool assumptions_hold_m2(const GameSpec& spec);

/// Routes to the applicable closed form, else runs the subgradient solver
/// with the given epsilon scheme. certificate is 0 for closed forms.
struct ValueEstimate {
    double value = 0.0;
    double certificate = 0.0;
};

ValueEstimate best_value_estimate(const GameSpec& spec, double eps = 1e-3);

}  // namespace rsg
