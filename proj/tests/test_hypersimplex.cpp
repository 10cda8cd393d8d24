#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rsg/best_response.hpp"
#include "rsg/hypersimplex.hpp"
#include "test_util.hpp"

using namespace rsg;

namespace {

// Independent oracle: solve sum clip(y - mu) = r by bisection on mu.
std::vector<double> project_bisection(const std::vector<double>& y, int r) {
    double lo = *std::min_element(y.begin(), y.end()) - 1.0;
    double hi = *std::max_element(y.begin(), y.end());
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        double sum = 0.0;
        for (double v : y) sum += std::clamp(v - mid, 0.0, 1.0);
        (sum > r ? lo : hi) = mid;
    }
    const double mu = 0.5 * (lo + hi);
    std::vector<double> z(y.size());
    for (size_t i = 0; i < y.size(); ++i) z[i] = std::clamp(y[i] - mu, 0.0, 1.0);
    return z;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

std::vector<double> random_vector(std::mt19937_64& rng, int n, bool with_ties) {
    std::uniform_real_distribution<double> dist(-2.0, 3.0);
    std::vector<double> y(n);
    for (double& v : y) v = dist(rng);
    if (with_ties) {
        for (double& v : y) v = std::round(v * 4.0) / 4.0;
    }
    return y;
}

}  // namespace

TEST_CASE("projection examples") {
    CHECK(max_abs_diff(project({0.65, 0.35, 0.0}, 1).probs, {0.65, 0.35, 0.0}) < 1e-12);
    CHECK(max_abs_diff(project({0.9, 0.6, 0.1}, 1).probs, {0.65, 0.35, 0.0}) < 1e-12);
    CHECK(max_abs_diff(project({2.0, -1.0}, 1).probs, {1.0, 0.0}) < 1e-12);
    CHECK_THROWS_AS(project({1.0, std::nan("")}, 1), std::invalid_argument);
}

TEST_CASE("projection matches the bisection oracle") {
    std::mt19937_64 rng(42);
    for (int n = 2; n <= 10; ++n) {
        for (int trial = 0; trial < 1000; ++trial) {
            const int r = 1 + static_cast<int>(rng() % (n - 1));
            const auto y = random_vector(rng, n, trial % 3 == 0);
            const auto got = project(y, r).probs;
            const auto expected = project_bisection(y, r);
            REQUIRE(max_abs_diff(got, expected) < 1e-9);
        }
    }
}

TEST_CASE("projection is idempotent and non-expansive") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 2000; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 9);
        const int r = 1 + static_cast<int>(rng() % (n - 1));
        const auto y = random_vector(rng, n, trial % 4 == 0);
        const auto z = project(y, r).probs;
        REQUIRE(max_abs_diff(project(z, r).probs, z) < 1e-12);

        const auto y2 = random_vector(rng, n, false);
        const auto z2 = project(y2, r).probs;
        double dist_in = 0.0, dist_out = 0.0;
        for (int k = 0; k < n; ++k) {
            dist_in += (y[k] - y2[k]) * (y[k] - y2[k]);
            dist_out += (z[k] - z2[k]) * (z[k] - z2[k]);
        }
        REQUIRE(std::sqrt(dist_out) <= std::sqrt(dist_in) + 1e-12);
    }
}

TEST_CASE("decomposition examples") {
    Decomposition d = decompose(MixedStrategy({0.6, 0.3, 0.1}, 1));
    REQUIRE(d.terms.size() == 3);
    CHECK(d.terms[0].weight == doctest::Approx(0.6));
    CHECK(d.terms[0].action.mask == std::vector<int>({1, 0, 0}));
    CHECK(d.terms[1].weight == doctest::Approx(0.3));
    CHECK(d.terms[1].action.mask == std::vector<int>({0, 1, 0}));
    CHECK(d.terms[2].weight == doctest::Approx(0.1));
    CHECK(d.terms[2].action.mask == std::vector<int>({0, 0, 1}));

    Decomposition d2 = decompose(MixedStrategy({1.0, 0.5, 0.5}, 2));
    REQUIRE(d2.terms.size() == 2);
    CHECK(d2.terms[0].weight == doctest::Approx(0.5));
    CHECK(d2.terms[0].action.mask == std::vector<int>({1, 1, 0}));
    CHECK(d2.terms[1].weight == doctest::Approx(0.5));
    CHECK(d2.terms[1].action.mask == std::vector<int>({1, 0, 1}));

    // A vertex decomposes into itself with weight one.
    Decomposition d3 = decompose(MixedStrategy({0.0, 1.0, 0.0}, 1));
    REQUIRE(d3.terms.size() == 1);
    CHECK(d3.terms[0].weight == doctest::Approx(1.0));
    CHECK(d3.terms[0].action.mask == std::vector<int>({0, 1, 0}));

    MixedStrategy bad;  // bypasses the validating constructor
    bad.probs = {0.7, 0.7};
    bad.picks = 1;
    CHECK_THROWS_AS(decompose(bad), std::invalid_argument);
}

TEST_CASE("decomposition reconstructs the strategy with few terms") {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 10; ++n) {
        for (int r = 1; r < n; ++r) {
            for (int trial = 0; trial < 120; ++trial) {
                MixedStrategy p = test::random_strategy(rng, n, r);
                Decomposition d = decompose(p);
                REQUIRE(d.terms.size() <= static_cast<size_t>(n + 1));
                double weight = 0.0;
                std::vector<double> rebuilt(n, 0.0);
                for (const auto& term : d.terms) {
                    REQUIRE(term.weight >= 0.0);
                    REQUIRE(std::count(term.action.mask.begin(), term.action.mask.end(), 1) == r);
                    weight += term.weight;
                    for (int k = 0; k < n; ++k) rebuilt[k] += term.weight * term.action.mask[k];
                }
                REQUIRE(std::abs(weight - 1.0) < 1e-12);
                REQUIRE(max_abs_diff(rebuilt, p.probs) < 1e-12);
            }
        }
    }
}

TEST_CASE("sampling matches the marginals") {
    std::mt19937_64 rng(123);
    const int draws = 100000;

    MixedStrategy p({0.6, 0.3, 0.1}, 1);
    Decomposition d = decompose(p);
    std::vector<int> hits(3, 0);
    for (int i = 0; i < draws; ++i) {
        const PureAction a = sample(d, rng);
        for (int k = 0; k < 3; ++k) hits[k] += a.mask[k];
    }
    for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(hits[k] / double(draws) - p.probs[k]) < 0.005);
    }

    MixedStrategy q({0.5, 0.5}, 1);
    Decomposition dq = decompose(q);
    int first = 0;
    for (int i = 0; i < draws; ++i) first += sample(dq, rng).mask[0];
    CHECK(std::abs(first / double(draws) - 0.5) < 0.005);
}

TEST_CASE("a vertex samples to itself") {
    std::mt19937_64 rng(5);
    MixedStrategy p({0.0, 1.0, 1.0, 0.0}, 2);
    for (int i = 0; i < 50; ++i) {
        CHECK(sample(p, rng).mask == std::vector<int>({0, 1, 1, 0}));
    }
}

TEST_CASE("split_load examples") {
    auto actions = split_load(LoadVector({2, 0}, 2, 1), 1);
    REQUIRE(actions.size() == 2);
    CHECK(actions[0].mask == std::vector<int>({1, 0}));
    CHECK(actions[1].mask == std::vector<int>({1, 0}));

    actions = split_load(LoadVector({1, 1}, 2, 1), 1);
    CHECK(actions[0].mask == std::vector<int>({1, 0}));
    CHECK(actions[1].mask == std::vector<int>({0, 1}));

    actions = split_load(LoadVector({2, 1, 1}, 2, 2), 2);
    CHECK(actions[0].mask == std::vector<int>({1, 1, 0}));
    CHECK(actions[1].mask == std::vector<int>({1, 0, 1}));
}

TEST_CASE("split_load sums to the input over all of J_q") {
    for (int n = 2; n <= 6; ++n) {
        for (int r = 1; r <= std::min(3, n - 1); ++r) {
            for (int q = 1; q <= 4; ++q) {
                for (const auto& x : enumerate_loads(n, q, r)) {
                    const auto actions = split_load(x, r);
                    REQUIRE(actions.size() == static_cast<size_t>(q));
                    std::vector<int> total(n, 0);
                    for (const auto& a : actions) {
                        REQUIRE(std::count(a.mask.begin(), a.mask.end(), 1) == r);
                        for (int k = 0; k < n; ++k) total[k] += a.mask[k];
                    }
                    REQUIRE(total == x.loads);
                }
            }
        }
    }
}

TEST_CASE("containment test") {
    CHECK(contains({0.5, 0.5}, 1, 1e-9));
    CHECK_FALSE(contains({1.2, -0.2}, 1, 1e-9));
    for (int n = 2; n <= 8; ++n) {
        for (int r = 1; r < n; ++r) {
            CHECK(contains(std::vector<double>(n, double(r) / n), r, 1e-9));
        }
    }
}

TEST_CASE("projection window invariants") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> dist(-2.0, 3.0);
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 9);
        const int r = 1 + static_cast<int>(rng() % (n - 1));
        std::vector<double> y(n);
        for (double& v : y) v = dist(rng);
        std::sort(y.begin(), y.end(), std::greater<>());

        const ProjectionWindow w = find_projection_window(y, r);
        REQUIRE(1 <= w.a);
        REQUIRE(w.a <= w.b);
        REQUIRE(w.b <= n);
        double window_sum = 0.0;
        for (int j = w.a; j <= w.b; ++j) window_sum += y[j - 1];
        REQUIRE(w.mu == doctest::Approx((window_sum - (r - w.a + 1)) / (w.b - w.a + 1))
                            .epsilon(1e-12));
        // Everything above the window clips to 1, below to 0.
        if (w.a > 1) REQUIRE(y[w.a - 2] - w.mu >= 1.0 - 1e-9);
        if (w.b < n) REQUIRE(y[w.b] - w.mu <= 1e-9);
    }
}
