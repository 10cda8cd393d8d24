#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rsg/best_response.hpp"
#include "rsg/closed_form.hpp"
#include "rsg/hypersimplex.hpp"
#include "rsg/maximin.hpp"
#include "test_util.hpp"

using namespace rsg;

TEST_CASE("solver configuration") {
    CHECK_THROWS_AS(SolverConfig(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(SolverConfig(0.1, 0), std::invalid_argument);
    SolverConfig eps = SolverConfig::epsilon_scheme(0.1);
    CHECK(eps.step == doctest::Approx(0.1));
    CHECK(eps.iterations == 100);
}

TEST_CASE("error bound arithmetic") {
    GameSpec spec({1.0, 1.0}, 2, 1);
    CHECK(error_bound(spec, SolverConfig(0.1, 100), 0.5) ==
          doctest::Approx(0.125).epsilon(1e-12));

    GameSpec zeros({0.0, 0.0}, 2, 1, 1.0);
    CHECK(error_bound(zeros, SolverConfig(0.1, 100), 0.5) ==
          doctest::Approx(0.5 / 20.0).epsilon(1e-12));

    // The epsilon scheme gives an O(eps) certificate.
    for (double eps : {0.1, 0.01}) {
        const SolverConfig cfg = SolverConfig::epsilon_scheme(eps);
        const double bound = error_bound(spec, cfg, 2.0);
        CHECK(bound <= (2.0 / 2.0 + 1.0) * eps + 1e-12);  // (dist_sq/2 + sumE2/2) * eps
    }
}

TEST_CASE("solver reaches the known optima") {
    GameSpec even({1.0, 1.0}, 2, 1);
    MaximinResult r1 = solve_maximin(even, SolverConfig(0.01, 10000));
    CHECK(std::abs(r1.value - 0.75) < 0.02);

    GameSpec skew({4.0, 1.0}, 2, 1);
    MaximinResult r2 = solve_maximin(skew, SolverConfig::epsilon_scheme(0.02));
    CHECK(std::abs(r2.value - 2.0) < 0.05);
    CHECK(r2.strategy.probs[0] > 0.9);

    GameSpec trio({1.0, 1.0}, 3, 1);
    MaximinResult r3 = solve_maximin(trio, SolverConfig(0.01, 10000));
    CHECK(std::abs(r3.value - 0.5) < 0.02);
}

TEST_CASE("returned pair is consistent") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const int m = 2 + static_cast<int>(rng() % 3);
        const int r = 1 + static_cast<int>(rng() % std::min(2, n - 1));
        GameSpec spec(test::random_means(rng, n), m, r);
        MaximinResult result = solve_maximin(spec, SolverConfig::epsilon_scheme(0.05));

        // The reported loads re-minimize at the reported strategy.
        BestResponse check = brute_force_min_load(result.strategy, spec);
        REQUIRE(result.value == doctest::Approx(check.value).epsilon(1e-12));
        REQUIRE(utility(result.strategy, result.loads, spec) ==
                doctest::Approx(result.value).epsilon(1e-12));
    }
}

TEST_CASE("gap certificate holds against closed forms") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        GameSpec spec(test::random_means(rng, n, 0.2, 3.0), 2, 1);
        const double exact = solve_m2_r1(spec).value;
        MaximinResult approx = solve_maximin(spec, SolverConfig::epsilon_scheme(0.02));
        const double gap = exact - approx.value;
        REQUIRE(gap >= -1e-9);
        REQUIRE(gap <= approx.error_bound + 1e-9);
    }
}

TEST_CASE("subgradient matches central finite differences") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng() % 4);
        const int m = 2 + static_cast<int>(rng() % 3);
        GameSpec spec(test::random_means(rng, n), m, 1);
        MixedStrategy p = test::random_strategy(rng, n, 1);
        const LoadVector x = greedy_min_load(p, spec).loads;
        const double h = 1e-5;
        for (int k = 0; k < n; ++k) {
            MixedStrategy up = p, down = p;
            up.probs[k] += h;
            down.probs[k] -= h;
            double fu = 0.0, fd = 0.0;
            for (int j = 0; j < n; ++j) {
                fu += spec.means[j] * up.probs[j] / (1.0 + x.loads[j]);
                fd += spec.means[j] * down.probs[j] / (1.0 + x.loads[j]);
            }
            const double fd_grad = (fu - fd) / (2.0 * h);
            const double analytic = spec.means[k] / (1.0 + x.loads[k]);
            REQUIRE(std::abs(fd_grad - analytic) < 1e-6);
        }
    }
}

TEST_CASE("every iterate stays feasible") {
    GameSpec spec({3.0, 1.0, 0.4}, 3, 1);
    SolverConfig cfg(0.05, 500);
    int calls = 0;
    cfg.on_iterate = [&](int, const MixedStrategy& p) {
        ++calls;
        REQUIRE(contains(p.probs, p.picks, 1e-9));
    };
    solve_maximin(spec, cfg);
    CHECK(calls == 500);
}

TEST_CASE("grid oracle") {
    GameSpec even({1.0, 1.0}, 2, 1);
    CHECK(std::abs(grid_oracle(even, 1e-3) - 0.75) <= 1e-3);

    GameSpec trio({1.0, 1.0}, 3, 1);
    CHECK(std::abs(grid_oracle(trio, 1e-3) - 0.5) <= 2e-3);

    GameSpec uniform3({1.0, 1.0, 1.0}, 3, 1);
    CHECK(std::abs(grid_oracle(uniform3, 1e-2) - 2.0 / 3.0) <= 0.05);

    GameSpec big({1.0, 1.0, 1.0, 1.0}, 2, 1);
    CHECK_THROWS_AS(grid_oracle(big, 1e-2), std::invalid_argument);
}

TEST_CASE("default step minimizes the bound shape") {
    GameSpec spec({2.0, 1.0, 0.5}, 2, 1);
    SolverConfig cfg = SolverConfig::default_step(spec, 400);
    CHECK(cfg.step == doctest::Approx(1.0 / std::sqrt(400 * (4.0 + 1.0 + 0.25))));
    MaximinResult result = solve_maximin(spec, cfg);
    CHECK(result.error_bound > 0.0);
    CHECK(result.value <= solve_m2_r1(spec).value + 1e-9);
}
