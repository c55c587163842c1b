#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cutnorm.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "policy.hpp"
#include "sampling.hpp"

using namespace gldp;

TEST_CASE("largest remainder rounding") {
    CHECK(largest_remainder_counts(10, {0.5, 0.5}) == std::vector<long>{5, 5});
    CHECK(largest_remainder_counts(10, {0.33, 0.67}) == std::vector<long>{3, 7});
    CHECK(largest_remainder_counts(7, {1.0 / 3, 1.0 / 3, 1.0 / 3}) ==
          std::vector<long>{3, 2, 2});
    auto c = largest_remainder_counts(1001, {0.3, 0.7});
    CHECK(c[0] + c[1] == 1001);
}

TEST_CASE("sanov experiment brackets the relative entropy") {
    Report rep = sanov_experiment({0.3, 0.7}, {0.5, 0.5}, {10, 100, 1000});
    REQUIRE(rep.rows.size() == 3);
    double prev_gap = kInf;
    for (const auto& row : rep.rows) {
        double gap = row[4], bound = row[5];
        CHECK(gap >= -1e-12);
        CHECK(gap <= bound + 1e-9);
        CHECK(gap <= prev_gap);
        prev_gap = gap;
    }
    // The n = 1000 empirical rate sits within 0.01 of the hand value.
    CHECK(std::fabs(rep.rows[2][2] - 0.0871896) <= 0.01);

    // target == beta has relative entropy exactly zero (integer counts).
    Report zero = sanov_experiment({0.3, 0.7}, {0.3, 0.7}, {10, 100});
    for (const auto& row : zero.rows) CHECK(row[3] == 0.0);

    // A single class has probability one and rate zero.
    Report one = sanov_experiment({1.0}, {1.0}, {10});
    CHECK(one.rows[0][2] == 0.0);
}

TEST_CASE("speed2 experiment on the homogeneous kernel") {
    StepGraphon w = StepGraphon::constant(0.5);
    SolveOptions light;
    light.grid = 8;
    light.restarts = 2;
    Report rep = speed2_experiment(w, w, 1.0, {3, 4}, light);
    for (const auto& row : rep.rows) {
        CHECK(row[2] == 0.0);               // whole space: mass 1, rate 0
        CHECK(row[3] == doctest::Approx(0.0).epsilon(1e-9)); // R_p at p itself
    }

    // Point mass: only the center's isomorphism class at radius 0.
    StepGraphon k3 = graph_to_graphon(complete_graph(3));
    Report point = speed2_experiment(w, k3, 0.0, {3}, light);
    double n2 = 9.0;
    int pairs = 3;
    // mass = 2^{-C(n,2)} for the unique labeled K3.
    CHECK(point.rows[0][2] ==
          doctest::Approx(pairs * std::log(2.0) / n2).epsilon(1e-12));
    CHECK(point.rows[0][6] == 1.0);

    // All-ones kernel: the sample is K_n surely.
    StepGraphon ones = StepGraphon::constant(1.0);
    Report sure = speed2_experiment(ones, graph_to_graphon(complete_graph(4)), 0.0, {4}, light);
    CHECK(sure.rows[0][2] == 0.0);
}

TEST_CASE("expeq experiment counts no false positives") {
    // 0/1-valued kernels: rounding changes nothing and every distance is 0.
    StepGraphon zo = graph_to_graphon(cycle_graph(4));
    Report rep = expeq_experiment(zo, {8, 16}, 0.05, 200, 5);
    for (const auto& row : rep.rows) CHECK(row[3] == 0.0);

    // Thresholds at or above 1 can never be exceeded.
    StreamRng rng(71);
    StepGraphon w = random_step_graphon(rng, 2);
    Report high = expeq_experiment(w, {8}, 1.0, 200, 5);
    CHECK(high.rows[0][3] == 0.0);

    CHECK_THROWS_AS(expeq_experiment(w, {8}, 0.3, 50, 5), config_error);
}

TEST_CASE("density lower bound helper equals the generic bound") {
    StreamRng rng(72);
    for (int t = 0; t < 20; ++t) {
        int n = 4 + static_cast<int>(rng.next_below(4));
        StepGraphon w = random_step_graphon(rng, 2);
        auto [h, g] = couple_weighted_rounded(w, n, SeedSpec{static_cast<std::uint64_t>(t)});
        Matrix gw(n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) gw(i, j) = g.edge(i, j) ? 1.0 : 0.0;
        double fast = density_lower_bound3(h.weights(), gw);
        double generic =
            cut_dist_lower(weighted_to_graphon(h), graph_to_graphon(g), 3).value;
        CHECK(fast == doctest::Approx(generic).epsilon(1e-12));
    }
}

TEST_CASE("lipschitz experiment sees no violations") {
    Report rep = lipschitz_experiment(60, 5, 2, 17);
    CHECK(rep.rows[0][3] == 0.0);
    CHECK(rep.rows[0][4] <= 1e-12);
    Report rep3 = lipschitz_experiment(10, 4, 3, 18);
    CHECK(rep3.rows[0][3] == 0.0);
}

TEST_CASE("stretch experiment stays under the deletion bound") {
    Report rep = delete_stretch_experiment(60, {1.0, 0.9, 0.8}, 19);
    REQUIRE(rep.rows.size() == 3);
    // s = 1 is the identity map.
    CHECK(rep.rows[0][3] <= 1e-12);
    for (const auto& row : rep.rows) {
        CHECK(row[4] == 0.0);
        CHECK(row[3] <= row[2] + 1e-9);
    }

    // Constant kernels stretch to themselves.
    StepGraphon c = StepGraphon::constant(0.3);
    for (double s : {0.5, 0.8}) {
        StretchResult r = stretch(c, s);
        CHECK(cut_norm_diff(c, r.graphon) == 0.0);
    }
}

TEST_CASE("reports are reproducible byte for byte") {
    StepGraphon w = StepGraphon::constant(0.5);
    Report a = expeq_experiment(w, {8}, 0.5, 150, 42);
    Report b = expeq_experiment(w, {8}, 0.5, 150, 42);
    CHECK(a.to_csv() == b.to_csv());
    CHECK(a.to_json().dump() == b.to_json().dump());

    // Thread count does not change the outcome.
    int saved = policy().threads;
    policy().threads = 1;
    Report c1 = expeq_experiment(w, {8}, 0.5, 150, 42);
    policy().threads = 2;
    Report c2 = expeq_experiment(w, {8}, 0.5, 150, 42);
    policy().threads = saved;
    CHECK(c1.to_csv() == c2.to_csv());
    CHECK(c1.to_csv() == a.to_csv());

    // The sidecar embeds config, environment and the metric convention.
    ojson side = a.to_json();
    CHECK(side.contains("config"));
    CHECK(side.contains("environment"));
    CHECK(side["metric_convention"].is_string());
}
