#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cutnorm.hpp"
#include "densities.hpp"
#include "errors.hpp"
#include "harness.hpp"
#include "oracles.hpp"

using namespace gldp;

TEST_CASE("homomorphism density examples") {
    CHECK(hom_density(complete_graph(2), StepGraphon::constant(0.37)) ==
          doctest::Approx(0.37).epsilon(1e-15));
    CHECK(hom_density(complete_graph(3), graph_to_graphon(complete_graph(3))) ==
          doctest::Approx(2.0 / 9.0).epsilon(1e-14));

    StreamRng rng(21);
    for (int trial = 0; trial < 40; ++trial) {
        StepGraphon w = random_step_graphon(rng, 2 + static_cast<int>(rng.next_below(4)));
        for (int fv = 2; fv <= 4; ++fv)
            for (std::uint32_t rep : iso_class_reps(fv)) {
                double t = hom_density(SimpleGraph::from_edge_mask(fv, rep), w);
                CHECK(t >= -1e-15);
                CHECK(t <= 1.0 + 1e-15);
            }
    }
}

TEST_CASE("homomorphism density is multiplicative over disjoint unions") {
    StreamRng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        StepGraphon w = random_step_graphon(rng, 3);
        // K2 u K2 inside 4 vertices vs t(K2)^2.
        SimpleGraph two_edges(4);
        two_edges.set_edge(0, 1);
        two_edges.set_edge(2, 3);
        double t1 = hom_density(complete_graph(2), w);
        CHECK(hom_density(two_edges, w) == doctest::Approx(t1 * t1).epsilon(1e-12));
        // K2 u K3 on 5 vertices.
        SimpleGraph mix(5);
        mix.set_edge(0, 1);
        mix.set_edge(2, 3);
        mix.set_edge(3, 4);
        mix.set_edge(4, 2);
        CHECK(hom_density(mix, w) ==
              doctest::Approx(t1 * hom_density(complete_graph(3), w)).epsilon(1e-12));
    }
}

TEST_CASE("induced density examples and oracle") {
    CHECK(induced_density(complete_graph(2), StepGraphon::constant(0.37)) ==
          doctest::Approx(0.37).epsilon(1e-15));

    StreamRng rng(23);
    for (int trial = 0; trial < 15; ++trial) {
        StepGraphon w = random_step_graphon(rng, 2 + static_cast<int>(rng.next_below(3)));
        // Total probability over all labeled graphs on [n].
        for (int n = 2; n <= 4; ++n) {
            Kahan total;
            for (std::uint32_t mask = 0; mask < (1u << pair_count(n)); ++mask)
                total.add(induced_density(SimpleGraph::from_edge_mask(n, mask), w));
            CHECK(total.value() == doctest::Approx(1.0).epsilon(1e-12));
        }
        // Direct phi-sum oracle.
        for (std::uint32_t rep : iso_class_reps(3)) {
            SimpleGraph f = SimpleGraph::from_edge_mask(3, rep);
            CHECK(induced_density(f, w) ==
                  doctest::Approx(oracle::brute_induced_density(f, w)).epsilon(1e-12));
        }
    }

    // A 0/1 kernel kills graphs whose edges land on zero blocks.
    StepGraphon fk2 = graph_to_graphon(complete_graph(2));
    SimpleGraph bar_k2 = empty_graph(2);
    CHECK(induced_density(bar_k2, fk2) ==
          doctest::Approx(oracle::brute_induced_density(bar_k2, fk2)).epsilon(1e-15));
}

TEST_CASE("hom equals induced summed over supergraphs") {
    StreamRng rng(24);
    StepGraphon w = random_step_graphon(rng, 3);
    CHECK(hom_density_relation_check(complete_graph(2), w));
    CHECK(hom_density_relation_check(empty_graph(3), w));
    CHECK(hom_density_relation_check(complete_graph(3),
                                     graph_to_graphon(cycle_graph(5))));
    CHECK(hom_density_relation_check(path_graph(4), w));
    CHECK_THROWS_AS(hom_density_relation_check(path_graph(5), w), guard_error);
}

TEST_CASE("exact distribution of constant kernels") {
    GraphDistribution d = exact_distribution(StepGraphon::constant(0.5), 3);
    REQUIRE(d.probs.size() == 8);
    for (double p : d.probs) CHECK(p == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-9));

    GraphDistribution dp = exact_distribution(StepGraphon::constant(0.3), 4);
    for (std::uint32_t g = 0; g < dp.probs.size(); ++g) {
        int e = __builtin_popcount(g);
        CHECK(dp.probs[g] ==
              doctest::Approx(std::pow(0.3, e) * std::pow(0.7, 6 - e)).epsilon(1e-12));
    }

    GraphDistribution d1 = exact_distribution(StepGraphon::constant(1.0), 4);
    CHECK(d1.probs.back() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(exact_distribution(StepGraphon::constant(0.5), 7), guard_error);
}

TEST_CASE("exact distribution entries are induced densities") {
    StreamRng rng(25);
    StepGraphon w = random_step_graphon(rng, 3);
    GraphDistribution d = exact_distribution(w, 4);
    CHECK(d.total() == doctest::Approx(1.0).epsilon(1e-9));
    for (std::uint32_t mask = 0; mask < d.probs.size(); mask += 7) {
        SimpleGraph f = SimpleGraph::from_edge_mask(4, mask);
        CHECK(d.probs[mask] == doctest::Approx(induced_density(f, w)).epsilon(1e-12));
    }

    // Edge marginals computed two ways.
    double edge = 0.0;
    for (std::size_t a = 0; a < w.parts(); ++a)
        for (std::size_t b = 0; b < w.parts(); ++b)
            edge += w.measure(a) * w.measure(b) * w.value(a, b);
    for (int t = 0; t < pair_count(4); ++t) {
        Kahan m;
        for (std::uint32_t mask = 0; mask < d.probs.size(); ++mask)
            if (mask & (1u << t)) m.add(d.probs[mask]);
        CHECK(m.value() == doctest::Approx(edge).epsilon(1e-10));
    }

    // Isomorphic labeled graphs receive equal probability.
    const auto& canon = canonical_table(4);
    for (std::uint32_t mask = 0; mask < d.probs.size(); ++mask)
        CHECK(d.probs[mask] == doctest::Approx(d.probs[canon[mask]]).epsilon(1e-12));
}

TEST_CASE("block model law") {
    // k = 1 coincides with the graphon sampling law.
    Matrix q(1);
    q(0, 0) = 0.35;
    GraphDistribution sbm = sbm_exact_distribution({4}, q);
    GraphDistribution wr = exact_distribution(StepGraphon::constant(0.35), 4);
    for (std::uint32_t g = 0; g < sbm.probs.size(); ++g)
        CHECK(sbm.probs[g] == doctest::Approx(wr.probs[g]).epsilon(1e-12));

    Matrix ones(2);
    for (auto& x : ones.data()) x = 1.0;
    GraphDistribution all = sbm_exact_distribution({2, 2}, ones);
    CHECK(all.probs.back() == doctest::Approx(1.0).epsilon(1e-15));

    Matrix half(2);
    half(0, 1) = 0.5;
    half(1, 0) = 0.5;
    GraphDistribution pair = sbm_exact_distribution({1, 1}, half);
    REQUIRE(pair.probs.size() == 2);
    CHECK(pair.probs[1] == doctest::Approx(0.5).epsilon(1e-15));

    CHECK_THROWS_AS(sbm_exact_distribution({4, 4}, ones), guard_error);
}

TEST_CASE("block model law matches the conditional graphon law") {
    // Condition the 2-part sampling law on the part counts (n <= 4) and
    // compare with the fixed-size block model.
    StreamRng rng(26);
    Matrix p = random_symmetric_matrix(rng, 2, 0.1, 0.9);
    std::vector<double> ms{0.4, 0.6};
    StepGraphon w(ms, p);
    int n = 3;
    std::vector<int> a{2, 1};

    // Direct conditioning: enumerate label assignments with the given counts.
    std::vector<double> cond(1u << pair_count(n), 0.0);
    double weight_total = 0.0;
    std::vector<int> labels(n);
    for (int l0 = 0; l0 < 2; ++l0)
        for (int l1 = 0; l1 < 2; ++l1)
            for (int l2 = 0; l2 < 2; ++l2) {
                labels = {l0, l1, l2};
                int c0 = (l0 == 0) + (l1 == 0) + (l2 == 0);
                if (c0 != a[0]) continue;
                double wprob = ms[l0] * ms[l1] * ms[l2];
                weight_total += wprob;
                for (std::uint32_t mask = 0; mask < cond.size(); ++mask) {
                    double prob = wprob;
                    for (int i = 0; i < n; ++i)
                        for (int j = i + 1; j < n; ++j) {
                            bool e = mask & (1u << pair_index(n, i, j));
                            double pe = p(labels[i], labels[j]);
                            prob *= e ? pe : 1.0 - pe;
                        }
                    cond[mask] += prob;
                }
            }
    for (double& x : cond) x /= weight_total;

    // The conditional law is a mixture over label orders; the block model law
    // is the same mixture collapsed by relabeling, so compare per
    // isomorphism class.
    GraphDistribution sbm = sbm_exact_distribution(a, p);
    const auto& canon = canonical_table(n);
    std::vector<double> by_class_cond(cond.size(), 0.0), by_class_sbm(cond.size(), 0.0);
    for (std::uint32_t mask = 0; mask < cond.size(); ++mask) {
        by_class_cond[canon[mask]] += cond[mask];
        by_class_sbm[canon[mask]] += sbm.probs[mask];
    }
    for (std::uint32_t rep = 0; rep < cond.size(); ++rep)
          CHECK(by_class_cond[rep] == doctest::Approx(by_class_sbm[rep]).epsilon(1e-10));
}

TEST_CASE("ball mass") {
    StepGraphon w = StepGraphon::constant(0.5);
    GraphDistribution d = exact_distribution(w, 4);

    // Radius >= 1 covers everything.
    long count = 0;
    CHECK(ball_mass(d, w, 1.0, &count) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(count == 64);

    // Radius 0 around a 0/1 center catches exactly its isomorphic copies.
    SimpleGraph g = path_graph(4);
    StepGraphon center = graph_to_graphon(g);
    double mass = ball_mass(d, center, 0.0, &count);
    const auto& canon = canonical_table(4);
    long iso_copies = 0;
    for (std::uint32_t mask = 0; mask < canon.size(); ++mask)
        if (canon[mask] == canon[g.edge_mask()]) ++iso_copies;
    CHECK(count == iso_copies);
    CHECK(mass == doctest::Approx(static_cast<double>(iso_copies) / 64.0).epsilon(1e-12));

    // A point mass far away gives zero ball mass (the ball still contains the
    // zero-probability empty graph itself).
    GraphDistribution d1 = exact_distribution(StepGraphon::constant(1.0), 4);
    double empty = ball_mass(d1, graph_to_graphon(empty_graph(4)), 0.1, &count);
    CHECK(empty == 0.0);
    CHECK(count == 1);

    // Incompatible center parts are refused.
    StepGraphon bad({0.4, 0.6}, Matrix(2));
    CHECK_THROWS_AS(ball_mass(d, bad, 0.5, nullptr), guard_error);
}
