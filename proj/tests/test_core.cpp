#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cutnorm.hpp"
#include "densities.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "harness.hpp"
#include "json_io.hpp"
#include "oracles.hpp"
#include "step_graphon.hpp"

using namespace gldp;

namespace {

StepGraphon two_part(double m1, double v00, double v01, double v11) {
    Matrix v(2);
    v(0, 0) = v00;
    v(0, 1) = v01;
    v(1, 0) = v01;
    v(1, 1) = v11;
    return StepGraphon({m1, 1.0 - m1}, std::move(v));
}

} // namespace

TEST_CASE("step graphon invariants are enforced") {
    CHECK_THROWS_AS(StepGraphon({0.5, 0.4}, Matrix(2)), config_error);
    Matrix bad(2);
    bad(0, 1) = 0.5;
    bad(1, 0) = 0.7;
    CHECK_THROWS_AS(StepGraphon({0.5, 0.5}, std::move(bad)), config_error);
    Matrix big(1);
    big(0, 0) = 1.5;
    CHECK_THROWS_AS(StepGraphon({1.0}, std::move(big)), config_error);
    CHECK_THROWS_AS(StepGraphon({}, Matrix(0)), config_error);
}

TEST_CASE("graph_to_graphon embeds small graphs") {
    StepGraphon e2 = graph_to_graphon(empty_graph(2));
    CHECK(e2.parts() == 2);
    CHECK(e2.measure(0) == doctest::Approx(0.5));
    CHECK(e2.value(0, 1) == 0.0);

    StepGraphon k2 = graph_to_graphon(complete_graph(2));
    CHECK(k2.value(0, 1) == 1.0);
    CHECK(k2.value(0, 0) == 0.0);

    StepGraphon k3 = graph_to_graphon(complete_graph(3));
    CHECK(k3.parts() == 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(k3.value(i, j) == (i == j ? 0.0 : 1.0));
}

TEST_CASE("graph_to_graphon density matches homomorphism counts") {
    StreamRng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        int n = 3 + static_cast<int>(rng.next_below(3));
        SimpleGraph g(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.next_unit() < 0.5) g.set_edge(i, j);
        StepGraphon w = graph_to_graphon(g);
        for (int fv = 2; fv <= 4; ++fv) {
            for (std::uint32_t rep : iso_class_reps(fv)) {
                SimpleGraph f = SimpleGraph::from_edge_mask(fv, rep);
                double expect = static_cast<double>(oracle::brute_hom_count(f, g)) /
                                std::pow(static_cast<double>(n), fv);
                CHECK(hom_density(f, w) == doctest::Approx(expect).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("weighted_to_graphon") {
    WeightedGraph h(3);
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) h.set_weight(i, j, 0.4);
    StepGraphon w = weighted_to_graphon(h);
    CHECK(w.value(0, 1) == 0.4);
    CHECK(w.value(1, 1) == 0.0);

    WeightedGraph h1(1);
    StepGraphon w1 = weighted_to_graphon(h1);
    CHECK(w1.parts() == 1);
    CHECK(w1.value(0, 0) == 0.0);
}

TEST_CASE("reweight keeps values and drops null parts") {
    StepGraphon w = two_part(0.5, 0.0, 1.0, 0.0);
    StepGraphon same = reweight(w, w.measures());
    CHECK(same.parts() == 2);
    CHECK(same.value(0, 1) == 1.0);

    StepGraphon collapsed = reweight(w, {1.0, 0.0});
    CHECK(collapsed.parts() == 1);
    CHECK(collapsed.value(0, 0) == 0.0);

    StepGraphon skew = reweight(w, {0.25, 0.75});
    CHECK(hom_density(complete_graph(2), skew) == doctest::Approx(0.375).epsilon(1e-12));

    CHECK_THROWS_AS(reweight(w, {0.5}), config_error);
    CHECK_THROWS_AS(reweight(w, {-0.1, 1.1}), config_error);
}

TEST_CASE("reweight round trip preserves densities") {
    StreamRng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        StepGraphon w = random_step_graphon(rng, 3);
        std::vector<double> mu = {0.2, 0.5, 0.3};
        StepGraphon fwd = reweight(w, mu);
        StepGraphon back = reweight(fwd, w.measures());
        for (int fv = 2; fv <= 3; ++fv)
            for (std::uint32_t rep : iso_class_reps(fv)) {
                SimpleGraph f = SimpleGraph::from_edge_mask(fv, rep);
                CHECK(hom_density(f, back) ==
                      doctest::Approx(hom_density(f, w)).epsilon(1e-12));
            }
    }
}

TEST_CASE("stretch identity and part collapse") {
    StepGraphon u = two_part(0.5, 0.2, 0.7, 0.9);
    StretchResult id = stretch(u, 1.0);
    CHECK(id.graphon.parts() == 2);
    CHECK(id.graphon.value(0, 1) == 0.7);

    StretchResult half = stretch(u, 0.5);
    CHECK(half.graphon.parts() == 1);
    CHECK(half.graphon.value(0, 0) == 0.2);

    CHECK_THROWS_AS(stretch(u, 0.0), config_error);
    CHECK_THROWS_AS(stretch(u, 1.5), config_error);
}

TEST_CASE("stretch plan is a valid coupling achieving the deletion bound") {
    StreamRng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        StepGraphon u = random_step_graphon(rng, 2 + static_cast<int>(rng.next_below(4)));
        double s = 0.65 + 0.35 * rng.next_unit();
        StretchResult r = stretch(u, s);
        TransportPlan plan;
        plan.row_marginals = u.measures();
        plan.col_marginals = r.graphon.measures();
        plan.c = r.plan;
        plan.validate();
        CHECK(evaluate_plan_cut_norm(u, r.graphon, plan) <= 2.0 * (1.0 / s - 1.0) + 1e-9);
    }
}

TEST_CASE("stretch composition on aligned boundaries") {
    // Boundaries of a 4-equal-part graphon stay aligned under s = 3/4 then
    // s = 2/3, which composes to s = 1/2.
    StreamRng rng(3);
    StepGraphon u = StepGraphon({0.25, 0.25, 0.25, 0.25}, random_symmetric_matrix(rng, 4));
    StepGraphon a = stretch(stretch(u, 0.75).graphon, 2.0 / 3.0).graphon;
    StepGraphon b = stretch(u, 0.5).graphon;
    CHECK(cut_norm_diff(a.canonical(), b.canonical()) <= 1e-12);
}

TEST_CASE("common refinement merges boundaries") {
    StepGraphon u = two_part(0.5, 0.1, 0.2, 0.3);
    Matrix v(2);
    v(0, 0) = 0.9;
    v(0, 1) = 0.5;
    v(1, 0) = 0.5;
    v(1, 1) = 0.1;
    StepGraphon w({1.0 / 3.0, 2.0 / 3.0}, std::move(v));
    Refinement r = common_refinement(u, w);
    REQUIRE(r.measures.size() == 3);
    CHECK(r.measures[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(r.measures[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(r.measures[2] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(vec_sum(r.measures) == doctest::Approx(1.0).epsilon(1e-14));

    auto [ru, rw] = common_refinement_pair(u, w);
    CHECK(hom_density(complete_graph(2), ru) ==
          doctest::Approx(hom_density(complete_graph(2), u)).epsilon(1e-12));
    CHECK(hom_density(complete_graph(2), rw) ==
          doctest::Approx(hom_density(complete_graph(2), w)).epsilon(1e-12));

    Refinement same = common_refinement(u, u);
    CHECK(same.measures.size() == 2);
}

TEST_CASE("refinement contains every input boundary") {
    StreamRng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        StepGraphon u = random_step_graphon(rng, 2 + static_cast<int>(rng.next_below(4)));
        StepGraphon v = random_step_graphon(rng, 2 + static_cast<int>(rng.next_below(4)));
        Refinement r = common_refinement(u, v);
        CHECK(r.measures.size() <= u.parts() + v.parts() - 1);
        CHECK(vec_sum(r.measures) == doctest::Approx(1.0).epsilon(1e-12));
        std::vector<double> cuts{0.0};
        for (double m : r.measures) cuts.push_back(cuts.back() + m);
        for (double b : u.boundaries()) {
            double nearest = 1.0;
            for (double c : cuts) nearest = std::min(nearest, std::fabs(c - b));
            CHECK(nearest <= 1e-9);
        }
    }
}

TEST_CASE("localize specializations") {
    StepGraphon w = two_part(0.5, 0.0, 1.0, 0.0);

    // Both target intervals inside part 1: the kernel value there is 0.
    IntervalList targets({{0.0, 0.2}, {0.3, 0.5}});
    StepGraphon loc = localize(w, targets, {0.5, 0.5});
    StepGraphon canon = loc.canonical();
    CHECK(canon.parts() == 1);
    CHECK(canon.value(0, 0) == 0.0);

    // Constants are localization-invariant.
    StepGraphon c = StepGraphon::constant(0.4);
    StepGraphon lc = localize(c, targets, {0.5, 0.5}).canonical();
    CHECK(lc.parts() == 1);
    CHECK(lc.value(0, 0) == 0.4);

    // Targets equal to the parts themselves reproduce the graphon.
    IntervalList own({{0.0, 0.5}, {0.5, 1.0}});
    StepGraphon same = localize(w, own, w.measures());
    for (int fv = 2; fv <= 4; ++fv)
        for (std::uint32_t rep : iso_class_reps(fv)) {
            SimpleGraph f = SimpleGraph::from_edge_mask(fv, rep);
            CHECK(hom_density(f, same) == doctest::Approx(hom_density(f, w)).epsilon(1e-12));
        }

    CHECK_THROWS_AS(localize(w, targets, {1.0}), config_error);
    CHECK_THROWS_AS(IntervalList({{0.0, 0.3}, {0.2, 0.5}}), config_error);
}

TEST_CASE("canonical form drops null parts and merges twins") {
    Matrix v(3);
    // Parts 0 and 1 are twins (identical rows, constant diagonal block).
    v(0, 0) = 0.2; v(0, 1) = 0.2; v(0, 2) = 0.8;
    v(1, 0) = 0.2; v(1, 1) = 0.2; v(1, 2) = 0.8;
    v(2, 0) = 0.8; v(2, 1) = 0.8; v(2, 2) = 0.1;
    StepGraphon g({0.3, 0.3, 0.4}, std::move(v));
    StepGraphon c = g.canonical();
    CHECK(c.parts() == 2);
    CHECK(c.measure(0) == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(c.value(0, 1) == doctest::Approx(0.8));
}

TEST_CASE("graphon JSON round trip is bit exact") {
    StepGraphon g = two_part(0.123456789012345, 0.25, 0.7, 0.999999999999999);
    std::string j = graphon_to_json(g);
    StepGraphon g2 = graphon_from_json(j);
    CHECK(graphon_to_json(g2) == j);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(g2.measure(i) == g.measure(i));
        for (std::size_t jj = 0; jj < 2; ++jj) CHECK(g2.value(i, jj) == g.value(i, jj));
    }
    CHECK_THROWS_AS(graphon_from_json("{"), config_error);
    CHECK_THROWS_AS(graphon_from_json("{\"measures\":[1.0]}"), config_error);
}

TEST_CASE("random graphons round trip through JSON bit exactly") {
    StreamRng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        StepGraphon g = random_step_graphon(rng, 2 + static_cast<int>(rng.next_below(5)));
        std::string j = graphon_to_json(g);
        StepGraphon g2 = graphon_from_json(j);
        CHECK(graphon_to_json(g2) == j);
    }
}

TEST_CASE("edge list round trip") {
    SimpleGraph g = path_graph(4);
    std::string txt = format_edge_list(g);
    SimpleGraph g2 = parse_edge_list(txt);
    CHECK(g2 == g);
    CHECK(format_edge_list(g2) == txt);
    CHECK_THROWS_AS(parse_edge_list("3\n0 0\n"), config_error);
    CHECK_THROWS_AS(parse_edge_list("2\n0 5\n"), config_error);
    CHECK_THROWS_AS(parse_edge_list(""), config_error);

    StreamRng rng(14);
    for (int trial = 0; trial < 50; ++trial) {
        int n = 2 + static_cast<int>(rng.next_below(10));
        SimpleGraph r(n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.next_unit() < 0.4) r.set_edge(i, j);
        CHECK(parse_edge_list(format_edge_list(r)) == r);
    }
}

TEST_CASE("blowup") {
    CHECK(blowup(complete_graph(2), 1) == complete_graph(2));
    SimpleGraph c4 = blowup(complete_graph(2), 2);
    CHECK(c4.n() == 4);
    CHECK(c4.edge_count() == 4);
    CHECK(isomorphic(c4, cycle_graph(4)));
}
