#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <string>

#include "graphonldp.h"

namespace {

std::string take(char* s) {
    std::string out = s ? s : "";
    glp_string_free(s);
    return out;
}

const char* kHalf = "{\"measures\":[1.0],\"values\":[[0.5]]}";
const char* kTwoPart =
    "{\"measures\":[0.5,0.5],\"values\":[[0.0,1.0],[1.0,0.0]]}";

} // namespace

TEST_CASE("version and error reporting") {
    CHECK(std::string(glp_version()).find("graphon-ldp") == 0);

    glp_graphon* g = nullptr;
    CHECK(glp_graphon_from_json("{not json", &g) == GLP_ERR_CONFIG);
    CHECK(std::string(glp_last_error()).size() > 0);
    CHECK(glp_graphon_from_json("{\"measures\":[0.5,0.4],\"values\":[[0,0],[0,0]]}", &g) ==
          GLP_ERR_CONFIG);
    CHECK(std::string(glp_last_error()).find("sum to 1") != std::string::npos);
}

TEST_CASE("graphon json round trip is byte exact") {
    glp_graphon* g = nullptr;
    REQUIRE(glp_graphon_from_json(kTwoPart, &g) == GLP_OK);
    size_t parts = 0;
    CHECK(glp_graphon_parts(g, &parts) == GLP_OK);
    CHECK(parts == 2);
    char* out = nullptr;
    REQUIRE(glp_graphon_to_json(g, &out) == GLP_OK);
    std::string first = take(out);
    glp_graphon* g2 = nullptr;
    REQUIRE(glp_graphon_from_json(first.c_str(), &g2) == GLP_OK);
    REQUIRE(glp_graphon_to_json(g2, &out) == GLP_OK);
    CHECK(take(out) == first);
    glp_graphon_free(g);
    glp_graphon_free(g2);
}

TEST_CASE("guards surface as GLP_ERR_GUARD") {
    glp_graphon* w = nullptr;
    REQUIRE(glp_graphon_from_json(kHalf, &w) == GLP_OK);
    glp_dist* d = nullptr;
    CHECK(glp_exact_distribution(w, 7, &d) == GLP_ERR_GUARD);
    CHECK(std::string(glp_last_error()).find("n <= 6") != std::string::npos);
    glp_graphon_free(w);
}

TEST_CASE("distances and densities through the C ABI") {
    glp_graphon *u = nullptr, *v = nullptr;
    REQUIRE(glp_graphon_from_json(kTwoPart, &u) == GLP_OK);
    REQUIRE(glp_graphon_constant(0.0, &v) == GLP_OK);
    double d = -1.0;
    CHECK(glp_cut_norm(u, v, &d) == GLP_OK);
    CHECK(d == doctest::Approx(0.5).epsilon(1e-15));

    double lb = -1.0;
    CHECK(glp_cut_norm_lb(u, v, 8, 5, &lb) == GLP_OK);
    CHECK(lb <= d + 1e-15);

    glp_graph* k2 = nullptr;
    REQUIRE(glp_graph_from_edge_list("2\n0 1\n", &k2) == GLP_OK);
    double t = 0.0;
    CHECK(glp_hom_density(k2, u, &t) == GLP_OK);
    CHECK(t == doctest::Approx(0.5).epsilon(1e-15));

    glp_dist* dist = nullptr;
    REQUIRE(glp_exact_distribution(u, 3, &dist) == GLP_OK);
    double total = 0.0;
    CHECK(glp_dist_total(dist, &total) == GLP_OK);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    char* csv = nullptr;
    REQUIRE(glp_dist_to_csv(dist, &csv) == GLP_OK);
    CHECK(take(csv).find("graph,probability") == 0);

    double mass = 0.0, count = 0.0;
    CHECK(glp_ball_mass(dist, v, 1.0, &mass, &count) == GLP_OK);
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    // A 2-part center cannot align with 3 equal parts.
    CHECK(glp_ball_mass(dist, u, 1.0, &mass, &count) == GLP_ERR_GUARD);

    glp_dist_free(dist);
    glp_graph_free(k2);
    glp_graphon_free(u);
    glp_graphon_free(v);
}

TEST_CASE("rate functions through the C ABI") {
    double h = -1.0;
    CHECK(glp_rel_entropy(0.5, 0.5, &h) == GLP_OK);
    CHECK(h == 0.0);
    CHECK(glp_rel_entropy(0.1, 0.0, &h) == GLP_OK);
    CHECK(std::isinf(h));
    CHECK(glp_rel_entropy(1.5, 0.5, &h) == GLP_ERR_CONFIG);

    glp_graphon* w = nullptr;
    REQUIRE(glp_graphon_from_json(kTwoPart, &w) == GLP_OK);
    double p[4] = {0.0, 1.0, 1.0, 0.0};
    double alpha[2] = {1.0, 1.0};
    double val = -1.0;
    char* wit = nullptr;
    CHECK(glp_j_alpha_p(w, alpha, 2, p, 0, 8, 5, &val, &wit) == GLP_OK);
    CHECK(val <= 1e-12);
    std::string witness = take(wit);
    CHECK(witness.find("\"method\"") != std::string::npos);
    CHECK(witness.find("\"plan\"") != std::string::npos);

    double r = -1.0;
    CHECK(glp_r_p(w, p, 2, 16, 4, 5, &r, nullptr) == GLP_OK);
    CHECK(r <= 1e-12);

    double kw = -1.0;
    CHECK(glp_kw(w, w, &kw, nullptr) == GLP_OK);
    CHECK(kw == 0.0);

    int member = 0;
    CHECK(glp_rn_member(w, w, &member) == GLP_OK);
    CHECK(member == 1);
    glp_graphon_free(w);
}

TEST_CASE("sampling determinism through the C ABI") {
    glp_graphon* w = nullptr;
    REQUIRE(glp_graphon_from_json(kHalf, &w) == GLP_OK);
    glp_graph *a = nullptr, *b = nullptr;
    REQUIRE(glp_sample_wrandom(w, 10, 77, &a) == GLP_OK);
    REQUIRE(glp_sample_wrandom(w, 10, 77, &b) == GLP_OK);
    char *ta = nullptr, *tb = nullptr;
    CHECK(glp_graph_to_edge_list(a, &ta) == GLP_OK);
    CHECK(glp_graph_to_edge_list(b, &tb) == GLP_OK);
    CHECK(take(ta) == take(tb));

    // The coupled rounded sample equals the plain sampler bit for bit.
    glp_wgraph* h = nullptr;
    glp_graph* g = nullptr;
    REQUIRE(glp_couple_weighted_rounded(w, 10, 77, &h, &g) == GLP_OK);
    char *tg = nullptr, *tc = nullptr;
    CHECK(glp_graph_to_edge_list(g, &tg) == GLP_OK);
    CHECK(glp_graph_to_edge_list(a, &tc) == GLP_OK);
    CHECK(take(tg) == take(tc));

    glp_wgraph_free(h);
    glp_graph_free(g);
    glp_graph_free(a);
    glp_graph_free(b);
    glp_graphon_free(w);
}

TEST_CASE("verification experiments through the C ABI") {
    char *csv = nullptr, *side = nullptr;
    const char* cfg =
        "{\"beta\":[0.3,0.7],\"target\":[0.5,0.5],\"schedule\":[10,100,1000]}";
    REQUIRE(glp_verify_sanov(cfg, &csv, &side) == GLP_OK);
    std::string body = take(csv);
    CHECK(body.find("rate_empirical") != std::string::npos);
    std::string sidecar = take(side);
    CHECK(sidecar.find("\"environment\"") != std::string::npos);

    CHECK(glp_verify_sanov("{\"beta\":[0.3,0.7]}", &csv, &side) == GLP_ERR_CONFIG);

    const char* lip = "{\"trials\":20,\"m\":4,\"k\":2,\"seed\":9}";
    REQUIRE(glp_verify_lipschitz(lip, &csv, &side) == GLP_OK);
    take(csv);
    take(side);
}
