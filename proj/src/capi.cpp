#include "graphonldp.h"

#include <cstring>
#include <new>
#include <optional>
#include <string>

#include "colored.hpp"
#include "cutnorm.hpp"
#include "densities.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "harness.hpp"
#include "json_io.hpp"
#include "policy.hpp"
#include "rates.hpp"
#include "sampling.hpp"
#include "step_graphon.hpp"

using namespace gldp;

struct glp_graphon {
    StepGraphon g;
};
struct glp_colored {
    ColoredStepGraphon g;
};
struct glp_graph {
    SimpleGraph g;
};
struct glp_wgraph {
    WeightedGraph g;
};
struct glp_dist {
    GraphDistribution d;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <typename Fn>
glp_status wrap(Fn&& fn) {
    try {
        fn();
        return GLP_OK;
    } catch (const config_error& e) {
        g_last_error = e.what();
        return GLP_ERR_CONFIG;
    } catch (const guard_error& e) {
        g_last_error = e.what();
        return GLP_ERR_GUARD;
    } catch (const internal_error& e) {
        g_last_error = e.what();
        return GLP_ERR_INTERNAL;
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return GLP_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GLP_ERR_CONFIG;
    }
}

Matrix matrix_from_raw(const double* p, std::size_t k) {
    if (!p) throw config_error("null matrix pointer");
    Matrix m(k);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) m(i, j) = p[i * k + j];
    return m;
}

SolveOptions solve_options(int mode, int restarts, std::uint64_t seed, int grid = 32) {
    SolveOptions o;
    switch (mode) {
        case 0: o.mode = SolveMode::Auto; break;
        case 1: o.mode = SolveMode::Exact; break;
        case 2: o.mode = SolveMode::Heuristic; break;
        default: throw config_error("mode must be 0 (auto), 1 (exact) or 2 (heuristic)");
    }
    if (restarts > 0) o.restarts = restarts;
    o.seed = seed;
    if (grid > 0) o.grid = grid;
    return o;
}

} // namespace

extern "C" {

const char* glp_version(void) { return "graphon-ldp 0.1.0"; }

const char* glp_last_error(void) { return g_last_error.c_str(); }

void glp_string_free(char* s) { delete[] s; }

glp_status glp_set_tolerance(double abs_tol) {
    return wrap([&] {
        if (!(abs_tol > 0.0)) throw config_error("tolerance must be positive");
        policy().abs_tol = abs_tol;
    });
}

glp_status glp_set_threads(int threads) {
    return wrap([&] { policy().threads = threads; });
}

glp_status glp_graphon_from_json(const char* json, glp_graphon** out) {
    return wrap([&] {
        if (!json || !out) throw config_error("null argument");
        *out = new glp_graphon{graphon_from_json(json)};
    });
}

glp_status glp_graphon_to_json(const glp_graphon* g, char** out) {
    return wrap([&] {
        if (!g || !out) throw config_error("null argument");
        *out = dup_string(graphon_to_json(g->g));
    });
}

glp_status glp_graphon_constant(double p, glp_graphon** out) {
    return wrap([&] {
        if (!out) throw config_error("null argument");
        *out = new glp_graphon{StepGraphon::constant(p)};
    });
}

glp_status glp_graphon_parts(const glp_graphon* g, size_t* out) {
    return wrap([&] {
        if (!g || !out) throw config_error("null argument");
        *out = g->g.parts();
    });
}

void glp_graphon_free(glp_graphon* g) { delete g; }

glp_status glp_colored_from_json(const char* json, glp_colored** out) {
    return wrap([&] {
        if (!json || !out) throw config_error("null argument");
        *out = new glp_colored{colored_from_json(json)};
    });
}

glp_status glp_colored_to_json(const glp_colored* g, char** out) {
    return wrap([&] {
        if (!g || !out) throw config_error("null argument");
        *out = dup_string(colored_to_json(g->g));
    });
}

void glp_colored_free(glp_colored* g) { delete g; }

glp_status glp_graph_from_edge_list(const char* text, glp_graph** out) {
    return wrap([&] {
        if (!text || !out) throw config_error("null argument");
        *out = new glp_graph{parse_edge_list(text)};
    });
}

glp_status glp_graph_to_edge_list(const glp_graph* g, char** out) {
    return wrap([&] {
        if (!g || !out) throw config_error("null argument");
        *out = dup_string(format_edge_list(g->g));
    });
}

glp_status glp_graph_vertices(const glp_graph* g, int* out) {
    return wrap([&] {
        if (!g || !out) throw config_error("null argument");
        *out = g->g.n();
    });
}

void glp_graph_free(glp_graph* g) { delete g; }

glp_status glp_wgraph_from_json(const char* json, glp_wgraph** out) {
    return wrap([&] {
        if (!json || !out) throw config_error("null argument");
        *out = new glp_wgraph{wgraph_from_json(json)};
    });
}

glp_status glp_wgraph_to_json(const glp_wgraph* h, char** out) {
    return wrap([&] {
        if (!h || !out) throw config_error("null argument");
        *out = dup_string(wgraph_to_json(h->g));
    });
}

void glp_wgraph_free(glp_wgraph* h) { delete h; }

void glp_dist_free(glp_dist* d) { delete d; }

glp_status glp_dist_to_csv(const glp_dist* d, char** out) {
    return wrap([&] {
        if (!d || !out) throw config_error("null argument");
        *out = dup_string(distribution_to_csv(d->d));
    });
}

glp_status glp_dist_total(const glp_dist* d, double* out) {
    return wrap([&] {
        if (!d || !out) throw config_error("null argument");
        *out = d->d.total();
    });
}

glp_status glp_graph_to_graphon(const glp_graph* g, glp_graphon** out) {
    return wrap([&] {
        if (!g || !out) throw config_error("null argument");
        *out = new glp_graphon{graph_to_graphon(g->g)};
    });
}

glp_status glp_weighted_to_graphon(const glp_wgraph* h, glp_graphon** out) {
    return wrap([&] {
        if (!h || !out) throw config_error("null argument");
        *out = new glp_graphon{weighted_to_graphon(h->g)};
    });
}

glp_status glp_reweight(const glp_graphon* w, const double* mu, size_t len, glp_graphon** out) {
    return wrap([&] {
        if (!w || !mu || !out) throw config_error("null argument");
        *out = new glp_graphon{reweight(w->g, std::vector<double>(mu, mu + len))};
    });
}

glp_status glp_stretch(const glp_graphon* u, double s, glp_graphon** out, char** plan_json) {
    return wrap([&] {
        if (!u || !out) throw config_error("null argument");
        StretchResult r = stretch(u->g, s);
        if (plan_json) {
            TransportPlan p;
            p.row_marginals = u->g.measures();
            p.col_marginals = r.graphon.measures();
            p.c = r.plan;
            *plan_json = dup_string(plan_to_json(p).dump());
        }
        *out = new glp_graphon{std::move(r.graphon)};
    });
}

glp_status glp_canonicalize(const glp_graphon* g, glp_graphon** out) {
    return wrap([&] {
        if (!g || !out) throw config_error("null argument");
        *out = new glp_graphon{g->g.canonical()};
    });
}

glp_status glp_blowup(const glp_graph* f, int m, glp_graph** out) {
    return wrap([&] {
        if (!f || !out) throw config_error("null argument");
        *out = new glp_graph{blowup(f->g, m)};
    });
}

glp_status glp_cut_norm(const glp_graphon* u, const glp_graphon* v, double* out) {
    return wrap([&] {
        if (!u || !v || !out) throw config_error("null argument");
        *out = cut_norm_diff(u->g, v->g);
    });
}

glp_status glp_cut_norm_lb(const glp_graphon* u, const glp_graphon* v, int restarts,
                           uint64_t seed, double* out) {
    return wrap([&] {
        if (!u || !v || !out) throw config_error("null argument");
        *out = cut_norm_diff_approx(u->g, v->g, restarts, seed);
    });
}

glp_status glp_cut_dist_labeled(const glp_graphon* u, const glp_graphon* v, double* out) {
    return wrap([&] {
        if (!u || !v || !out) throw config_error("null argument");
        *out = cut_dist_labeled(u->g, v->g);
    });
}

glp_status glp_cut_dist_upper(const glp_graphon* u, const glp_graphon* v,
                              const char* init_plan_json, int iters, int restarts,
                              uint64_t seed, double* out, char** witness_json) {
    return wrap([&] {
        if (!u || !v || !out) throw config_error("null argument");
        std::optional<TransportPlan> init;
        if (init_plan_json) init = plan_from_json(init_plan_json);
        UpperResult r = cut_dist_upper(u->g, v->g, init, iters, restarts, seed);
        *out = r.value;
        if (witness_json) *witness_json = dup_string(plan_to_json(r.plan).dump());
    });
}

glp_status glp_cut_dist_lower(const glp_graphon* u, const glp_graphon* v, int max_size,
                              double* out, char** witness_edge_list) {
    return wrap([&] {
        if (!u || !v || !out) throw config_error("null argument");
        LowerResult r = cut_dist_lower(u->g, v->g, max_size);
        *out = r.value;
        if (witness_edge_list) *witness_edge_list = dup_string(format_edge_list(r.witness));
    });
}

glp_status glp_colored_cut_norm(const glp_colored* x, const glp_colored* y, double* out) {
    return wrap([&] {
        if (!x || !y || !out) throw config_error("null argument");
        *out = colored_cut_norm(x->g, y->g);
    });
}

glp_status glp_colored_cut_dist_labeled(const glp_colored* x, const glp_colored* y, double* out) {
    return wrap([&] {
        if (!x || !y || !out) throw config_error("null argument");
        *out = colored_cut_dist_labeled(x->g, y->g);
    });
}

glp_status glp_hom_density(const glp_graph* f, const glp_graphon* w, double* out) {
    return wrap([&] {
        if (!f || !w || !out) throw config_error("null argument");
        *out = hom_density(f->g, w->g);
    });
}

glp_status glp_induced_density(const glp_graph* f, const glp_graphon* w, double* out) {
    return wrap([&] {
        if (!f || !w || !out) throw config_error("null argument");
        *out = induced_density(f->g, w->g);
    });
}

glp_status glp_exact_distribution(const glp_graphon* w, int n, glp_dist** out) {
    return wrap([&] {
        if (!w || !out) throw config_error("null argument");
        *out = new glp_dist{exact_distribution(w->g, n)};
    });
}

glp_status glp_sbm_exact_distribution(const int* a, size_t k, const double* p, glp_dist** out) {
    return wrap([&] {
        if (!a || !p || !out) throw config_error("null argument");
        *out = new glp_dist{sbm_exact_distribution(std::vector<int>(a, a + k),
                                                   matrix_from_raw(p, k))};
    });
}

glp_status glp_ball_mass(const glp_dist* d, const glp_graphon* center, double radius,
                         double* mass, double* count) {
    return wrap([&] {
        if (!d || !center || !mass) throw config_error("null argument");
        long c = 0;
        *mass = ball_mass(d->d, center->g, radius, &c);
        if (count) *count = static_cast<double>(c);
    });
}

glp_status glp_rel_entropy(double r, double p, double* out) {
    return wrap([&] {
        if (!out) throw config_error("null argument");
        *out = rel_entropy(r, p);
    });
}

glp_status glp_ip(const glp_graphon* u, double p, double* out) {
    return wrap([&] {
        if (!u || !out) throw config_error("null argument");
        *out = I_p(u->g, p);
    });
}

glp_status glp_ikp(const glp_colored* x, const double* p, size_t k, double* out) {
    return wrap([&] {
        if (!x || !p || !out) throw config_error("null argument");
        *out = I_k_p(x->g, matrix_from_raw(p, k));
    });
}

glp_status glp_gamma_forget(const glp_colored* x, glp_graphon** out) {
    return wrap([&] {
        if (!x || !out) throw config_error("null argument");
        *out = new glp_graphon{gamma_forget(x->g)};
    });
}

glp_status glp_gamma_patch(const glp_colored* x, int i, int j, const double* p, size_t k,
                           glp_graphon** out) {
    return wrap([&] {
        if (!x || !p || !out) throw config_error("null argument");
        *out = new glp_graphon{gamma_patch(x->g, i - 1, j - 1, matrix_from_raw(p, k))};
    });
}

glp_status glp_j_alpha_p(const glp_graphon* u, const double* alpha, size_t k, const double* p,
                         int mode, int restarts, uint64_t seed, double* out, char** witness_json) {
    return wrap([&] {
        if (!u || !alpha || !p || !out) throw config_error("null argument");
        RateResult r = j_alpha_p(u->g, std::vector<double>(alpha, alpha + k),
                                 matrix_from_raw(p, k), solve_options(mode, restarts, seed));
        *out = r.value;
        if (witness_json) *witness_json = dup_string(rate_result_to_json(r).dump());
    });
}

glp_status glp_r_p(const glp_graphon* u, const double* p, size_t k, int grid, int restarts,
                   uint64_t seed, double* out, char** witness_json) {
    return wrap([&] {
        if (!u || !p || !out) throw config_error("null argument");
        RateResult r = r_p(u->g, matrix_from_raw(p, k), solve_options(0, restarts, seed, grid));
        *out = r.value;
        if (witness_json) *witness_json = dup_string(rate_result_to_json(r).dump());
    });
}

glp_status glp_kw(const glp_graphon* w, const glp_graphon* u, double* out, char** witness_json) {
    return wrap([&] {
        if (!w || !u || !out) throw config_error("null argument");
        RateResult r = k_w_step(w->g, u->g);
        *out = r.value;
        if (witness_json) *witness_json = dup_string(rate_result_to_json(r).dump());
    });
}

glp_status glp_rn_member(const glp_graphon* w, const glp_graphon* u, int* out) {
    return wrap([&] {
        if (!w || !u || !out) throw config_error("null argument");
        *out = rn_member(w->g, u->g) ? 1 : 0;
    });
}

glp_status glp_forb_consistent(const glp_graphon* w, const glp_graphon* u, int max_size,
                               int* out) {
    return wrap([&] {
        if (!w || !u || !out) throw config_error("null argument");
        *out = forb_consistent(w->g, u->g, max_size) ? 1 : 0;
    });
}

glp_status glp_discrete_rel_entropy(const long* counts, size_t k, long n, const double* beta,
                                    double* out) {
    return wrap([&] {
        if (!counts || !beta || !out) throw config_error("null argument");
        *out = discrete_rel_entropy(std::vector<long>(counts, counts + k), n,
                                    std::vector<double>(beta, beta + k));
    });
}

glp_status glp_sample_wrandom(const glp_graphon* w, int n, uint64_t seed, glp_graph** out) {
    return wrap([&] {
        if (!w || !out) throw config_error("null argument");
        *out = new glp_graph{sample_wrandom(w->g, n, SeedSpec{seed})};
    });
}

glp_status glp_sample_sbm(const int* a, size_t k, const double* p, uint64_t seed,
                          glp_graph** out) {
    return wrap([&] {
        if (!a || !p || !out) throw config_error("null argument");
        *out = new glp_graph{sample_sbm(std::vector<int>(a, a + k), matrix_from_raw(p, k),
                                        SeedSpec{seed})};
    });
}

glp_status glp_sample_weighted(const glp_graphon* w, int n, uint64_t seed, glp_wgraph** out) {
    return wrap([&] {
        if (!w || !out) throw config_error("null argument");
        *out = new glp_wgraph{sample_weighted(w->g, n, SeedSpec{seed})};
    });
}

glp_status glp_round_weighted(const glp_wgraph* h, uint64_t seed, glp_graph** out) {
    return wrap([&] {
        if (!h || !out) throw config_error("null argument");
        *out = new glp_graph{round_weighted(h->g, SeedSpec{seed})};
    });
}

glp_status glp_couple_sbm(const int* a, const int* b, size_t k, const double* p, double eps,
                          uint64_t seed, glp_graph** g_out, glp_graph** h_out, char** map_json) {
    return wrap([&] {
        if (!a || !b || !p || !g_out || !h_out) throw config_error("null argument");
        SbmCouple c = couple_sbm(std::vector<int>(a, a + k), std::vector<int>(b, b + k),
                                 matrix_from_raw(p, k), eps, SeedSpec{seed});
        if (map_json) {
            ojson j;
            ojson pairs = ojson::array();
            for (auto [x, y] : c.matched) pairs.push_back(ojson::array({x, y}));
            j["matched"] = std::move(pairs);
            j["certified_upper"] = json_number(c.certified_upper());
            *map_json = dup_string(j.dump());
        }
        *g_out = new glp_graph{std::move(c.g)};
        *h_out = new glp_graph{std::move(c.h)};
    });
}

glp_status glp_couple_weighted_rounded(const glp_graphon* w, int n, uint64_t seed,
                                       glp_wgraph** h_out, glp_graph** g_out) {
    return wrap([&] {
        if (!w || !h_out || !g_out) throw config_error("null argument");
        auto [h, g] = couple_weighted_rounded(w->g, n, SeedSpec{seed});
        *h_out = new glp_wgraph{std::move(h)};
        *g_out = new glp_graph{std::move(g)};
    });
}

namespace {

ojson parse_config(const char* config_json) {
    if (!config_json) throw config_error("null config");
    ojson j = ojson::parse(config_json, nullptr, false);
    if (j.is_discarded()) throw config_error("verify: invalid config JSON");
    return j;
}

glp_status emit_report(const Report& rep, char** csv, char** sidecar_json) {
    if (csv) *csv = dup_string(rep.to_csv());
    if (sidecar_json) *sidecar_json = dup_string(rep.to_json().dump(2));
    return GLP_OK;
}

} // namespace

glp_status glp_verify_sanov(const char* config_json, char** csv, char** sidecar_json) {
    return wrap([&] {
        ojson c = parse_config(config_json);
        Report rep = sanov_experiment(c.at("beta").get<std::vector<double>>(),
                                      c.at("target").get<std::vector<double>>(),
                                      c.at("schedule").get<std::vector<long>>());
        emit_report(rep, csv, sidecar_json);
    });
}

glp_status glp_verify_speed2(const char* config_json, char** csv, char** sidecar_json) {
    return wrap([&] {
        ojson c = parse_config(config_json);
        StepGraphon w = graphon_from_json(c.at("graphon").dump());
        StepGraphon center = graphon_from_json(c.at("center").dump());
        SolveOptions opts;
        if (c.contains("grid")) opts.grid = c["grid"].get<int>();
        if (c.contains("restarts")) opts.restarts = c["restarts"].get<int>();
        if (c.contains("seed")) opts.seed = c["seed"].get<std::uint64_t>();
        Report rep = speed2_experiment(w, center, c.at("radius").get<double>(),
                                       c.at("schedule").get<std::vector<int>>(), opts);
        emit_report(rep, csv, sidecar_json);
    });
}

glp_status glp_verify_expeq(const char* config_json, char** csv, char** sidecar_json) {
    return wrap([&] {
        ojson c = parse_config(config_json);
        StepGraphon w = graphon_from_json(c.at("graphon").dump());
        Report rep = expeq_experiment(w, c.at("schedule").get<std::vector<int>>(),
                                      c.at("alpha").get<double>(), c.at("trials").get<int>(),
                                      c.value("seed", std::uint64_t{0x5eed}));
        emit_report(rep, csv, sidecar_json);
    });
}

glp_status glp_verify_lipschitz(const char* config_json, char** csv, char** sidecar_json) {
    return wrap([&] {
        ojson c = parse_config(config_json);
        Report rep = lipschitz_experiment(c.at("trials").get<int>(), c.at("m").get<int>(),
                                          c.at("k").get<int>(),
                                          c.value("seed", std::uint64_t{0x5eed}));
        emit_report(rep, csv, sidecar_json);
    });
}

glp_status glp_verify_stretch(const char* config_json, char** csv, char** sidecar_json) {
    return wrap([&] {
        ojson c = parse_config(config_json);
        Report rep = delete_stretch_experiment(c.at("trials").get<int>(),
                                               c.at("s_list").get<std::vector<double>>(),
                                               c.value("seed", std::uint64_t{0x5eed}));
        emit_report(rep, csv, sidecar_json);
    });
}

} // extern "C"
