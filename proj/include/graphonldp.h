/*
 * graphon-ldp: step-graphon distances, densities, rate functions, samplers
 * and verification experiments behind a C ABI.
 *
 * Conventions:
 *   - Every function returns a glp_status; outputs go through out-parameters.
 *   - Handles are opaque; release them with the matching *_free call.
 *   - Strings returned through char** are owned by the caller; release them
 *     with glp_string_free.
 *   - Rate values are doubles; +infinity is the IEEE infinity.
 *   - On error, glp_last_error() returns a message naming the violated
 *     precondition (thread-local storage).
 */
#ifndef GRAPHONLDP_H
#define GRAPHONLDP_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum glp_status {
    GLP_OK = 0,
    GLP_ERR_CONFIG = 2,   /* invalid input or configuration */
    GLP_ERR_GUARD = 3,    /* a size guard refused the computation */
    GLP_ERR_INTERNAL = 4  /* internal assertion failure */
} glp_status;

typedef struct glp_graphon glp_graphon;   /* step graphon */
typedef struct glp_colored glp_colored;   /* colored step graphon */
typedef struct glp_graph glp_graph;       /* simple graph */
typedef struct glp_wgraph glp_wgraph;     /* weighted graph */
typedef struct glp_dist glp_dist;         /* exact graph distribution */

const char* glp_version(void);
const char* glp_last_error(void);
void glp_string_free(char* s);

/* Global numeric policy and worker cap. */
glp_status glp_set_tolerance(double abs_tol);
glp_status glp_set_threads(int threads);

/* ---- handles and file formats -------------------------------------- */

glp_status glp_graphon_from_json(const char* json, glp_graphon** out);
glp_status glp_graphon_to_json(const glp_graphon* g, char** out);
glp_status glp_graphon_constant(double p, glp_graphon** out);
glp_status glp_graphon_parts(const glp_graphon* g, size_t* out);
void glp_graphon_free(glp_graphon* g);

glp_status glp_colored_from_json(const char* json, glp_colored** out);
glp_status glp_colored_to_json(const glp_colored* g, char** out);
void glp_colored_free(glp_colored* g);

glp_status glp_graph_from_edge_list(const char* text, glp_graph** out);
glp_status glp_graph_to_edge_list(const glp_graph* g, char** out);
glp_status glp_graph_vertices(const glp_graph* g, int* out);
void glp_graph_free(glp_graph* g);

glp_status glp_wgraph_from_json(const char* json, glp_wgraph** out);
glp_status glp_wgraph_to_json(const glp_wgraph* h, char** out);
void glp_wgraph_free(glp_wgraph* h);

void glp_dist_free(glp_dist* d);
glp_status glp_dist_to_csv(const glp_dist* d, char** out);
glp_status glp_dist_total(const glp_dist* d, double* out);

/* ---- core graphon operations ---------------------------------------- */

glp_status glp_graph_to_graphon(const glp_graph* g, glp_graphon** out);
glp_status glp_weighted_to_graphon(const glp_wgraph* h, glp_graphon** out);
glp_status glp_reweight(const glp_graphon* w, const double* mu, size_t len, glp_graphon** out);
/* Also emits the canonical coupling between input and output parts. */
glp_status glp_stretch(const glp_graphon* u, double s, glp_graphon** out, char** plan_json);
glp_status glp_canonicalize(const glp_graphon* g, glp_graphon** out);
glp_status glp_blowup(const glp_graph* f, int m, glp_graph** out);

/* ---- metrics --------------------------------------------------------- */

glp_status glp_cut_norm(const glp_graphon* u, const glp_graphon* v, double* out);
glp_status glp_cut_norm_lb(const glp_graphon* u, const glp_graphon* v, int restarts,
                           uint64_t seed, double* out);
glp_status glp_cut_dist_labeled(const glp_graphon* u, const glp_graphon* v, double* out);
/* init_plan_json may be NULL. witness_json receives the best plan. */
glp_status glp_cut_dist_upper(const glp_graphon* u, const glp_graphon* v,
                              const char* init_plan_json, int iters, int restarts,
                              uint64_t seed, double* out, char** witness_json);
/* witness_edge_list receives the density witness graph. */
glp_status glp_cut_dist_lower(const glp_graphon* u, const glp_graphon* v, int max_size,
                              double* out, char** witness_edge_list);
glp_status glp_colored_cut_norm(const glp_colored* x, const glp_colored* y, double* out);
glp_status glp_colored_cut_dist_labeled(const glp_colored* x, const glp_colored* y, double* out);

/* ---- densities ------------------------------------------------------- */

glp_status glp_hom_density(const glp_graph* f, const glp_graphon* w, double* out);
glp_status glp_induced_density(const glp_graph* f, const glp_graphon* w, double* out);
glp_status glp_exact_distribution(const glp_graphon* w, int n, glp_dist** out);
/* p is a row-major k*k matrix. */
glp_status glp_sbm_exact_distribution(const int* a, size_t k, const double* p, glp_dist** out);
glp_status glp_ball_mass(const glp_dist* d, const glp_graphon* center, double radius,
                         double* mass, double* count);

/* ---- rate functions --------------------------------------------------- */

glp_status glp_rel_entropy(double r, double p, double* out);
glp_status glp_ip(const glp_graphon* u, double p, double* out);
glp_status glp_ikp(const glp_colored* x, const double* p, size_t k, double* out);
glp_status glp_gamma_forget(const glp_colored* x, glp_graphon** out);
/* i, j are 1-based color indices. */
glp_status glp_gamma_patch(const glp_colored* x, int i, int j, const double* p, size_t k,
                           glp_graphon** out);
/* mode: 0 auto, 1 exact, 2 heuristic.  witness_json receives the full result. */
glp_status glp_j_alpha_p(const glp_graphon* u, const double* alpha, size_t k, const double* p,
                         int mode, int restarts, uint64_t seed, double* out, char** witness_json);
glp_status glp_r_p(const glp_graphon* u, const double* p, size_t k, int grid, int restarts,
                   uint64_t seed, double* out, char** witness_json);
glp_status glp_kw(const glp_graphon* w, const glp_graphon* u, double* out, char** witness_json);
glp_status glp_rn_member(const glp_graphon* w, const glp_graphon* u, int* out);
glp_status glp_forb_consistent(const glp_graphon* w, const glp_graphon* u, int max_size, int* out);
glp_status glp_discrete_rel_entropy(const long* counts, size_t k, long n, const double* beta,
                                    double* out);

/* ---- sampling ---------------------------------------------------------- */

glp_status glp_sample_wrandom(const glp_graphon* w, int n, uint64_t seed, glp_graph** out);
glp_status glp_sample_sbm(const int* a, size_t k, const double* p, uint64_t seed, glp_graph** out);
glp_status glp_sample_weighted(const glp_graphon* w, int n, uint64_t seed, glp_wgraph** out);
glp_status glp_round_weighted(const glp_wgraph* h, uint64_t seed, glp_graph** out);
/* map_json receives matched vertex pairs and the certified distance bound. */
glp_status glp_couple_sbm(const int* a, const int* b, size_t k, const double* p, double eps,
                          uint64_t seed, glp_graph** g_out, glp_graph** h_out, char** map_json);
glp_status glp_couple_weighted_rounded(const glp_graphon* w, int n, uint64_t seed,
                                       glp_wgraph** h_out, glp_graph** g_out);

/* ---- verification experiments ------------------------------------------ */
/* Each takes a JSON config string and yields the report CSV plus a JSON
 * sidecar (config echo, environment, witnesses). */

glp_status glp_verify_sanov(const char* config_json, char** csv, char** sidecar_json);
glp_status glp_verify_speed2(const char* config_json, char** csv, char** sidecar_json);
glp_status glp_verify_expeq(const char* config_json, char** csv, char** sidecar_json);
glp_status glp_verify_lipschitz(const char* config_json, char** csv, char** sidecar_json);
glp_status glp_verify_stretch(const char* config_json, char** csv, char** sidecar_json);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GRAPHONLDP_H */
