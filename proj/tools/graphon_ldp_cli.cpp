// Command-line front end for the graphon-ldp shared library.  All computation
// goes through the C API in graphonldp.h; this file only parses arguments,
// reads and writes files, and formats output.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "graphonldp.h"

using ojson = nlohmann::ordered_json;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240801ULL; // fixed, never time-based

struct CliError {
    int code;
    std::string message;
};

[[noreturn]] void fail(int code, const std::string& msg) { throw CliError{code, msg}; }

void check(glp_status st) {
    if (st != GLP_OK) fail(static_cast<int>(st), glp_last_error());
}

std::string take_string(char* s) {
    std::string out = s ? s : "";
    glp_string_free(s);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(2, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            fail(2, "cannot parse number: " + tok);
        }
    }
    if (out.empty()) fail(2, "empty number list");
    return out;
}

std::vector<int> parse_ints(const std::string& s) {
    std::vector<int> out;
    for (double d : parse_doubles(s)) out.push_back(static_cast<int>(d));
    return out;
}

// Row-major symmetric matrix from "a,b;b,c".
std::vector<double> parse_matrix(const std::string& s, std::size_t& k) {
    std::vector<std::vector<double>> rows;
    std::stringstream ss(s);
    std::string row;
    while (std::getline(ss, row, ';')) rows.push_back(parse_doubles(row));
    k = rows.size();
    std::vector<double> flat;
    for (const auto& r : rows) {
        if (r.size() != k) fail(2, "matrix must be square: " + s);
        flat.insert(flat.end(), r.begin(), r.end());
    }
    return flat;
}

std::string fmt(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == std::floor(x) && std::fabs(x) < 1e15)
        return std::to_string(static_cast<long long>(x));
    return nlohmann::json(x).dump();
}

// ---------------------------------------------------------------------------
// Owned handles.

struct Graphon {
    glp_graphon* h = nullptr;
    ~Graphon() { glp_graphon_free(h); }
};
struct Colored {
    glp_colored* h = nullptr;
    ~Colored() { glp_colored_free(h); }
};
struct Graph {
    glp_graph* h = nullptr;
    ~Graph() { glp_graph_free(h); }
};
struct WGraph {
    glp_wgraph* h = nullptr;
    ~WGraph() { glp_wgraph_free(h); }
};
struct Dist {
    glp_dist* h = nullptr;
    ~Dist() { glp_dist_free(h); }
};

void load_graphon(const std::string& path, Graphon& g) {
    // Edge-list inputs are embedded through f^G.
    if (path.size() > 6 && path.substr(path.size() - 6) == ".edges") {
        Graph gr;
        check(glp_graph_from_edge_list(read_file(path).c_str(), &gr.h));
        check(glp_graph_to_graphon(gr.h, &g.h));
        return;
    }
    check(glp_graphon_from_json(read_file(path).c_str(), &g.h));
}

// ---------------------------------------------------------------------------
// Config file handling: flat dotted keys, flags take precedence.

struct App {
    CLI::App cli{"step-graphon distances, densities, rate functions and samplers"};
    ojson config = ojson::object();
    std::vector<std::string> known_keys;
    bool dry_run = false;
    std::string out_path;
    std::string format; // "", "csv" or "json"
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;
    double tol = 0.0;

    // Applies a config value when the flag was not given on the command line;
    // required options may come from either source.
    template <typename T>
    void bind(CLI::Option* opt, const std::string& key, T& target, bool required = false) {
        known_keys.push_back(key);
        bindings.push_back([opt, key, &target, this]() {
            if (opt->count() == 0 && config.contains(key)) target = config[key].get<T>();
        });
        if (required) required_opts.emplace_back(opt, key);
    }
    void apply_config(const std::string& active_prefix) {
        for (const auto& key : config.items()) {
            bool known = false;
            for (const auto& k : known_keys) known = known || k == key.key();
            if (!known) fail(2, "unknown config key: " + key.key());
        }
        for (auto& b : bindings) b();
        for (const auto& [opt, key] : required_opts) {
            if (key.rfind(active_prefix, 0) != 0) continue;
            if (opt->count() == 0 && !config.contains(key))
                fail(2, "missing required option " + opt->get_name() +
                            " (set it on the command line or as \"" + key + "\" in the config)");
        }
    }
    std::vector<std::function<void()>> bindings;
    std::vector<std::pair<CLI::Option*, std::string>> required_opts;
};

void emit(const App& app, const std::string& text) {
    if (!app.out_path.empty()) {
        std::ofstream out(app.out_path, std::ios::binary);
        if (!out) fail(2, "cannot write file: " + app.out_path);
        out << text;
    } else {
        std::cout << text;
    }
}

// value + optional witness, honoring --format.
void emit_value(const App& app, double value, const ojson& witness = ojson()) {
    if (app.format == "json") {
        ojson j;
        j["value"] = std::isinf(value) ? ojson(value > 0 ? "inf" : "-inf") : ojson(value);
        if (!witness.is_null()) j["witness"] = witness;
        emit(app, j.dump(2) + "\n");
    } else {
        emit(app, fmt(value) + "\n");
    }
}

void emit_report(const App& app, const std::string& csv, const std::string& sidecar) {
    if (!app.out_path.empty()) {
        std::ofstream out(app.out_path, std::ios::binary);
        if (!out) fail(2, "cannot write file: " + app.out_path);
        out << csv;
        std::ofstream side(app.out_path + ".json", std::ios::binary);
        side << sidecar << "\n";
        return;
    }
    if (app.format == "json")
        std::cout << sidecar << "\n";
    else
        std::cout << csv;
}

bool handle_dry_run(const App& app, const std::string& command, const ojson& params) {
    if (!app.dry_run) return false;
    ojson j;
    j["command"] = command;
    j["params"] = params;
    j["dry_run"] = true;
    std::cout << j.dump(2) << "\n";
    return true;
}

ojson parse_witness(const std::string& json) {
    ojson j = ojson::parse(json, nullptr, false);
    return j.is_discarded() ? ojson(json) : j;
}

} // namespace

int main(int argc, char** argv) {
    App app;
    app.cli.require_subcommand(1);

    // Pre-scan for --config so its values can act as defaults.
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream in(argv[i + 1], std::ios::binary);
            if (!in) {
                std::cerr << "error: cannot open config file: " << argv[i + 1] << "\n";
                return 2;
            }
            app.config = ojson::parse(in, nullptr, false);
            if (app.config.is_discarded()) {
                std::cerr << "error: invalid config JSON\n";
                return 2;
            }
        }
    }

    std::string config_path;
    app.cli.add_option("--config", config_path, "JSON config file with flat dotted keys");
    app.cli.add_flag("--dry-run", app.dry_run, "validate and print the resolved plan, compute nothing");
    app.cli.add_option("--out", app.out_path, "write output to this path instead of stdout");
    app.cli.add_option("--format", app.format, "output format: csv or json")
        ->check(CLI::IsMember({"csv", "json", ""}));
    auto* seed_opt = app.cli.add_option("--seed", app.seed, "master seed (fixed default, never time-based)");
    auto* threads_opt = app.cli.add_option("--threads", app.threads, "worker cap (0 = hardware)");
    auto* tol_opt = app.cli.add_option("--tol", app.tol, "absolute tolerance override");
    app.bind(seed_opt, "seed", app.seed);
    app.bind(threads_opt, "threads", app.threads);
    app.bind(tol_opt, "tol", app.tol);
    app.known_keys.push_back("format");
    app.bindings.push_back([&]() {
        if (app.format.empty() && app.config.contains("format"))
            app.format = app.config["format"].get<std::string>();
    });

    std::function<int()> action;

    // ---- sample ----------------------------------------------------------
    auto* sample = app.cli.add_subcommand("sample", "draw graphs from the random models");
    {
        auto* c = sample->add_subcommand("wrandom", "n-vertex sample from a graphon");
        static std::string graphon_path;
        static int n = 0;
        static int trials = 1;
        app.bind(c->add_option("--graphon", graphon_path, "graphon JSON file"),
                 "sample.wrandom.graphon", graphon_path, true);
        app.bind(c->add_option("--n", n, "vertex count"), "sample.wrandom.n", n, true);
        app.bind(c->add_option("--trials", trials, "batch size"), "sample.wrandom.trials", trials);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"graphon", graphon_path}, {"n", n}, {"trials", trials},
                             {"seed", app.seed}};
                if (handle_dry_run(app, "sample wrandom", params)) return 0;
                Graphon w;
                load_graphon(graphon_path, w);
                std::ostringstream batch;
                for (int t = 0; t < trials; ++t) {
                    Graph g;
                    check(glp_sample_wrandom(w.h, n, app.seed + static_cast<std::uint64_t>(t), &g.h));
                    char* txt = nullptr;
                    check(glp_graph_to_edge_list(g.h, &txt));
                    std::string payload = take_string(txt);
                    if (trials == 1) {
                        emit(app, payload);
                        return 0;
                    }
                    if (!app.out_path.empty()) {
                        std::ofstream out(app.out_path + "." + std::to_string(t) + ".edges",
                                          std::ios::binary);
                        out << payload;
                    } else {
                        batch << payload.size() << "\n" << payload;
                    }
                }
                if (app.out_path.empty()) std::cout << batch.str();
                return 0;
            };
        });
    }
    {
        auto* c = sample->add_subcommand("sbm", "block model with fixed block sizes");
        static std::string a_str, p_str;
        app.bind(c->add_option("--a", a_str, "block sizes, e.g. 2,3"),
                 "sample.sbm.a", a_str, true);
        app.bind(c->add_option("--p", p_str, "edge matrix, e.g. 0.5,0.1;0.1,0.5"),
                 "sample.sbm.p", p_str, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"a", a_str}, {"p", p_str}, {"seed", app.seed}};
                if (handle_dry_run(app, "sample sbm", params)) return 0;
                std::vector<int> a = parse_ints(a_str);
                std::size_t k = 0;
                std::vector<double> p = parse_matrix(p_str, k);
                if (k != a.size()) fail(2, "--a and --p dimensions must match");
                Graph g;
                check(glp_sample_sbm(a.data(), k, p.data(), app.seed, &g.h));
                char* txt = nullptr;
                check(glp_graph_to_edge_list(g.h, &txt));
                emit(app, take_string(txt));
                return 0;
            };
        });
    }
    {
        auto* c = sample->add_subcommand("weighted", "weighted n-vertex sample");
        static std::string graphon_path;
        static int n = 0;
        app.bind(c->add_option("--graphon", graphon_path, "graphon JSON file"),
                 "sample.weighted.graphon", graphon_path, true);
        app.bind(c->add_option("--n", n, "vertex count"), "sample.weighted.n", n, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"graphon", graphon_path}, {"n", n}, {"seed", app.seed}};
                if (handle_dry_run(app, "sample weighted", params)) return 0;
                Graphon w;
                load_graphon(graphon_path, w);
                WGraph h;
                check(glp_sample_weighted(w.h, n, app.seed, &h.h));
                char* txt = nullptr;
                check(glp_wgraph_to_json(h.h, &txt));
                emit(app, take_string(txt) + "\n");
                return 0;
            };
        });
    }
    {
        auto* c = sample->add_subcommand("round", "edge rounding of a weighted graph");
        static std::string wg_path;
        app.bind(c->add_option("--weighted", wg_path, "weighted graph JSON file"),
                 "sample.round.weighted", wg_path, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"weighted", wg_path}, {"seed", app.seed}};
                if (handle_dry_run(app, "sample round", params)) return 0;
                WGraph h;
                check(glp_wgraph_from_json(read_file(wg_path).c_str(), &h.h));
                Graph g;
                check(glp_round_weighted(h.h, app.seed, &g.h));
                char* txt = nullptr;
                check(glp_graph_to_edge_list(g.h, &txt));
                emit(app, take_string(txt));
                return 0;
            };
        });
    }
    {
        auto* c = sample->add_subcommand("couple", "coupled pairs (shared coins)");
        static std::string mode, a_str, b_str, p_str, graphon_path;
        static double eps = 0.1;
        static int n = 0;
        app.bind(c->add_option("--mode", mode, "sbm or wr"), "sample.couple.mode", mode, true);
        app.bind(c->add_option("--a", a_str, "block sizes of the first model"), "sample.couple.a", a_str);
        app.bind(c->add_option("--b", b_str, "block sizes of the second model"), "sample.couple.b", b_str);
        app.bind(c->add_option("--p", p_str, "edge matrix"), "sample.couple.p", p_str);
        app.bind(c->add_option("--eps", eps, "asserted block-size discrepancy"), "sample.couple.eps", eps);
        app.bind(c->add_option("--graphon", graphon_path, "graphon JSON (wr mode)"),
                 "sample.couple.graphon", graphon_path);
        app.bind(c->add_option("--n", n, "vertex count (wr mode)"), "sample.couple.n", n);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"mode", mode}, {"seed", app.seed}};
                if (mode == "sbm") {
                    params["a"] = a_str;
                    params["b"] = b_str;
                    params["p"] = p_str;
                    params["eps"] = eps;
                } else {
                    params["graphon"] = graphon_path;
                    params["n"] = n;
                }
                if (handle_dry_run(app, "sample couple", params)) return 0;
                ojson out;
                if (mode == "sbm") {
                    std::vector<int> a = parse_ints(a_str), b = parse_ints(b_str);
                    std::size_t k = 0;
                    std::vector<double> p = parse_matrix(p_str, k);
                    if (k != a.size() || a.size() != b.size()) fail(2, "--a/--b/--p dimensions must match");
                    Graph g, h;
                    char* map = nullptr;
                    check(glp_couple_sbm(a.data(), b.data(), k, p.data(), eps, app.seed, &g.h,
                                         &h.h, &map));
                    char *gt = nullptr, *ht = nullptr;
                    check(glp_graph_to_edge_list(g.h, &gt));
                    check(glp_graph_to_edge_list(h.h, &ht));
                    out["g"] = take_string(gt);
                    out["h"] = take_string(ht);
                    out["coupling"] = parse_witness(take_string(map));
                } else if (mode == "wr") {
                    Graphon w;
                    load_graphon(graphon_path, w);
                    WGraph h;
                    Graph g;
                    check(glp_couple_weighted_rounded(w.h, n, app.seed, &h.h, &g.h));
                    char *ht = nullptr, *gt = nullptr;
                    check(glp_wgraph_to_json(h.h, &ht));
                    check(glp_graph_to_edge_list(g.h, &gt));
                    out["h"] = parse_witness(take_string(ht));
                    out["g"] = take_string(gt);
                } else {
                    fail(2, "--mode must be sbm or wr");
                }
                emit(app, out.dump(2) + "\n");
                return 0;
            };
        });
    }

    // ---- dist --------------------------------------------------------------
    auto* dist = app.cli.add_subcommand("dist", "cut norms and cut-distance bounds");
    static std::string du_path, dv_path;
    {
        auto* c = dist->add_subcommand("cutnorm", "exact cut norm of the difference");
        static bool approx = false;
        static int restarts = 64;
        app.bind(c->add_option("--u", du_path, "graphon or .edges file"),
                 "dist.cutnorm.u", du_path, true);
        app.bind(c->add_option("--v", dv_path, "graphon or .edges file"),
                 "dist.cutnorm.v", dv_path, true);
        app.bind(c->add_flag("--approx", approx, "greedy certified lower bound instead"),
                 "dist.cutnorm.approx", approx);
        app.bind(c->add_option("--restarts", restarts, "restarts for --approx"),
                 "dist.cutnorm.restarts", restarts);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"u", du_path}, {"v", dv_path}, {"approx", approx}};
                if (handle_dry_run(app, "dist cutnorm", params)) return 0;
                Graphon u, v;
                load_graphon(du_path, u);
                load_graphon(dv_path, v);
                double out = 0.0;
                if (approx)
                    check(glp_cut_norm_lb(u.h, v.h, restarts, app.seed, &out));
                else
                    check(glp_cut_norm(u.h, v.h, &out));
                emit_value(app, out);
                return 0;
            };
        });
    }
    {
        auto* c = dist->add_subcommand("labeled", "min over part permutations (exact)");
        app.bind(c->add_option("--u", du_path, "graphon or .edges file"),
                 "dist.labeled.u", du_path, true);
        app.bind(c->add_option("--v", dv_path, "graphon or .edges file"),
                 "dist.labeled.v", dv_path, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"u", du_path}, {"v", dv_path}};
                if (handle_dry_run(app, "dist labeled", params)) return 0;
                Graphon u, v;
                load_graphon(du_path, u);
                load_graphon(dv_path, v);
                double out = 0.0;
                check(glp_cut_dist_labeled(u.h, v.h, &out));
                emit_value(app, out);
                return 0;
            };
        });
    }
    {
        auto* c = dist->add_subcommand("upper", "coupling upper bound on the cut distance");
        static std::string init_path;
        static int iters = 50, restarts = 8;
        app.bind(c->add_option("--u", du_path, "graphon or .edges file"),
                 "dist.upper.u", du_path, true);
        app.bind(c->add_option("--v", dv_path, "graphon or .edges file"),
                 "dist.upper.v", dv_path, true);
        app.bind(c->add_option("--init", init_path, "initial transport plan JSON file"),
                 "dist.upper.init", init_path);
        app.bind(c->add_option("--iters", iters, "pivot sweeps per restart"), "dist.upper.iters", iters);
        app.bind(c->add_option("--restarts", restarts, "random vertex restarts"),
                 "dist.upper.restarts", restarts);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"u", du_path}, {"v", dv_path}, {"iters", iters},
                             {"restarts", restarts}, {"seed", app.seed}};
                if (!init_path.empty()) params["init"] = init_path;
                if (handle_dry_run(app, "dist upper", params)) return 0;
                Graphon u, v;
                load_graphon(du_path, u);
                load_graphon(dv_path, v);
                std::string init;
                if (!init_path.empty()) init = read_file(init_path);
                double out = 0.0;
                char* wit = nullptr;
                check(glp_cut_dist_upper(u.h, v.h, init.empty() ? nullptr : init.c_str(), iters,
                                         restarts, app.seed, &out, &wit));
                emit_value(app, out, parse_witness(take_string(wit)));
                return 0;
            };
        });
    }
    {
        auto* c = dist->add_subcommand("lower", "counting-lemma lower bound");
        static int max_size = 4;
        app.bind(c->add_option("--u", du_path, "graphon or .edges file"),
                 "dist.lower.u", du_path, true);
        app.bind(c->add_option("--v", dv_path, "graphon or .edges file"),
                 "dist.lower.v", dv_path, true);
        app.bind(c->add_option("--max-size", max_size, "largest witness graph (<= 5)"),
                 "dist.lower.max-size", max_size);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"u", du_path}, {"v", dv_path}, {"max_size", max_size}};
                if (handle_dry_run(app, "dist lower", params)) return 0;
                Graphon u, v;
                load_graphon(du_path, u);
                load_graphon(dv_path, v);
                double out = 0.0;
                char* wit = nullptr;
                check(glp_cut_dist_lower(u.h, v.h, max_size, &out, &wit));
                emit_value(app, out, ojson(take_string(wit)));
                return 0;
            };
        });
    }
    {
        auto* c = dist->add_subcommand("bracket", "certified lower/upper bracket");
        static int max_size = 4, iters = 50, restarts = 8;
        app.bind(c->add_option("--u", du_path, "graphon or .edges file"), "dist.bracket.u",
                 du_path, true);
        app.bind(c->add_option("--v", dv_path, "graphon or .edges file"), "dist.bracket.v",
                 dv_path, true);
        app.bind(c->add_option("--max-size", max_size, "witness size for the lower bound"),
                 "dist.bracket.max-size", max_size);
        app.bind(c->add_option("--iters", iters, "pivot sweeps per restart"),
                 "dist.bracket.iters", iters);
        app.bind(c->add_option("--restarts", restarts, "random vertex restarts"),
                 "dist.bracket.restarts", restarts);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"u", du_path}, {"v", dv_path}, {"max_size", max_size},
                             {"iters", iters}, {"restarts", restarts}, {"seed", app.seed}};
                if (handle_dry_run(app, "dist bracket", params)) return 0;
                Graphon u, v;
                load_graphon(du_path, u);
                load_graphon(dv_path, v);
                double lo = 0.0, hi = 1.0;
                char *wlo = nullptr, *whi = nullptr;
                check(glp_cut_dist_lower(u.h, v.h, max_size, &lo, &wlo));
                check(glp_cut_dist_upper(u.h, v.h, nullptr, iters, restarts, app.seed, &hi, &whi));
                ojson j;
                j["lower"] = lo;
                j["upper"] = hi;
                j["witness_lower"] = take_string(wlo);
                j["witness_upper"] = parse_witness(take_string(whi));
                emit(app, j.dump(2) + "\n");
                return 0;
            };
        });
    }
    {
        auto* c = dist->add_subcommand("colored", "exact colored cut norm");
        static std::string x_path, y_path;
        static bool labeled = false;
        app.bind(c->add_option("--x", x_path, "colored graphon JSON"),
                 "dist.colored.x", x_path, true);
        app.bind(c->add_option("--y", y_path, "colored graphon JSON"),
                 "dist.colored.y", y_path, true);
        app.bind(c->add_flag("--labeled", labeled, "min over part permutations"),
                 "dist.colored.labeled", labeled);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"x", x_path}, {"y", y_path}, {"labeled", labeled}};
                if (handle_dry_run(app, "dist colored", params)) return 0;
                Colored x, y;
                check(glp_colored_from_json(read_file(x_path).c_str(), &x.h));
                check(glp_colored_from_json(read_file(y_path).c_str(), &y.h));
                double out = 0.0;
                if (labeled)
                    check(glp_colored_cut_dist_labeled(x.h, y.h, &out));
                else
                    check(glp_colored_cut_norm(x.h, y.h, &out));
                emit_value(app, out);
                return 0;
            };
        });
    }

    // ---- density -------------------------------------------------------------
    auto* density = app.cli.add_subcommand("density", "homomorphism and induced densities");
    {
        auto* c = density->add_subcommand("hom", "homomorphism density t(F, W)");
        static std::string graph_path, graphon_path;
        app.bind(c->add_option("--graph", graph_path, "edge-list file for F"),
                 "density.hom.graph", graph_path, true);
        app.bind(c->add_option("--graphon", graphon_path, "graphon JSON for W"),
                 "density.hom.graphon", graphon_path, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"graph", graph_path}, {"graphon", graphon_path}};
                if (handle_dry_run(app, "density hom", params)) return 0;
                Graph f;
                check(glp_graph_from_edge_list(read_file(graph_path).c_str(), &f.h));
                Graphon w;
                load_graphon(graphon_path, w);
                double out = 0.0;
                check(glp_hom_density(f.h, w.h, &out));
                emit_value(app, out);
                return 0;
            };
        });
    }
    {
        auto* c = density->add_subcommand("induced", "induced density t_ind(F, W)");
        static std::string graph_path, graphon_path;
        app.bind(c->add_option("--graph", graph_path, "edge-list file for F"),
                 "density.induced.graph", graph_path, true);
        app.bind(c->add_option("--graphon", graphon_path, "graphon JSON for W"),
                 "density.induced.graphon", graphon_path, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"graph", graph_path}, {"graphon", graphon_path}};
                if (handle_dry_run(app, "density induced", params)) return 0;
                Graph f;
                check(glp_graph_from_edge_list(read_file(graph_path).c_str(), &f.h));
                Graphon w;
                load_graphon(graphon_path, w);
                double out = 0.0;
                check(glp_induced_density(f.h, w.h, &out));
                emit_value(app, out);
                return 0;
            };
        });
    }
    {
        auto* c = density->add_subcommand("exact-dist", "exact sampling law (n <= 6)");
        static std::string graphon_path, a_str, p_str;
        static int n = 0;
        app.bind(c->add_option("--graphon", graphon_path, "graphon JSON for W"),
                 "density.exact-dist.graphon", graphon_path);
        app.bind(c->add_option("--n", n, "vertex count"), "density.exact-dist.n", n);
        app.bind(c->add_option("--a", a_str, "block sizes (block-model law instead)"),
                 "density.exact-dist.a", a_str);
        app.bind(c->add_option("--p", p_str, "edge matrix for --a"), "density.exact-dist.p", p_str);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"graphon", graphon_path}, {"n", n}, {"a", a_str}, {"p", p_str}};
                if (handle_dry_run(app, "density exact-dist", params)) return 0;
                Dist d;
                if (!a_str.empty()) {
                    std::vector<int> a = parse_ints(a_str);
                    std::size_t k = 0;
                    std::vector<double> p = parse_matrix(p_str, k);
                    if (k != a.size()) fail(2, "--a and --p dimensions must match");
                    check(glp_sbm_exact_distribution(a.data(), k, p.data(), &d.h));
                } else {
                    Graphon w;
                    load_graphon(graphon_path, w);
                    check(glp_exact_distribution(w.h, n, &d.h));
                }
                char* csv = nullptr;
                check(glp_dist_to_csv(d.h, &csv));
                emit(app, take_string(csv));
                return 0;
            };
        });
    }
    {
        auto* c = density->add_subcommand("ball", "mass of a labeled-distance ball");
        static std::string graphon_path, center_path;
        static int n = 0;
        static double radius = 0.0;
        app.bind(c->add_option("--graphon", graphon_path, "sampling graphon JSON"),
                 "density.ball.graphon", graphon_path, true);
        app.bind(c->add_option("--n", n, "vertex count"), "density.ball.n", n, true);
        app.bind(c->add_option("--center", center_path, "center graphon or .edges"),
                 "density.ball.center", center_path, true);
        app.bind(c->add_option("--radius", radius, "ball radius"),
                 "density.ball.radius", radius, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"graphon", graphon_path}, {"n", n}, {"center", center_path},
                             {"radius", radius}};
                if (handle_dry_run(app, "density ball", params)) return 0;
                Graphon w, center;
                load_graphon(graphon_path, w);
                load_graphon(center_path, center);
                Dist d;
                check(glp_exact_distribution(w.h, n, &d.h));
                double mass = 0.0, count = 0.0;
                check(glp_ball_mass(d.h, center.h, radius, &mass, &count));
                ojson wit{{"ball_count", count}, {"metric", "cut_dist_labeled"}};
                emit_value(app, mass, wit);
                return 0;
            };
        });
    }

    // ---- rate ------------------------------------------------------------------
    auto* rate = app.cli.add_subcommand("rate", "rate functions and membership checks");
    {
        auto* c = rate->add_subcommand("hp", "binary relative entropy h_p(r)");
        static double r = 0.0, p = 0.0;
        app.bind(c->add_option("--r", r, "argument"), "rate.hp.r", r, true);
        app.bind(c->add_option("--p", p, "reference probability"), "rate.hp.p", p, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"r", r}, {"p", p}};
                if (handle_dry_run(app, "rate hp", params)) return 0;
                double out = 0.0;
                check(glp_rel_entropy(r, p, &out));
                emit_value(app, out);
                return 0;
            };
        });
    }
    {
        auto* c = rate->add_subcommand("ip", "I_p(U)");
        static std::string graphon_path;
        static double p = 0.0;
        app.bind(c->add_option("--graphon", graphon_path, "graphon or .edges"),
                 "rate.ip.graphon", graphon_path, true);
        app.bind(c->add_option("--p", p, "reference probability"), "rate.ip.p", p, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"graphon", graphon_path}, {"p", p}};
                if (handle_dry_run(app, "rate ip", params)) return 0;
                Graphon u;
                load_graphon(graphon_path, u);
                double out = 0.0;
                check(glp_ip(u.h, p, &out));
                emit_value(app, out);
                return 0;
            };
        });
    }
    {
        auto* c = rate->add_subcommand("ikp", "colored rate I^(k)_p(X)");
        static std::string colored_path, p_str;
        app.bind(c->add_option("--colored", colored_path, "colored graphon JSON"),
                 "rate.ikp.colored", colored_path, true);
        app.bind(c->add_option("--p", p_str, "symmetric k x k matrix"), "rate.ikp.p",
                 p_str, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"colored", colored_path}, {"p", p_str}};
                if (handle_dry_run(app, "rate ikp", params)) return 0;
                Colored x;
                check(glp_colored_from_json(read_file(colored_path).c_str(), &x.h));
                std::size_t k = 0;
                std::vector<double> p = parse_matrix(p_str, k);
                double out = 0.0;
                check(glp_ikp(x.h, p.data(), k, &out));
                emit_value(app, out);
                return 0;
            };
        });
    }
    {
        auto* c = rate->add_subcommand("j", "block rate J_{alpha,p}(U)");
        static std::string graphon_path, alpha_str, p_str, mode = "auto";
        static int restarts = 16;
        app.bind(c->add_option("--graphon", graphon_path, "graphon or .edges"),
                 "rate.j.graphon", graphon_path, true);
        app.bind(c->add_option("--alpha", alpha_str, "row vector, e.g. 1,1"),
                 "rate.j.alpha", alpha_str, true);
        app.bind(c->add_option("--p", p_str, "symmetric k x k matrix"), "rate.j.p",
                 p_str, true);
        app.bind(c->add_option("--mode", mode, "auto, exact or heuristic")
                     ->check(CLI::IsMember({"auto", "exact", "heuristic"})),
                 "rate.j.mode", mode);
        app.bind(c->add_option("--restarts", restarts, "heuristic restarts"), "rate.j.restarts",
                 restarts);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"graphon", graphon_path}, {"alpha", alpha_str}, {"p", p_str},
                             {"mode", mode}, {"restarts", restarts}, {"seed", app.seed}};
                if (handle_dry_run(app, "rate j", params)) return 0;
                Graphon u;
                load_graphon(graphon_path, u);
                std::vector<double> alpha = parse_doubles(alpha_str);
                std::size_t k = 0;
                std::vector<double> p = parse_matrix(p_str, k);
                if (k != alpha.size()) fail(2, "--alpha and --p dimensions must match");
                int m = mode == "auto" ? 0 : mode == "exact" ? 1 : 2;
                double out = 0.0;
                char* wit = nullptr;
                check(glp_j_alpha_p(u.h, alpha.data(), k, p.data(), m, restarts, app.seed, &out,
                                    &wit));
                emit_value(app, out, parse_witness(take_string(wit)));
                return 0;
            };
        });
    }
    {
        auto* c = rate->add_subcommand("r", "step-graphon rate R_p(U)");
        static std::string graphon_path, p_str;
        static int grid = 32, restarts = 16;
        app.bind(c->add_option("--graphon", graphon_path, "graphon or .edges"),
                 "rate.r.graphon", graphon_path, true);
        app.bind(c->add_option("--p", p_str, "symmetric k x k matrix"), "rate.r.p",
                 p_str, true);
        app.bind(c->add_option("--grid", grid, "simplex grid denominator"), "rate.r.grid", grid);
        app.bind(c->add_option("--restarts", restarts, "heuristic restarts"), "rate.r.restarts",
                 restarts);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"graphon", graphon_path}, {"p", p_str}, {"grid", grid},
                             {"restarts", restarts}, {"seed", app.seed}};
                if (handle_dry_run(app, "rate r", params)) return 0;
                Graphon u;
                load_graphon(graphon_path, u);
                std::size_t k = 0;
                std::vector<double> p = parse_matrix(p_str, k);
                double out = 0.0;
                char* wit = nullptr;
                check(glp_r_p(u.h, p.data(), k, grid, restarts, app.seed, &out, &wit));
                emit_value(app, out, parse_witness(take_string(wit)));
                return 0;
            };
        });
    }
    {
        auto* c = rate->add_subcommand("kw", "speed-n rate K_W(U)");
        static std::string w_path, u_path;
        app.bind(c->add_option("--w", w_path, "base graphon"), "rate.kw.w", w_path, true);
        app.bind(c->add_option("--u", u_path, "target graphon"), "rate.kw.u", u_path, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"w", w_path}, {"u", u_path}};
                if (handle_dry_run(app, "rate kw", params)) return 0;
                Graphon w, u;
                load_graphon(w_path, w);
                load_graphon(u_path, u);
                double out = 0.0;
                char* wit = nullptr;
                check(glp_kw(w.h, u.h, &out, &wit));
                emit_value(app, out, parse_witness(take_string(wit)));
                return 0;
            };
        });
    }
    {
        auto* c = rate->add_subcommand("rn", "finite-K membership in RN(W)");
        static std::string w_path, u_path;
        app.bind(c->add_option("--w", w_path, "base graphon"), "rate.rn.w", w_path, true);
        app.bind(c->add_option("--u", u_path, "target graphon"), "rate.rn.u", u_path, true);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"w", w_path}, {"u", u_path}};
                if (handle_dry_run(app, "rate rn", params)) return 0;
                Graphon w, u;
                load_graphon(w_path, w);
                load_graphon(u_path, u);
                int out = 0;
                check(glp_rn_member(w.h, u.h, &out));
                emit(app, std::string(out ? "true" : "false") + "\n");
                return 0;
            };
        });
    }
    {
        auto* c = rate->add_subcommand("forb", "bounded induced-subgraph consistency");
        static std::string w_path, u_path;
        static int max_size = 3;
        app.bind(c->add_option("--w", w_path, "base graphon"), "rate.forb.w", w_path, true);
        app.bind(c->add_option("--u", u_path, "target graphon"), "rate.forb.u", u_path, true);
        app.bind(c->add_option("--max-size", max_size, "largest checked graph (<= 4)"),
                 "rate.forb.max-size", max_size);
        c->callback([&]() {
            action = [&]() {
                ojson params{{"w", w_path}, {"u", u_path}, {"max_size", max_size}};
                if (handle_dry_run(app, "rate forb", params)) return 0;
                Graphon w, u;
                load_graphon(w_path, w);
                load_graphon(u_path, u);
                int out = 0;
                check(glp_forb_consistent(w.h, u.h, max_size, &out));
                emit(app, std::string(out ? "true" : "false") + "\n");
                return 0;
            };
        });
    }

    // ---- verify -------------------------------------------------------------
    auto* verify = app.cli.add_subcommand("verify", "desk-scale verification experiments");
    {
        auto* c = verify->add_subcommand("sanov", "multinomial rate vs relative entropy");
        static std::string beta_str, target_str, schedule_str;
        static long nmax = 1000;
        app.bind(c->add_option("--beta", beta_str, "reference probabilities"),
                 "verify.sanov.beta", beta_str, true);
        app.bind(c->add_option("--target", target_str, "target fractions"),
                 "verify.sanov.target", target_str, true);
        app.bind(c->add_option("--schedule", schedule_str, "explicit n list"),
                 "verify.sanov.schedule", schedule_str);
        app.bind(c->add_option("--nmax", nmax, "default schedule: powers of 10 up to nmax"),
                 "verify.sanov.nmax", nmax);
        c->callback([&]() {
            action = [&]() {
                std::vector<long> schedule;
                if (!schedule_str.empty()) {
                    for (int x : parse_ints(schedule_str)) schedule.push_back(x);
                } else {
                    for (long n = 10; n < nmax; n *= 10) schedule.push_back(n);
                    schedule.push_back(nmax);
                }
                ojson config{{"beta", parse_doubles(beta_str)},
                             {"target", parse_doubles(target_str)},
                             {"schedule", schedule}};
                if (handle_dry_run(app, "verify sanov", config)) return 0;
                char *csv = nullptr, *side = nullptr;
                check(glp_verify_sanov(config.dump().c_str(), &csv, &side));
                emit_report(app, take_string(csv), take_string(side));
                return 0;
            };
        });
    }
    {
        auto* c = verify->add_subcommand("speed2", "exact ball masses vs the quadratic rate");
        static std::string graphon_path, center_path, schedule_str = "3,4";
        static double radius = 0.2;
        static int grid = 32, restarts = 8;
        app.bind(c->add_option("--graphon", graphon_path, "sampling graphon"),
                 "verify.speed2.graphon", graphon_path, true);
        app.bind(c->add_option("--center", center_path, "ball center graphon or .edges"),
                 "verify.speed2.center", center_path, true);
        app.bind(c->add_option("--radius", radius, "ball radius"), "verify.speed2.radius", radius);
        app.bind(c->add_option("--schedule", schedule_str, "n list (each <= 6)"),
                 "verify.speed2.schedule", schedule_str);
        app.bind(c->add_option("--grid", grid, "R_p simplex grid"), "verify.speed2.grid", grid);
        app.bind(c->add_option("--restarts", restarts, "R_p restarts"), "verify.speed2.restarts",
                 restarts);
        c->callback([&]() {
            action = [&]() {
                Graphon w, center;
                load_graphon(graphon_path, w);
                load_graphon(center_path, center);
                char *wj = nullptr, *cj = nullptr;
                check(glp_graphon_to_json(w.h, &wj));
                check(glp_graphon_to_json(center.h, &cj));
                ojson config{{"graphon", ojson::parse(take_string(wj))},
                             {"center", ojson::parse(take_string(cj))},
                             {"radius", radius},
                             {"schedule", parse_ints(schedule_str)},
                             {"grid", grid},
                             {"restarts", restarts},
                             {"seed", app.seed}};
                if (handle_dry_run(app, "verify speed2", config)) return 0;
                char *csv = nullptr, *side = nullptr;
                check(glp_verify_speed2(config.dump().c_str(), &csv, &side));
                emit_report(app, take_string(csv), take_string(side));
                return 0;
            };
        });
    }
    {
        auto* c = verify->add_subcommand("expeq", "weighted vs rounded exceedances");
        static std::string graphon_path, schedule_str = "16,32";
        static double alpha = 0.3;
        static int trials = 1000;
        app.bind(c->add_option("--graphon", graphon_path, "sampling graphon"),
                 "verify.expeq.graphon", graphon_path, true);
        app.bind(c->add_option("--schedule", schedule_str, "n list"), "verify.expeq.schedule",
                 schedule_str);
        app.bind(c->add_option("--alpha", alpha, "distance threshold"), "verify.expeq.alpha", alpha);
        app.bind(c->add_option("--trials", trials, "coupled trials per n (>= 100)"),
                 "verify.expeq.trials", trials);
        c->callback([&]() {
            action = [&]() {
                Graphon w;
                load_graphon(graphon_path, w);
                char* wj = nullptr;
                check(glp_graphon_to_json(w.h, &wj));
                ojson config{{"graphon", ojson::parse(take_string(wj))},
                             {"schedule", parse_ints(schedule_str)},
                             {"alpha", alpha},
                             {"trials", trials},
                             {"seed", app.seed}};
                if (handle_dry_run(app, "verify expeq", config)) return 0;
                char *csv = nullptr, *side = nullptr;
                check(glp_verify_expeq(config.dump().c_str(), &csv, &side));
                emit_report(app, take_string(csv), take_string(side));
                return 0;
            };
        });
    }
    {
        auto* c = verify->add_subcommand("lipschitz", "forgetting/patching maps vs d^(k)");
        static int trials = 200, m = 5, k = 2;
        app.bind(c->add_option("--trials", trials, "random pairs"), "verify.lipschitz.trials",
                 trials);
        app.bind(c->add_option("--m", m, "parts per graphon (<= 8)"), "verify.lipschitz.m", m);
        app.bind(c->add_option("--k", k, "color count"), "verify.lipschitz.k", k);
        c->callback([&]() {
            action = [&]() {
                ojson config{{"trials", trials}, {"m", m}, {"k", k}, {"seed", app.seed}};
                if (handle_dry_run(app, "verify lipschitz", config)) return 0;
                char *csv = nullptr, *side = nullptr;
                check(glp_verify_lipschitz(config.dump().c_str(), &csv, &side));
                emit_report(app, take_string(csv), take_string(side));
                return 0;
            };
        });
    }
    {
        auto* c = verify->add_subcommand("stretch", "canonical stretch plans vs 2(1/s - 1)");
        static int trials = 200;
        static std::string s_str = "0.8,0.9,0.95";
        app.bind(c->add_option("--trials", trials, "random graphons per s"),
                 "verify.stretch.trials", trials);
        app.bind(c->add_option("--s", s_str, "stretch factors in (0,1]"), "verify.stretch.s",
                 s_str);
        c->callback([&]() {
            action = [&]() {
                ojson config{{"trials", trials}, {"s_list", parse_doubles(s_str)},
                             {"seed", app.seed}};
                if (handle_dry_run(app, "verify stretch", config)) return 0;
                char *csv = nullptr, *side = nullptr;
                check(glp_verify_stretch(config.dump().c_str(), &csv, &side));
                emit_report(app, take_string(csv), take_string(side));
                return 0;
            };
        });
    }

    // Global flags may appear anywhere, including after subcommand options.
    auto all = [](CLI::App*) { return true; };
    for (CLI::App* group : app.cli.get_subcommands(all)) {
        group->fallthrough();
        for (CLI::App* leaf : group->get_subcommands(all)) leaf->fallthrough();
    }

    try {
        app.cli.parse(argc, argv);
        std::string prefix;
        for (const auto* sc : app.cli.get_subcommands()) {
            prefix += sc->get_name() + ".";
            for (const auto* sub : sc->get_subcommands()) prefix += sub->get_name() + ".";
        }
        app.apply_config(prefix);
        if (const char* env = std::getenv("GRAPHON_LDP_THREADS"); env && app.threads == 0)
            app.threads = std::atoi(env);
        if (app.threads != 0) check(glp_set_threads(app.threads));
        if (app.tol > 0.0) check(glp_set_tolerance(app.tol));
        if (!action) fail(2, "no subcommand selected");
        return action();
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return 0; // --help
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CliError& e) {
        std::cerr << "error: " << e.message << "\n";
        return e.code;
    }
}
