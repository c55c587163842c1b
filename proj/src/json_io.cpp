#include "json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace gldp {

std::string fmt_double(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (std::isnan(x)) throw internal_error("fmt_double: NaN is never a valid result");
    if (x == std::floor(x) && std::fabs(x) < 1e15)
        return std::to_string(static_cast<long long>(x));
    return nlohmann::json(x).dump();
}

ojson json_number(double x) {
    if (std::isinf(x)) return ojson(x > 0 ? "inf" : "-inf");
    if (std::isnan(x)) throw internal_error("json_number: NaN is never a valid result");
    return ojson(x);
}

namespace {

ojson parse(const std::string& text, const char* who) {
    ojson j = ojson::parse(text, nullptr, false);
    if (j.is_discarded()) throw config_error(std::string(who) + ": invalid JSON");
    return j;
}

Matrix matrix_from_json(const ojson& j, const char* who) {
    if (!j.is_array()) throw config_error(std::string(who) + ": matrix must be an array of rows");
    std::size_t n = j.size();
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n)
            throw config_error(std::string(who) + ": matrix must be square");
        for (std::size_t c = 0; c < n; ++c) m(i, c) = j[i][c].get<double>();
    }
    return m;
}

ojson matrix_to_json(const Matrix& m) {
    ojson rows = ojson::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        ojson row = ojson::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace

StepGraphon graphon_from_json(const std::string& text) {
    ojson j = parse(text, "graphon");
    if (!j.contains("measures") || !j.contains("values"))
        throw config_error("graphon: requires \"measures\" and \"values\"");
    std::vector<double> ms = j["measures"].get<std::vector<double>>();
    return StepGraphon(std::move(ms), matrix_from_json(j["values"], "graphon"));
}

std::string graphon_to_json(const StepGraphon& g) {
    ojson j;
    j["measures"] = g.measures();
    j["values"] = matrix_to_json(g.values());
    return j.dump();
}

ColoredStepGraphon colored_from_json(const std::string& text) {
    ojson j = parse(text, "colored graphon");
    if (!j.contains("measures") || !j.contains("values") || !j.contains("colors") || !j.contains("k"))
        throw config_error("colored graphon: requires \"measures\", \"values\", \"colors\", \"k\"");
    StepGraphon g(j["measures"].get<std::vector<double>>(),
                  matrix_from_json(j["values"], "colored graphon"));
    int k = j["k"].get<int>();
    std::vector<int> colors = j["colors"].get<std::vector<int>>();
    for (int& c : colors) --c; // files carry 1-based colors
    return ColoredStepGraphon(std::move(g), std::move(colors), k);
}

std::string colored_to_json(const ColoredStepGraphon& g) {
    ojson j;
    j["measures"] = g.graphon().measures();
    j["values"] = matrix_to_json(g.graphon().values());
    ojson colors = ojson::array();
    for (int c : g.colors()) colors.push_back(c + 1);
    j["colors"] = std::move(colors);
    j["k"] = g.k();
    return j.dump();
}

WeightedGraph wgraph_from_json(const std::string& text) {
    ojson j = parse(text, "weighted graph");
    if (!j.contains("n") || !j.contains("weights"))
        throw config_error("weighted graph: requires \"n\" and \"weights\"");
    int n = j["n"].get<int>();
    return WeightedGraph(n, matrix_from_json(j["weights"], "weighted graph"));
}

std::string wgraph_to_json(const WeightedGraph& h) {
    ojson j;
    j["n"] = h.n();
    j["weights"] = matrix_to_json(h.weights());
    return j.dump();
}

TransportPlan plan_from_json(const std::string& text) {
    ojson j = parse(text, "transport plan");
    if (!j.contains("rows") || !j.contains("cols") || !j.contains("c"))
        throw config_error("transport plan: requires \"rows\", \"cols\", \"c\"");
    TransportPlan p;
    p.row_marginals = j["rows"].get<std::vector<double>>();
    p.col_marginals = j["cols"].get<std::vector<double>>();
    for (const auto& row : j["c"]) p.c.push_back(row.get<std::vector<double>>());
    p.validate();
    return p;
}

ojson plan_to_json(const TransportPlan& p) {
    ojson j;
    j["rows"] = p.row_marginals;
    j["cols"] = p.col_marginals;
    ojson c = ojson::array();
    for (const auto& row : p.c) c.push_back(row);
    j["c"] = std::move(c);
    return j;
}

ojson rate_result_to_json(const RateResult& r) {
    ojson j;
    j["value"] = json_number(r.value);
    j["method"] = r.method;
    j["gap"] = json_number(r.gap);
    j["feasible"] = r.feasible;
    if (!r.plan.c.empty()) j["plan"] = plan_to_json(r.plan);
    if (!r.alpha.empty()) j["alpha"] = r.alpha;
    if (!r.sigma.empty()) {
        ojson s = ojson::array();
        for (int x : r.sigma) s.push_back(x + 1);
        j["sigma"] = std::move(s);
    }
    return j;
}

ojson distance_bounds_to_json(const DistanceBounds& b) {
    ojson j;
    j["lower"] = json_number(b.lower);
    j["upper"] = json_number(b.upper);
    j["witness_lower"] = b.witness_lower;
    j["witness_upper"] = b.witness_upper;
    return j;
}

std::string distribution_to_csv(const GraphDistribution& d) {
    std::ostringstream out;
    out << "graph,probability\n";
    for (std::size_t g = 0; g < d.probs.size(); ++g)
        out << g << "," << fmt_double(d.probs[g]) << "\n";
    return out.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot write file: " + path);
    out << content;
}

} // namespace gldp
