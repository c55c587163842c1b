#pragma once

#include <string>

#include <json.hpp>

#include "colored.hpp"
#include "cutnorm.hpp"
#include "densities.hpp"
#include "graph.hpp"
#include "rates.hpp"
#include "step_graphon.hpp"
#include "transport.hpp"

namespace gldp {

using ojson = nlohmann::ordered_json;

// Deterministic shortest round-trip decimal form; infinities become the
// strings "inf" / "-inf" (JSON has no infinity literal).
std::string fmt_double(double x);
ojson json_number(double x);

// Graphon file: {"measures": [...], "values": [[...]]}.
StepGraphon graphon_from_json(const std::string& text);
std::string graphon_to_json(const StepGraphon& g);

// Colored graphon file adds "k" and 1-based "colors" per part.
ColoredStepGraphon colored_from_json(const std::string& text);
std::string colored_to_json(const ColoredStepGraphon& g);

// Weighted graph file: {"n": n, "weights": [[...]]} (full symmetric matrix).
WeightedGraph wgraph_from_json(const std::string& text);
std::string wgraph_to_json(const WeightedGraph& h);

// Transport plan: {"rows": [...], "cols": [...], "c": [[...]]}.
TransportPlan plan_from_json(const std::string& text);
ojson plan_to_json(const TransportPlan& p);

ojson rate_result_to_json(const RateResult& r);
ojson distance_bounds_to_json(const DistanceBounds& b);

// Distribution CSV: "graph,probability" with the edge-pair bitmask as key.
std::string distribution_to_csv(const GraphDistribution& d);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

} // namespace gldp
