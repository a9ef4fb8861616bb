#pragma once

#include <string>

#include "wmrs/valuation.hpp"

namespace wmrs {

// Instance files: {"num_items": int, "bidders": [{"components": [{"weight":
// number, "matroid": {"type": ..., ...variant fields}}]}]}. Matroid variant
// fields: uniform {"k"}; partition {"blocks", "capacities"}; graphic
// {"num_vertices", "edges"}; paving {"graph"}; explicit {"ground_size",
// "independent_sets"}. Ground sizes always match num_items.
AuctionInstance parse_instance_text(const std::string& json_text);
AuctionInstance parse_instance(const std::string& path);
std::string serialize_instance(const AuctionInstance& instance);

// Graph files: {"num_vertices": int, "edges": [[int, int], ...]}.
Graph parse_graph_text(const std::string& json_text);
Graph parse_graph(const std::string& path);
std::string serialize_graph(const Graph& graph);

}  // namespace wmrs
