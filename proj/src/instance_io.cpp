#include "wmrs/instance_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace wmrs {

namespace {

using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

ordered_json parse_json(const std::string& text, const std::string& what) {
  try {
    return ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(what + ": invalid JSON: " + e.what());
  }
}

const ordered_json& require_field(const ordered_json& obj, const char* name,
                                  const std::string& context) {
  if (!obj.is_object() || !obj.contains(name))
    throw ValidationError(context + "." + name + ": missing field");
  return obj.at(name);
}

int require_int(const ordered_json& obj, const char* name, const std::string& context) {
  const auto& field = require_field(obj, name, context);
  if (!field.is_number_integer())
    throw ValidationError(context + "." + name + ": expected an integer");
  return field.get<int>();
}

Graph graph_from_json(const ordered_json& j, const std::string& context) {
  Graph g;
  g.num_vertices = require_int(j, "num_vertices", context);
  const auto& edges = require_field(j, "edges", context);
  if (!edges.is_array()) throw ValidationError(context + ".edges: expected an array");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const auto& edge = edges[e];
    if (!edge.is_array() || edge.size() != 2 || !edge[0].is_number_integer() ||
        !edge[1].is_number_integer())
      throw ValidationError(context + ".edges[" + std::to_string(e) +
                            "]: expected a pair of vertex indices");
    g.edges.emplace_back(edge[0].get<int>(), edge[1].get<int>());
  }
  return g;
}

ordered_json graph_to_json(const Graph& g) {
  ordered_json j;
  j["num_vertices"] = g.num_vertices;
  j["edges"] = ordered_json::array();
  for (const auto& [a, b] : g.edges) j["edges"].push_back({a, b});
  return j;
}

MatroidSpec matroid_from_json(const ordered_json& j, int num_items, const std::string& context) {
  const auto& type_field = require_field(j, "type", context);
  if (!type_field.is_string()) throw ValidationError(context + ".type: expected a string");
  const std::string type = type_field.get<std::string>();

  try {
    if (type == "uniform") {
      return MatroidSpec::uniform(num_items, require_int(j, "k", context));
    }
    if (type == "partition") {
      const auto& blocks_field = require_field(j, "blocks", context);
      if (!blocks_field.is_array())
        throw ValidationError(context + ".blocks: expected an array of arrays");
      std::vector<std::vector<int>> blocks;
      for (const auto& b : blocks_field) {
        if (!b.is_array()) throw ValidationError(context + ".blocks: expected an array of arrays");
        blocks.push_back(b.get<std::vector<int>>());
      }
      const auto& caps_field = require_field(j, "capacities", context);
      if (!caps_field.is_array())
        throw ValidationError(context + ".capacities: expected an array");
      return MatroidSpec::partition(blocks, caps_field.get<std::vector<int>>());
    }
    if (type == "graphic") {
      Graph g = graph_from_json(j, context);
      if (g.num_edges() != num_items)
        throw ValidationError(context + ".edges: graphic matroid needs one edge per item");
      return MatroidSpec::graphic(std::move(g));
    }
    if (type == "paving") {
      Graph g = graph_from_json(require_field(j, "graph", context), context + ".graph");
      if (2 * g.num_edges() != num_items)
        throw ValidationError(context + ".graph: paving matroid needs num_items = 2 * edges");
      return MatroidSpec::paving_from_graph(std::move(g));
    }
    if (type == "explicit") {
      if (require_int(j, "ground_size", context) != num_items)
        throw ValidationError(context + ".ground_size: must equal num_items");
      const auto& sets_field = require_field(j, "independent_sets", context);
      if (!sets_field.is_array())
        throw ValidationError(context + ".independent_sets: expected an array of arrays");
      std::vector<ItemSet> sets;
      for (const auto& s : sets_field) {
        if (!s.is_array())
          throw ValidationError(context + ".independent_sets: expected an array of arrays");
        ItemSet mask = 0;
        for (const auto& e : s) {
          if (!e.is_number_integer() || e.get<int>() < 0 || e.get<int>() >= num_items)
            throw ValidationError(context + ".independent_sets: element out of range");
          mask |= 1ULL << e.get<int>();
        }
        sets.push_back(mask);
      }
      return MatroidSpec::explicit_family(num_items, std::move(sets));
    }
  } catch (const ValidationError& e) {
    // Re-tag construction failures with the field context.
    const std::string message = e.what();
    if (message.rfind(context, 0) == 0) throw;
    throw ValidationError(context + ": " + message);
  }
  throw ValidationError(context + ".type: unknown matroid type '" + type + "'");
}

ordered_json matroid_to_json(const MatroidSpec& spec) {
  ordered_json j;
  j["type"] = spec.kind_name();
  if (const auto* u = std::get_if<MatroidSpec::Uniform>(&spec.data())) {
    j["k"] = u->k;
  } else if (const auto* p = std::get_if<MatroidSpec::Partition>(&spec.data())) {
    j["blocks"] = p->blocks;
    j["capacities"] = p->capacities;
  } else if (const auto* g = std::get_if<MatroidSpec::Graphic>(&spec.data())) {
    j["num_vertices"] = g->graph.num_vertices;
    j["edges"] = graph_to_json(g->graph)["edges"];
  } else if (const auto* p = std::get_if<MatroidSpec::Paving>(&spec.data())) {
    if (!p->membership_graph)
      throw ValidationError("serialize: explicit-family paving matroids have no file form");
    j["graph"] = graph_to_json(*p->membership_graph);
  } else {
    const auto& ex = std::get<MatroidSpec::Explicit>(spec.data());
    j["ground_size"] = ex.ground_size;
    j["independent_sets"] = ordered_json::array();
    for (ItemSet mask : ex.independent_sets) {
      ordered_json set = ordered_json::array();
      for (int e = 0; e < ex.ground_size; ++e)
        if (set_contains(mask, e)) set.push_back(e);
      j["independent_sets"].push_back(set);
    }
  }
  return j;
}

}  // namespace

AuctionInstance parse_instance_text(const std::string& json_text) {
  const ordered_json j = parse_json(json_text, "instance");
  const int num_items = require_int(j, "num_items", "instance");
  const auto& bidders = require_field(j, "bidders", "instance");
  if (!bidders.is_array() || bidders.empty())
    throw ValidationError("instance.bidders: expected a nonempty array");

  std::vector<WMRSValuation> valuations;
  for (std::size_t i = 0; i < bidders.size(); ++i) {
    const std::string bidder_context = "instance.bidders[" + std::to_string(i) + "]";
    const auto& components_field = require_field(bidders[i], "components", bidder_context);
    if (!components_field.is_array())
      throw ValidationError(bidder_context + ".components: expected an array");
    std::vector<WeightedMatroid> components;
    for (std::size_t c = 0; c < components_field.size(); ++c) {
      const std::string context = bidder_context + ".components[" + std::to_string(c) + "]";
      const auto& weight_field = require_field(components_field[c], "weight", context);
      if (!weight_field.is_number())
        throw ValidationError(context + ".weight: expected a number");
      const double weight = weight_field.get<double>();
      if (!(weight >= 0.0))
        throw ValidationError(context + ".weight: must be nonnegative");
      components.push_back(
          {weight, matroid_from_json(require_field(components_field[c], "matroid", context),
                                     num_items, context + ".matroid")});
    }
    try {
      valuations.emplace_back(num_items, std::move(components));
    } catch (const ValidationError& e) {
      throw ValidationError(bidder_context + ": " + e.what());
    }
  }
  try {
    return AuctionInstance(num_items, std::move(valuations));
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("instance: ") + e.what());
  }
}

AuctionInstance parse_instance(const std::string& path) {
  return parse_instance_text(read_file(path));
}

std::string serialize_instance(const AuctionInstance& instance) {
  ordered_json j;
  j["num_items"] = instance.num_items;
  j["bidders"] = ordered_json::array();
  for (const auto& v : instance.valuations) {
    ordered_json bidder;
    bidder["components"] = ordered_json::array();
    for (const auto& c : v.components()) {
      ordered_json component;
      component["weight"] = c.weight;
      component["matroid"] = matroid_to_json(c.matroid);
      bidder["components"].push_back(std::move(component));
    }
    j["bidders"].push_back(std::move(bidder));
  }
  return j.dump(2) + "\n";
}

Graph parse_graph_text(const std::string& json_text) {
  Graph g = graph_from_json(parse_json(json_text, "graph"), "graph");
  validate_graph(g);
  return g;
}

Graph parse_graph(const std::string& path) { return parse_graph_text(read_file(path)); }

std::string serialize_graph(const Graph& graph) { return graph_to_json(graph).dump(2) + "\n"; }

}  // namespace wmrs
