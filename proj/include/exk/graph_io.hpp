#ifndef EXK_GRAPH_IO_HPP
#define EXK_GRAPH_IO_HPP

#include <json.hpp>

#include <string>

#include "exk/graph.hpp"

namespace exk {

// Interchange schema:
//   {"n": int, "delta": float, "regular": bool, "edges": [[u, v, w], ...]}
nlohmann::json graph_to_json(const WeightedGraph& g);
WeightedGraph graph_from_json(const nlohmann::json& j);

WeightedGraph load_graph(const std::string& path);
void save_graph(const WeightedGraph& g, const std::string& path);

nlohmann::json vertex_set_to_json(const VertexSet& s);
VertexSet vertex_set_from_json(const nlohmann::json& j);

}  // namespace exk

#endif
