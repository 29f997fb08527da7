#include "exk/graph_io.hpp"

#include <fstream>
#include <stdexcept>

namespace exk {

using nlohmann::json;

json graph_to_json(const WeightedGraph& g) {
    json edges = json::array();
    for (const auto& e : g.edges()) edges.push_back({e.u, e.v, e.w});
    return json{{"n", g.n()},
                {"delta", g.delta()},
                {"regular", g.regular()},
                {"edges", std::move(edges)}};
}

WeightedGraph graph_from_json(const json& j) {
    if (!j.is_object() || !j.contains("n") || !j.contains("edges"))
        throw std::invalid_argument("graph json: expected object with n and edges");
    const int n = j.at("n").get<int>();
    const double delta = j.value("delta", -1.0);
    const bool regular = j.value("regular", false);
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
        if (!e.is_array() || e.size() != 3)
            throw std::invalid_argument("graph json: edge entries must be [u, v, w]");
        edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    }
    return WeightedGraph::create(n, std::move(edges), delta, regular);
}

WeightedGraph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open graph file: " + path);
    json j;
    in >> j;
    return graph_from_json(j);
}

void save_graph(const WeightedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write graph file: " + path);
    out << graph_to_json(g).dump(2) << "\n";
}

json vertex_set_to_json(const VertexSet& s) {
    return json(s.members());
}

VertexSet vertex_set_from_json(const json& j) {
    return VertexSet(j.get<std::vector<int>>());
}

}  // namespace exk
