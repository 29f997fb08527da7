#ifndef EXK_INSTANCES_HPP
#define EXK_INSTANCES_HPP

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "exk/graph.hpp"
#include "exk/sdp.hpp"

namespace exk {

// Generated instance plus whatever ground truth the generator can certify.
struct InstanceBundle {
    WeightedGraph graph;
    std::string generator;
    nlohmann::json params;
    std::uint64_t seed = 0;
    double delta = 0.0;  // natural size parameter of the construction
    std::optional<VertexSet> planted_set;
    std::optional<SdpSolution> planted_sdp;
    std::vector<VertexSet> witnesses;
    nlohmann::json measured;
};

// Hypercube of the given dimension with every vertex blown up into a cloud;
// adjacent clouds are joined by complete bipartite graphs of weight
// 1/cloud, making the graph exactly dim-regular. The planted relaxation
// point (x = 1 on edges, y = 1/cloud inside clouds) is certified at the
// largest lambda its matrix pencil supports. Witness sets are the 2*dim
// dimension-cut cloud unions.
InstanceBundle hypercube_blowup(int dim, int cloud);

// Complete graph on clique_n vertices with edge weight 1/(clique_n - 1) and
// a disjoint path of 1/delta unit edges attached to every clique vertex.
InstanceBundle clique_with_paths(int clique_n, double delta);

// Planted induced expander: a random d_in-regular graph on ceil(delta * n)
// vertices, d_out cross edges per planted vertex, and the remaining degree
// budget filled so the whole graph is (d_in + d_out)-regular.
InstanceBundle planted_expander(int n, double delta, int d_in, int d_out,
                                std::uint64_t seed);

WeightedGraph random_regular(int n, int d, std::uint64_t seed);

// Writes <name>_graph.json, <name>_sdp.json (if planted) and a sidecar
// <name>_bundle.json into dir. Returns the sidecar path.
std::string save_bundle(const InstanceBundle& b, const std::string& dir,
                        const std::string& name);
InstanceBundle load_bundle(const std::string& sidecar_path);

}  // namespace exk

#endif
