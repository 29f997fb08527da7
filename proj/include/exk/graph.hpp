#ifndef EXK_GRAPH_HPP
#define EXK_GRAPH_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace exk {

// Undirected edge with strictly positive weight, stored with u < v.
struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

// Sorted set of vertex indices. Duplicates are rejected at construction.
class VertexSet {
  public:
    VertexSet() = default;
    explicit VertexSet(std::vector<int> members);

    static VertexSet full(int n);

    const std::vector<int>& members() const { return members_; }
    int size() const { return static_cast<int>(members_.size()); }
    bool empty() const { return members_.empty(); }
    bool contains(int v) const;

    std::vector<char> mask(int n) const;
    VertexSet complement(int n) const;

    bool operator==(const VertexSet& o) const { return members_ == o.members_; }

  private:
    std::vector<int> members_;
};

// Pairwise-disjoint vertex sets covering a ground set exactly.
class Partition {
  public:
    Partition(std::vector<VertexSet> blocks, const VertexSet& ground);

    const std::vector<VertexSet>& blocks() const { return blocks_; }

  private:
    std::vector<VertexSet> blocks_;
};

// Symmetric nonnegative edge-weighted graph with a declared maximum
// weighted degree `delta`. Immutable after construction.
class WeightedGraph {
  public:
    WeightedGraph() = default;

    // delta < 0 means "use the maximum weighted degree".
    // regular = true asserts every weighted degree equals delta within 1e-9.
    static WeightedGraph create(int n, std::vector<Edge> edges,
                                double delta = -1.0, bool regular = false);

    int n() const { return n_; }
    double delta() const { return delta_; }
    bool regular() const { return regular_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<std::pair<int, double>>& neighbors(int v) const;

    double weighted_degree(int v) const { return degrees_[v]; }
    int combinatorial_degree(int v) const;
    int max_combinatorial_degree() const;

  private:
    int n_ = 0;
    double delta_ = 0.0;
    bool regular_ = false;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, double>>> adj_;
    std::vector<double> degrees_;
};

Eigen::MatrixXd laplacian(const WeightedGraph& g);

double cut_weight(const WeightedGraph& g, const VertexSet& s);

double set_expansion(const WeightedGraph& g, const VertexSet& s);

// Exhaustive minimum of cut(S)/|S| over all S with 1 <= |S| <= n/2.
// Only for n <= 24.
std::pair<double, VertexSet> graph_expansion_bruteforce(const WeightedGraph& g);

// Keeps edges internal to s, reindexes vertices to 0..|s|-1 following the
// sorted order of s. The degree bound delta is inherited.
WeightedGraph induced_subgraph(const WeightedGraph& g, const VertexSet& s);

// Connected components as vertex labels 0..k-1.
std::vector<int> component_labels(const WeightedGraph& g, int* count = nullptr);

}  // namespace exk

#endif
