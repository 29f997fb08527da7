#ifndef EXK_GREEDY_HPP
#define EXK_GREEDY_HPP

#include <optional>
#include <vector>

#include "exk/graph.hpp"

namespace exk {

// Result of the expander-or-partition decomposition. Either a set whose
// induced subgraph certifies lambda2 >= eps * delta (and has size at least
// 3/4 of the size cap), or a partition into blocks at most the cap with a
// bounded total boundary.
struct DecompositionOutcome {
    enum class Kind { Expander, SparsePartition };
    Kind kind = Kind::Expander;
    VertexSet set;                    // when Expander
    std::vector<VertexSet> partition; // when SparsePartition
    double eps_used = 0.0;
    double certificate = 0.0;         // lambda2 of the expander
    int outer_iterations = 0;
};

struct GreedyResult {
    VertexSet set;
    double eps_used = 0.0;
    double certificate = 0.0;
    // Partition outcomes from the eps levels that failed, largest eps first.
    std::vector<DecompositionOutcome> partitions_tried;
};

// Size cap given as an absolute vertex count.
DecompositionOutcome expander_or_partition_cap(const WeightedGraph& h, int cap,
                                               double eps);

// Convenience form with cap = floor(delta * n / 2).
DecompositionOutcome expander_or_partition(const WeightedGraph& h, double delta,
                                           double eps);

// Runs the decomposition over the geometric grid eps = 1/2, 1/4, ... until
// an expander appears. Fails below eps = 1e-12.
GreedyResult greedy_find_expander(const WeightedGraph& g, double delta);

}  // namespace exk

#endif
