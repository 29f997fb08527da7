#include "exk/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "exk/spectral.hpp"

namespace exk {

DecompositionOutcome expander_or_partition_cap(const WeightedGraph& h, int cap,
                                               double eps) {
    if (cap < 1) throw std::invalid_argument("expander_or_partition: cap below 1 vertex");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("expander_or_partition: eps must be in (0,1)");

    std::vector<VertexSet> blocks{VertexSet::full(h.n())};
    DecompositionOutcome out;
    out.eps_used = eps;

    bool oversized = h.n() > cap;
    while (oversized) {
        ++out.outer_iterations;
        // Process every currently-oversized block, largest first.
        std::vector<std::size_t> todo;
        for (std::size_t i = 0; i < blocks.size(); ++i)
            if (blocks[i].size() > cap) todo.push_back(i);
        std::stable_sort(todo.begin(), todo.end(), [&](std::size_t a, std::size_t b) {
            return blocks[a].size() > blocks[b].size();
        });
        std::vector<VertexSet> next;
        std::vector<char> consumed(blocks.size(), 0);
        for (std::size_t i : todo) {
            const VertexSet& block = blocks[i];
            WeightedGraph sub = induced_subgraph(h, block);
            BisectionOutcome bo = spectral_bisection(sub, eps);
            std::vector<int> mapped;
            mapped.reserve(bo.set.size());
            for (int loc : bo.set.members()) mapped.push_back(block.members()[loc]);
            if (bo.kind == BisectionOutcome::Kind::ExpanderFound) {
                out.kind = DecompositionOutcome::Kind::Expander;
                out.set = VertexSet(std::move(mapped));
                out.certificate = bo.certificate;
                return out;
            }
            VertexSet side(std::move(mapped));
            std::vector<int> rest;
            rest.reserve(block.size() - side.size());
            auto m = side.mask(h.n());
            for (int v : block.members())
                if (!m[v]) rest.push_back(v);
            next.push_back(std::move(side));
            next.emplace_back(std::move(rest));
            consumed[i] = 1;
        }
        std::vector<VertexSet> merged;
        for (std::size_t i = 0; i < blocks.size(); ++i)
            if (!consumed[i]) merged.push_back(std::move(blocks[i]));
        merged.insert(merged.end(), std::make_move_iterator(next.begin()),
                      std::make_move_iterator(next.end()));
        blocks = std::move(merged);
        oversized = std::any_of(blocks.begin(), blocks.end(),
                                [&](const VertexSet& b) { return b.size() > cap; });
    }
    out.kind = DecompositionOutcome::Kind::SparsePartition;
    std::sort(blocks.begin(), blocks.end(), [](const VertexSet& a, const VertexSet& b) {
        return a.members() < b.members();
    });
    Partition check(blocks, VertexSet::full(h.n()));
    out.partition = std::move(blocks);
    return out;
}

DecompositionOutcome expander_or_partition(const WeightedGraph& h, double delta,
                                           double eps) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("expander_or_partition: delta must be in (0,1)");
    const int cap = static_cast<int>(std::floor(delta * h.n() / 2.0 + 1e-9));
    return expander_or_partition_cap(h, cap, eps);
}

GreedyResult greedy_find_expander(const WeightedGraph& g, double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("greedy_find_expander: delta must be in (0,1)");
    GreedyResult res;
    for (double eps = 0.5; eps >= 1e-12; eps /= 2.0) {
        DecompositionOutcome out = expander_or_partition(g, delta, eps);
        if (out.kind == DecompositionOutcome::Kind::Expander) {
            res.set = std::move(out.set);
            res.eps_used = eps;
            res.certificate = out.certificate;
            return res;
        }
        res.partitions_tried.push_back(std::move(out));
    }
    throw std::runtime_error(
        "greedy_find_expander: eps grid exhausted below 1e-12; no nontrivial "
        "expander at this delta");
}

}  // namespace exk
