#include "exk/graph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace exk {

namespace {

constexpr double kDegreeTol = 1e-9;

// Sums in ascending magnitude so degree comparisons are reproducible.
double stable_sum(std::vector<double> vals) {
    std::sort(vals.begin(), vals.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    double s = 0.0;
    for (double v : vals) s += v;
    return s;
}

}  // namespace

VertexSet::VertexSet(std::vector<int> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    for (std::size_t i = 0; i + 1 < members_.size(); ++i) {
        if (members_[i] == members_[i + 1])
            throw std::invalid_argument("VertexSet: duplicate vertex " +
                                        std::to_string(members_[i]));
    }
    if (!members_.empty() && members_.front() < 0)
        throw std::invalid_argument("VertexSet: negative vertex index");
}

VertexSet VertexSet::full(int n) {
    std::vector<int> m(n);
    for (int i = 0; i < n; ++i) m[i] = i;
    return VertexSet(std::move(m));
}

bool VertexSet::contains(int v) const {
    return std::binary_search(members_.begin(), members_.end(), v);
}

std::vector<char> VertexSet::mask(int n) const {
    if (!members_.empty() && members_.back() >= n)
        throw std::out_of_range("VertexSet: vertex index out of range");
    std::vector<char> m(n, 0);
    for (int v : members_) m[v] = 1;
    return m;
}

VertexSet VertexSet::complement(int n) const {
    auto m = mask(n);
    std::vector<int> rest;
    rest.reserve(n - size());
    for (int i = 0; i < n; ++i)
        if (!m[i]) rest.push_back(i);
    return VertexSet(std::move(rest));
}

Partition::Partition(std::vector<VertexSet> blocks, const VertexSet& ground)
    : blocks_(std::move(blocks)) {
    std::vector<int> all;
    for (const auto& b : blocks_)
        all.insert(all.end(), b.members().begin(), b.members().end());
    std::sort(all.begin(), all.end());
    for (std::size_t i = 0; i + 1 < all.size(); ++i)
        if (all[i] == all[i + 1])
            throw std::invalid_argument("Partition: blocks overlap at vertex " +
                                        std::to_string(all[i]));
    if (all != ground.members())
        throw std::invalid_argument("Partition: blocks do not cover the ground set");
}

WeightedGraph WeightedGraph::create(int n, std::vector<Edge> edges, double delta,
                                    bool regular) {
    if (n < 0) throw std::invalid_argument("WeightedGraph: negative vertex count");
    WeightedGraph g;
    g.n_ = n;
    for (auto& e : edges) {
        if (e.u == e.v)
            throw std::invalid_argument("WeightedGraph: self-loop at vertex " +
                                        std::to_string(e.u));
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            throw std::invalid_argument("WeightedGraph: edge endpoint out of range");
        if (!(e.w > 0.0))
            throw std::invalid_argument("WeightedGraph: nonpositive edge weight");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::pair(a.u, a.v) < std::pair(b.u, b.v);
    });
    for (std::size_t i = 0; i + 1 < edges.size(); ++i)
        if (edges[i].u == edges[i + 1].u && edges[i].v == edges[i + 1].v)
            throw std::invalid_argument("WeightedGraph: duplicate edge {" +
                                        std::to_string(edges[i].u) + "," +
                                        std::to_string(edges[i].v) + "}");
    g.edges_ = std::move(edges);

    g.adj_.assign(n, {});
    std::vector<std::vector<double>> incident(n);
    for (const auto& e : g.edges_) {
        g.adj_[e.u].emplace_back(e.v, e.w);
        g.adj_[e.v].emplace_back(e.u, e.w);
        incident[e.u].push_back(e.w);
        incident[e.v].push_back(e.w);
    }
    g.degrees_.resize(n);
    double maxdeg = 0.0;
    for (int v = 0; v < n; ++v) {
        g.degrees_[v] = stable_sum(incident[v]);
        maxdeg = std::max(maxdeg, g.degrees_[v]);
    }
    g.delta_ = delta < 0.0 ? maxdeg : delta;
    if (maxdeg > g.delta_ + kDegreeTol)
        throw std::invalid_argument("WeightedGraph: weighted degree exceeds delta");
    g.regular_ = regular;
    if (regular) {
        for (int v = 0; v < n; ++v)
            if (std::abs(g.degrees_[v] - g.delta_) > kDegreeTol)
                throw std::invalid_argument(
                    "WeightedGraph: declared regular but degree of vertex " +
                    std::to_string(v) + " deviates from delta");
    }
    return g;
}

const std::vector<std::pair<int, double>>& WeightedGraph::neighbors(int v) const {
    if (v < 0 || v >= n_) throw std::out_of_range("WeightedGraph: vertex out of range");
    return adj_[v];
}

int WeightedGraph::combinatorial_degree(int v) const {
    return static_cast<int>(neighbors(v).size());
}

int WeightedGraph::max_combinatorial_degree() const {
    int d = 0;
    for (int v = 0; v < n_; ++v) d = std::max(d, static_cast<int>(adj_[v].size()));
    return d;
}

Eigen::MatrixXd laplacian(const WeightedGraph& g) {
    Eigen::MatrixXd L = Eigen::MatrixXd::Zero(g.n(), g.n());
    for (const auto& e : g.edges()) {
        L(e.u, e.u) += e.w;
        L(e.v, e.v) += e.w;
        L(e.u, e.v) -= e.w;
        L(e.v, e.u) -= e.w;
    }
    return L;
}

double cut_weight(const WeightedGraph& g, const VertexSet& s) {
    auto m = s.mask(g.n());
    double cut = 0.0;
    for (const auto& e : g.edges())
        if (m[e.u] != m[e.v]) cut += e.w;
    return cut;
}

double set_expansion(const WeightedGraph& g, const VertexSet& s) {
    if (s.empty()) throw std::invalid_argument("set_expansion: empty set");
    return cut_weight(g, s) / s.size();
}

std::pair<double, VertexSet> graph_expansion_bruteforce(const WeightedGraph& g) {
    const int n = g.n();
    if (n < 2) throw std::invalid_argument("graph_expansion_bruteforce: n < 2");
    if (n > 24)
        throw std::invalid_argument("graph_expansion_bruteforce: n > 24 is not enumerable");

    // Gray-code walk over all subsets, maintaining the cut incrementally.
    std::vector<char> in(n, 0);
    double cut = 0.0;
    int cnt = 0;
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_bits = 0;
    std::uint32_t bits = 0;
    const std::uint32_t total = 1u << n;
    for (std::uint32_t k = 1; k < total; ++k) {
        const int v = std::countr_zero(k);
        bits ^= (1u << v);
        const bool entering = !in[v];
        in[v] = entering;
        cnt += entering ? 1 : -1;
        for (const auto& [u, w] : g.neighbors(v)) cut += in[u] == in[v] ? -w : w;
        if (cnt >= 1 && 2 * cnt <= n) {
            const double val = cut / cnt;
            if (val < best) {
                best = val;
                best_bits = bits;
            }
        }
    }
    std::vector<int> members;
    for (int v = 0; v < n; ++v)
        if (best_bits & (1u << v)) members.push_back(v);
    return {best, VertexSet(std::move(members))};
}

WeightedGraph induced_subgraph(const WeightedGraph& g, const VertexSet& s) {
    if (s.empty()) throw std::invalid_argument("induced_subgraph: empty set");
    auto m = s.mask(g.n());
    std::vector<int> local(g.n(), -1);
    const auto& mem = s.members();
    for (int i = 0; i < s.size(); ++i) local[mem[i]] = i;
    std::vector<Edge> edges;
    for (const auto& e : g.edges())
        if (m[e.u] && m[e.v]) edges.push_back({local[e.u], local[e.v], e.w});
    const bool regular = g.regular() && s.size() == g.n();
    return WeightedGraph::create(s.size(), std::move(edges), g.delta(), regular);
}

std::vector<int> component_labels(const WeightedGraph& g, int* count) {
    std::vector<int> label(g.n(), -1);
    int k = 0;
    std::vector<int> stack;
    for (int r = 0; r < g.n(); ++r) {
        if (label[r] >= 0) continue;
        label[r] = k;
        stack.push_back(r);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& [u, w] : g.neighbors(v)) {
                (void)w;
                if (label[u] < 0) {
                    label[u] = k;
                    stack.push_back(u);
                }
            }
        }
        ++k;
    }
    if (count) *count = k;
    return label;
}

}  // namespace exk
