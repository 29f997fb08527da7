#include "exk/instances.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <random>
#include <set>
#include <stdexcept>

#include "exk/graph_io.hpp"
#include "exk/spectral.hpp"

namespace exk {

using nlohmann::json;

namespace {

constexpr int kMaxInstanceVertices = 200000;

using Rng = std::mt19937_64;
using EdgeKey = std::pair<int, int>;

EdgeKey key(int u, int v) { return {std::min(u, v), std::max(u, v)}; }

// d-regular simple graph as a union of d perfect matchings (even n) or d/2
// random cycles (odd n, even d), resampling any round that collides.
std::vector<EdgeKey> regular_edge_set(int n, int d, Rng& rng) {
    if (n <= d) throw std::invalid_argument("regular graph needs d < n");
    if ((static_cast<long>(n) * d) % 2 != 0)
        throw std::invalid_argument("regular graph needs n*d even");
    std::set<EdgeKey> edges;
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    const bool cycles = n % 2 != 0;
    const int rounds = cycles ? d / 2 : d;
    for (int r = 0; r < rounds; ++r) {
        bool done = false;
        for (int attempt = 0; attempt < 500 && !done; ++attempt) {
            std::shuffle(perm.begin(), perm.end(), rng);
            std::vector<EdgeKey> fresh;
            bool ok = true;
            if (cycles) {
                for (int i = 0; i < n && ok; ++i) {
                    auto e = key(perm[i], perm[(i + 1) % n]);
                    ok = !edges.count(e) &&
                         std::find(fresh.begin(), fresh.end(), e) == fresh.end();
                    fresh.push_back(e);
                }
            } else {
                for (int i = 0; i + 1 < n && ok; i += 2) {
                    auto e = key(perm[i], perm[i + 1]);
                    ok = !edges.count(e);
                    fresh.push_back(e);
                }
            }
            if (ok) {
                edges.insert(fresh.begin(), fresh.end());
                done = true;
            }
        }
        if (!done)
            throw std::runtime_error("regular graph sampling exhausted its retry cap");
    }
    return {edges.begin(), edges.end()};
}

// Pairs stubs of the requested degrees, then repairs self-loops and
// duplicates by random edge swaps.
std::vector<EdgeKey> degree_sequence_edges(const std::vector<int>& degree,
                                           const std::set<EdgeKey>& forbidden,
                                           Rng& rng) {
    std::vector<int> stubs;
    for (std::size_t v = 0; v < degree.size(); ++v)
        for (int k = 0; k < degree[v]; ++k) stubs.push_back(static_cast<int>(v));
    if (stubs.size() % 2 != 0)
        throw std::invalid_argument("degree sequence has odd total");
    std::shuffle(stubs.begin(), stubs.end(), rng);
    std::vector<EdgeKey> pairs;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2)
        pairs.push_back({stubs[i], stubs[i + 1]});

    std::uniform_int_distribution<std::size_t> pick(0, pairs.empty() ? 0 : pairs.size() - 1);
    for (long iter = 0; iter < 2000000; ++iter) {
        std::set<EdgeKey> seen;
        std::size_t bad_at = pairs.size();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            auto e = key(pairs[i].first, pairs[i].second);
            if (pairs[i].first == pairs[i].second || forbidden.count(e) ||
                !seen.insert(e).second) {
                bad_at = i;
                break;
            }
        }
        if (bad_at == pairs.size()) {
            std::vector<EdgeKey> out;
            for (auto& p : pairs) out.push_back(key(p.first, p.second));
            return out;
        }
        std::swap(pairs[bad_at].second, pairs[pick(rng)].second);
    }
    throw std::runtime_error("degree sequence repair exhausted its retry cap");
}

double certified_pencil_lambda(const WeightedGraph& g, const SdpSolution& sol,
                               double hi) {
    if (lmi_margin(g, sol, hi) >= -1e-8) return hi;
    double lo = 0.0;
    while (hi - lo > 1e-7 * (1.0 + hi)) {
        const double mid = (lo + hi) / 2.0;
        if (lmi_margin(g, sol, mid) >= -1e-8)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

InstanceBundle hypercube_blowup(int dim, int cloud) {
    if (dim < 2) throw std::invalid_argument("hypercube_blowup: dim must be >= 2");
    if (cloud < 2) throw std::invalid_argument("hypercube_blowup: cloud must be >= 2");
    const long hn = 1L << dim;
    const long n = hn * cloud;
    if (n > kMaxInstanceVertices)
        throw std::invalid_argument("hypercube_blowup: vertex count exceeds the cap");

    const double w = 1.0 / cloud;
    std::vector<Edge> edges;
    for (long i = 0; i < hn; ++i)
        for (int b = 0; b < dim; ++b) {
            const long j = i ^ (1L << b);
            if (j < i) continue;
            for (int a = 0; a < cloud; ++a)
                for (int c = 0; c < cloud; ++c)
                    edges.push_back({static_cast<int>(i * cloud + a),
                                     static_cast<int>(j * cloud + c), w});
        }
    InstanceBundle b;
    b.graph = WeightedGraph::create(static_cast<int>(n), std::move(edges),
                                    static_cast<double>(dim), true);
    b.generator = "hypercube-blowup";
    b.params = json{{"dim", dim}, {"cloud", cloud}};
    b.delta = std::ldexp(1.0, -dim);  // 2^-dim, so delta * n = cloud

    std::vector<double> x(b.graph.edges().size(), 1.0);
    std::vector<YEntry> y;
    const double yv = 1.0 / cloud;
    for (long i = 0; i < hn; ++i)
        for (int a = 0; a < cloud; ++a)
            for (int c = a; c < cloud; ++c)
                y.push_back({static_cast<int>(i * cloud + a),
                             static_cast<int>(i * cloud + c), yv});
    SdpSolution sol = make_solution(b.graph, std::move(x), std::move(y), 0.0);
    sol.lambda = certified_pencil_lambda(b.graph, sol, 2.0 * dim * cloud + 1.0);
    b.measured["lambda"] = sol.lambda;
    b.measured["c"] = sol.lambda / dim;
    b.planted_sdp = std::move(sol);

    for (int d = 0; d < dim; ++d) {
        std::vector<int> zero, one;
        for (long i = 0; i < hn; ++i) {
            auto& side = (i >> d) & 1 ? one : zero;
            for (int a = 0; a < cloud; ++a)
                side.push_back(static_cast<int>(i * cloud + a));
        }
        b.witnesses.emplace_back(std::move(zero));
        b.witnesses.emplace_back(std::move(one));
    }
    return b;
}

InstanceBundle clique_with_paths(int clique_n, double delta) {
    if (clique_n < 2) throw std::invalid_argument("clique_with_paths: clique_n >= 2");
    const double len_real = 1.0 / delta;
    const int len = static_cast<int>(std::lround(len_real));
    if (len < 1 || std::abs(len_real - len) > 1e-9)
        throw std::invalid_argument("clique_with_paths: 1/delta must be a positive integer");
    const long n = clique_n + static_cast<long>(clique_n) * len;
    if (n > kMaxInstanceVertices)
        throw std::invalid_argument("clique_with_paths: vertex count exceeds the cap");

    const double cw = 1.0 / (clique_n - 1);
    std::vector<Edge> edges;
    for (int u = 0; u < clique_n; ++u)
        for (int v = u + 1; v < clique_n; ++v) edges.push_back({u, v, cw});
    int next = clique_n;
    for (int u = 0; u < clique_n; ++u) {
        int prev = u;
        for (int k = 0; k < len; ++k) {
            edges.push_back({prev, next, 1.0});
            prev = next++;
        }
    }
    InstanceBundle b;
    b.graph = WeightedGraph::create(static_cast<int>(n), std::move(edges));
    b.generator = "clique-paths";
    b.params = json{{"clique_n", clique_n}, {"delta", delta}};
    b.delta = delta;
    std::vector<int> clique(clique_n);
    std::iota(clique.begin(), clique.end(), 0);
    b.planted_set = VertexSet(std::move(clique));
    b.measured["lambda2_planted"] =
        lambda2(induced_subgraph(b.graph, *b.planted_set)).value;
    return b;
}

InstanceBundle planted_expander(int n, double delta, int d_in, int d_out,
                                std::uint64_t seed) {
    if (n < 4 || n > kMaxInstanceVertices)
        throw std::invalid_argument("planted_expander: bad n");
    if (!(delta > 0.0 && delta <= 0.5))
        throw std::invalid_argument("planted_expander: delta must be in (0, 1/2]");
    const int s = static_cast<int>(std::ceil(delta * n));
    const int o = n - s;
    const int reg = d_in + d_out;
    if (d_in < 1 || d_in >= s || d_out < 0 || reg >= n)
        throw std::invalid_argument("planted_expander: degree budget not realizable");
    if ((static_cast<long>(s) * d_in) % 2 != 0)
        throw std::invalid_argument("planted_expander: s * d_in must be even");
    if (static_cast<long>(s) * d_out > static_cast<long>(o) * reg)
        throw std::invalid_argument("planted_expander: too many cross edges");

    Rng rng(seed);
    for (int attempt = 0; attempt < 50; ++attempt) {
        std::set<EdgeKey> all;
        auto inside = regular_edge_set(s, d_in, rng);
        all.insert(inside.begin(), inside.end());

        std::vector<int> cross_deg(n, 0);
        std::vector<int> outs(o);
        std::iota(outs.begin(), outs.end(), s);
        bool ok = true;
        for (int r = 0; r < d_out && ok; ++r) {
            bool done = false;
            for (int tries = 0; tries < 500 && !done; ++tries) {
                std::shuffle(outs.begin(), outs.end(), rng);
                std::vector<EdgeKey> fresh;
                bool clean = true;
                for (int i = 0; i < s && clean; ++i) {
                    auto e = key(i, outs[i]);
                    clean = !all.count(e);
                    fresh.push_back(e);
                }
                if (clean) {
                    all.insert(fresh.begin(), fresh.end());
                    for (auto& e : fresh) {
                        ++cross_deg[e.first];
                        ++cross_deg[e.second];
                    }
                    done = true;
                }
            }
            ok = done;
        }
        if (!ok) continue;

        std::vector<int> residual(o);
        long total = 0;
        for (int v = 0; v < o; ++v) {
            residual[v] = reg - cross_deg[s + v];
            if (residual[v] < 0) { ok = false; break; }
            total += residual[v];
        }
        if (!ok || total % 2 != 0) continue;
        std::set<EdgeKey> forbidden;  // none inside the outside block yet
        std::vector<EdgeKey> fill;
        try {
            fill = degree_sequence_edges(residual, forbidden, rng);
        } catch (const std::runtime_error&) {
            continue;
        }
        for (auto& e : fill) all.insert(key(e.first + s, e.second + s));

        std::vector<Edge> edges;
        edges.reserve(all.size());
        for (auto& e : all) edges.push_back({e.first, e.second, 1.0});
        WeightedGraph g = WeightedGraph::create(n, std::move(edges),
                                                static_cast<double>(reg), true);
        std::vector<int> planted(s);
        std::iota(planted.begin(), planted.end(), 0);
        VertexSet ps(std::move(planted));
        WeightedGraph sub = induced_subgraph(g, ps);
        int comps = 0;
        component_labels(sub, &comps);
        if (comps > 1) continue;  // retry until the planted subgraph is connected

        InstanceBundle b;
        b.graph = std::move(g);
        b.generator = "planted";
        b.params = json{
            {"n", n}, {"delta", delta}, {"d_in", d_in}, {"d_out", d_out}};
        b.seed = seed;
        b.delta = delta;
        b.measured["lambda2_planted"] = lambda2(sub).value;
        b.measured["h_planted"] = set_expansion(b.graph, ps);
        b.planted_sdp = integral_solution(b.graph, ps);
        b.planted_set = std::move(ps);
        return b;
    }
    throw std::runtime_error("planted_expander: seed-exhausted retry cap");
}

WeightedGraph random_regular(int n, int d, std::uint64_t seed) {
    if (d >= n || d < 1) throw std::invalid_argument("random_regular: need 1 <= d < n");
    if ((static_cast<long>(n) * d) % 2 != 0)
        throw std::invalid_argument("random_regular: n*d must be even");
    Rng rng(seed);
    auto keys = regular_edge_set(n, d, rng);
    std::vector<Edge> edges;
    edges.reserve(keys.size());
    for (auto& e : keys) edges.push_back({e.first, e.second, 1.0});
    return WeightedGraph::create(n, std::move(edges), static_cast<double>(d), true);
}

std::string save_bundle(const InstanceBundle& b, const std::string& dir,
                        const std::string& name) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const std::string graph_file = name + "_graph.json";
    save_graph(b.graph, (fs::path(dir) / graph_file).string());
    json side{{"generator", b.generator}, {"params", b.params},
              {"seed", b.seed},           {"delta", b.delta},
              {"graph_file", graph_file}, {"measured", b.measured}};
    if (b.planted_set) side["planted_set"] = b.planted_set->members();
    if (b.planted_sdp) {
        const std::string sdp_file = name + "_sdp.json";
        save_solution(b.graph, *b.planted_sdp, (fs::path(dir) / sdp_file).string());
        side["planted_sdp_file"] = sdp_file;
    }
    if (!b.witnesses.empty()) {
        json w = json::array();
        for (const auto& s : b.witnesses) w.push_back(s.members());
        side["witnesses"] = std::move(w);
    }
    const std::string side_path = (fs::path(dir) / (name + "_bundle.json")).string();
    std::ofstream out(side_path);
    out << side.dump(2) << "\n";
    return side_path;
}

InstanceBundle load_bundle(const std::string& sidecar_path) {
    namespace fs = std::filesystem;
    std::ifstream in(sidecar_path);
    if (!in) throw std::invalid_argument("cannot open bundle file: " + sidecar_path);
    json side;
    in >> side;
    const fs::path dir = fs::path(sidecar_path).parent_path();
    InstanceBundle b;
    b.graph = load_graph((dir / side.at("graph_file").get<std::string>()).string());
    b.generator = side.value("generator", "");
    b.params = side.value("params", json::object());
    b.seed = side.value("seed", 0ULL);
    b.delta = side.value("delta", 0.0);
    b.measured = side.value("measured", json::object());
    if (side.contains("planted_set"))
        b.planted_set = VertexSet(side["planted_set"].get<std::vector<int>>());
    if (side.contains("planted_sdp_file"))
        b.planted_sdp = load_solution(
            b.graph, (dir / side["planted_sdp_file"].get<std::string>()).string());
    for (const auto& w : side.value("witnesses", json::array()))
        b.witnesses.emplace_back(w.get<std::vector<int>>());
    return b;
}

}  // namespace exk
