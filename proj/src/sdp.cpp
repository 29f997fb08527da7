#include "exk/sdp.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "exk/spectral.hpp"

namespace exk {

using nlohmann::json;

SdpSolution SdpSolution::zero(const WeightedGraph& g) {
    SdpSolution s;
    s.x.assign(g.edges().size(), 0.0);
    return s;
}

SdpSolution make_solution(const WeightedGraph& g, std::vector<double> x,
                          std::vector<YEntry> y, double lambda) {
    if (x.size() != g.edges().size())
        throw std::invalid_argument("make_solution: x size does not match edge count");
    std::map<std::pair<int, int>, double> merged;
    for (auto& e : y) {
        if (e.u < 0 || e.v < 0 || e.u >= g.n() || e.v >= g.n())
            throw std::invalid_argument("make_solution: y pair out of range");
        if (e.u > e.v) std::swap(e.u, e.v);
        merged[{e.u, e.v}] += e.val;
    }
    SdpSolution sol;
    sol.x = std::move(x);
    sol.y.reserve(merged.size());
    for (const auto& [k, val] : merged) sol.y.push_back({k.first, k.second, val});
    sol.lambda = lambda;
    return sol;
}

std::vector<double> z_weights(const WeightedGraph& g, const SdpSolution& sol) {
    std::vector<double> z(g.n(), 0.0);
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        z[edges[i].u] = std::max(z[edges[i].u], sol.x[i]);
        z[edges[i].v] = std::max(z[edges[i].v], sol.x[i]);
    }
    return z;
}

std::vector<double> y_row_sums(const WeightedGraph& g, const SdpSolution& sol) {
    std::vector<double> r(g.n(), 0.0);
    for (const auto& e : sol.y) {
        r[e.u] += e.val;
        if (e.v != e.u) r[e.v] += e.val;
    }
    return r;
}

SdpSolution integral_solution(const WeightedGraph& g, const VertexSet& s) {
    if (s.size() < 2)
        throw std::invalid_argument("integral_solution: set must have at least 2 vertices");
    auto m = s.mask(g.n());
    std::vector<double> x(g.edges().size(), 0.0);
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (m[edges[i].u] && m[edges[i].v]) x[i] = edges[i].w;
    const double yval = 1.0 / s.size();
    std::vector<YEntry> y;
    const auto& mem = s.members();
    for (std::size_t i = 0; i < mem.size(); ++i)
        for (std::size_t j = i; j < mem.size(); ++j)
            y.push_back({mem[i], mem[j], yval});
    WeightedGraph sub = induced_subgraph(g, s);
    int comps = 0;
    component_labels(sub, &comps);
    const double lambda = comps > 1 ? 0.0 : lambda2(sub).value;
    return make_solution(g, std::move(x), std::move(y), lambda);
}

namespace {

Eigen::MatrixXd pencil_matrix(const WeightedGraph& g, const SdpSolution& sol,
                              double lambda) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(g.n(), g.n());
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const double w = sol.x[i];
        M(edges[i].u, edges[i].u) += w;
        M(edges[i].v, edges[i].v) += w;
        M(edges[i].u, edges[i].v) -= w;
        M(edges[i].v, edges[i].u) -= w;
    }
    for (const auto& e : sol.y) {
        if (e.u == e.v) continue;
        const double w = lambda * e.val;
        M(e.u, e.u) -= w;
        M(e.v, e.v) -= w;
        M(e.u, e.v) += w;
        M(e.v, e.u) += w;
    }
    return M;
}

double cut_x(const WeightedGraph& g, const SdpSolution& sol,
             const std::vector<char>& m) {
    double acc = 0.0;
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (m[edges[i].u] != m[edges[i].v]) acc += sol.x[i];
    return acc;
}

double cut_y(const SdpSolution& sol, const std::vector<char>& m) {
    double acc = 0.0;
    for (const auto& e : sol.y)
        if (e.u != e.v && m[e.u] != m[e.v]) acc += e.val;
    return acc;
}

}  // namespace

double lmi_margin(const WeightedGraph& g, const SdpSolution& sol) {
    return lmi_margin(g, sol, sol.lambda);
}

double lmi_margin(const WeightedGraph& g, const SdpSolution& sol, double lambda) {
    if (g.n() == 0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(pencil_matrix(g, sol, lambda));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("lmi_margin: eigensolver failed");
    return es.eigenvalues()[0];
}

FeasibilityReport check_feasible(const WeightedGraph& g, const SdpSolution& sol,
                                 double delta, std::optional<double> hstar,
                                 double tol) {
    if (sol.x.size() != g.edges().size())
        throw std::invalid_argument("check_feasible: dimension mismatch");
    FeasibilityReport rep;
    double xmax = 0.0;
    for (double v : sol.x) {
        if (v < 0.0) rep.x_nonneg = false;
        xmax = std::max(xmax, v);
    }
    rep.x_nonzero = xmax > 0.0;
    for (const auto& e : sol.y)
        if (e.val < 0.0) rep.y_nonneg = false;

    const auto z = z_weights(g, sol);
    const auto rows = y_row_sums(g, sol);
    const double dn = delta * g.n();

    rep.sum_y = std::numeric_limits<double>::infinity();
    rep.cap_y = std::numeric_limits<double>::infinity();
    std::vector<double> ymax(g.n(), 0.0);
    for (const auto& e : sol.y) {
        ymax[e.u] = std::max(ymax[e.u], e.val);
        ymax[e.v] = std::max(ymax[e.v], e.val);
    }
    for (int u = 0; u < g.n(); ++u) {
        rep.sum_y = std::min(rep.sum_y, rows[u] - z[u]);
        rep.cap_y = std::min(rep.cap_y, rows[u] - dn * ymax[u]);
    }
    if (g.n() == 0) rep.sum_y = rep.cap_y = 0.0;

    rep.lmi = lmi_margin(g, sol);

    if (hstar) {
        double sx = 0.0, sz = 0.0;
        for (double v : sol.x) sx += v;
        for (double v : z) sz += v;
        rep.density = sx - (g.delta() - *hstar) / 2.0 * sz;
    }

    rep.feasible = true;
    auto fail = [&](const std::string& why) {
        rep.feasible = false;
        if (rep.reason.empty()) rep.reason = why;
    };
    if (!rep.x_nonneg) fail("x >= 0 violated");
    if (!rep.y_nonneg) fail("y >= 0 violated");
    if (!rep.x_nonzero) fail("x != 0 violated");
    if (rep.lmi < -tol) fail("spectral constraint violated");
    if (rep.sum_y < -tol) fail("row-sum constraint violated");
    if (rep.cap_y < -tol) fail("spreading constraint violated");
    if (rep.density && *rep.density < -tol) fail("density constraint violated");
    return rep;
}

double weighted_expansion_x(const WeightedGraph& g, const SdpSolution& sol,
                            const VertexSet& s) {
    if (s.empty()) throw std::invalid_argument("weighted_expansion_x: empty set");
    const auto z = z_weights(g, sol);
    double zs = 0.0;
    for (int v : s.members()) zs += z[v];
    if (zs <= 0.0) throw std::invalid_argument("weighted_expansion_x: z(S) = 0");
    return cut_x(g, sol, s.mask(g.n())) / zs;
}

double weighted_expansion_y(const WeightedGraph& g, const SdpSolution& sol,
                            const VertexSet& s) {
    if (s.empty()) throw std::invalid_argument("weighted_expansion_y: empty set");
    const auto z = z_weights(g, sol);
    double zs = 0.0;
    for (int v : s.members()) zs += z[v];
    if (zs <= 0.0) throw std::invalid_argument("weighted_expansion_y: z(S) = 0");
    return cut_y(sol, s.mask(g.n())) / zs;
}

SupportRestriction restrict_to_support(const WeightedGraph& g,
                                       const SdpSolution& sol) {
    const auto z = z_weights(g, sol);
    std::vector<int> keep;
    for (int v = 0; v < g.n(); ++v)
        if (z[v] > 0.0) keep.push_back(v);
    if (keep.empty())
        throw std::invalid_argument("restrict_to_support: empty support (x = 0)");
    std::vector<int> local(g.n(), -1);
    for (std::size_t i = 0; i < keep.size(); ++i) local[keep[i]] = static_cast<int>(i);

    VertexSet s(keep);
    WeightedGraph sub = induced_subgraph(g, s);
    // Edges incident to a zero-weight vertex carry x = 0, so restricting x
    // to internal edges loses no mass.
    std::map<std::pair<int, int>, double> xmap;
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
        if (local[edges[i].u] >= 0 && local[edges[i].v] >= 0)
            xmap[{local[edges[i].u], local[edges[i].v]}] = sol.x[i];
    std::vector<double> x(sub.edges().size(), 0.0);
    for (std::size_t i = 0; i < sub.edges().size(); ++i)
        x[i] = xmap[{sub.edges()[i].u, sub.edges()[i].v}];
    std::vector<YEntry> y;
    for (const auto& e : sol.y)
        if (local[e.u] >= 0 && local[e.v] >= 0)
            y.push_back({local[e.u], local[e.v], e.val});
    SdpSolution restricted = make_solution(sub, std::move(x), std::move(y), sol.lambda);
    return {std::move(sub), std::move(restricted), std::move(keep)};
}

json solution_to_json(const WeightedGraph& g, const SdpSolution& sol) {
    json jx = json::array();
    const auto& edges = g.edges();
    for (std::size_t i = 0; i < edges.size(); ++i)
        jx.push_back({edges[i].u, edges[i].v, sol.x[i]});
    json jy = json::array();
    for (const auto& e : sol.y) jy.push_back({e.u, e.v, e.val});
    return json{{"lambda", sol.lambda}, {"x", std::move(jx)}, {"y", std::move(jy)}};
}

SdpSolution solution_from_json(const WeightedGraph& g, const json& j) {
    if (!j.is_object() || !j.contains("lambda"))
        throw std::invalid_argument("solution json: expected object with lambda");
    std::map<std::pair<int, int>, double> xmap;
    for (const auto& e : j.value("x", json::array())) {
        int u = e[0].get<int>(), v = e[1].get<int>();
        if (u > v) std::swap(u, v);
        xmap[{u, v}] += e[2].get<double>();
    }
    std::vector<double> x(g.edges().size(), 0.0);
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
        auto it = xmap.find({g.edges()[i].u, g.edges()[i].v});
        if (it != xmap.end()) {
            x[i] = it->second;
            xmap.erase(it);
        }
    }
    for (const auto& [k, val] : xmap)
        if (val != 0.0)
            throw std::invalid_argument("solution json: x value on non-edge {" +
                                        std::to_string(k.first) + "," +
                                        std::to_string(k.second) + "}");
    std::vector<YEntry> y;
    for (const auto& e : j.value("y", json::array()))
        y.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
    return make_solution(g, std::move(x), std::move(y), j.at("lambda").get<double>());
}

SdpSolution load_solution(const WeightedGraph& g, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open solution file: " + path);
    json j;
    in >> j;
    return solution_from_json(g, j);
}

void save_solution(const WeightedGraph& g, const SdpSolution& sol,
                   const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write solution file: " + path);
    out << solution_to_json(g, sol).dump(2) << "\n";
}

json feasibility_to_json(const FeasibilityReport& rep) {
    json j{{"feasible", rep.feasible},
           {"residuals",
            {{"lmi", rep.lmi}, {"sum_y", rep.sum_y}, {"cap_y", rep.cap_y}}},
           {"x_nonneg", rep.x_nonneg},
           {"y_nonneg", rep.y_nonneg},
           {"x_nonzero", rep.x_nonzero}};
    if (rep.density) j["residuals"]["density"] = *rep.density;
    if (!rep.reason.empty()) j["reason"] = rep.reason;
    return j;
}

}  // namespace exk
