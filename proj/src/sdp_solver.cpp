#include "exk/sdp_solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace exk {

namespace {

struct Workspace {
    const WeightedGraph& g;
    double delta_n;
    std::optional<double> hstar;
    std::vector<std::pair<int, int>> pairs;          // u <= v, sorted
    std::vector<std::vector<int>> rows;              // vertex -> pair indices
    std::vector<double> x, y, z;

    explicit Workspace(const WeightedGraph& graph) : g(graph) {}

    double row_sum(int u) const {
        double s = 0.0;
        for (int p : rows[u]) s += y[p];
        return s;
    }

    void clip_nonneg() {
        for (auto& v : x) v = std::max(v, 0.0);
        for (auto& v : y) v = std::max(v, 0.0);
        for (auto& v : z) v = std::max(v, 0.0);
    }

    // One cyclic pass of projections onto the linear constraints.
    void project_linear_once() {
        clip_nonneg();
        const auto& edges = g.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            for (int end : {edges[i].u, edges[i].v}) {
                if (x[i] > z[end]) {
                    const double t = (x[i] - z[end]) / 2.0;
                    x[i] -= t;
                    z[end] += t;
                }
            }
        }
        for (int u = 0; u < g.n(); ++u) {
            const double c = row_sum(u) - z[u];
            if (c < 0.0) {
                const double d = -c / (rows[u].size() + 1.0);
                for (int p : rows[u]) y[p] += d;
                z[u] -= d;
            }
        }
        for (int u = 0; u < g.n(); ++u) {
            if (rows[u].empty()) continue;
            int worst = rows[u][0];
            for (int p : rows[u])
                if (y[p] > y[worst]) worst = p;
            const double c = row_sum(u) - delta_n * y[worst];
            if (c < 0.0) {
                const double coef = 1.0 - delta_n;
                const double norm2 = (rows[u].size() - 1.0) + coef * coef;
                const double d = -c / norm2;
                for (int p : rows[u]) y[p] += p == worst ? d * coef : d;
            }
        }
        if (hstar) {
            double sx = 0.0, sz = 0.0;
            for (double v : x) sx += v;
            for (double v : z) sz += v;
            const double coef = (g.delta() - *hstar) / 2.0;
            const double c = sx - coef * sz;
            if (c < 0.0) {
                const double norm2 = x.size() + g.n() * coef * coef;
                const double d = -c / norm2;
                for (auto& v : x) v += d;
                for (auto& v : z) v -= d * coef;
            }
        }
        double sz = 0.0;
        for (double v : z) sz += v;
        const double shift = (1.0 - sz) / g.n();
        for (auto& v : z) v += shift;
    }

    double linear_residual() const {
        double worst = 0.0;
        for (double v : x) worst = std::min(worst, v);
        for (double v : y) worst = std::min(worst, v);
        const auto& edges = g.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            worst = std::min(worst, z[edges[i].u] - x[i]);
            worst = std::min(worst, z[edges[i].v] - x[i]);
        }
        for (int u = 0; u < g.n(); ++u) {
            const double r = row_sum(u);
            worst = std::min(worst, r - z[u]);
            for (int p : rows[u]) worst = std::min(worst, r - delta_n * y[p]);
        }
        if (hstar) {
            double sx = 0.0, sz = 0.0;
            for (double v : x) sx += v;
            for (double v : z) sz += v;
            worst = std::min(worst, sx - (g.delta() - *hstar) / 2.0 * sz);
        }
        return worst;
    }

    // Min eigenpair of sum x_e L_e - lambda sum y_uv L_uv.
    std::pair<double, Eigen::VectorXd> pencil_bottom(double lambda) const {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(g.n(), g.n());
        const auto& edges = g.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            M(edges[i].u, edges[i].u) += x[i];
            M(edges[i].v, edges[i].v) += x[i];
            M(edges[i].u, edges[i].v) -= x[i];
            M(edges[i].v, edges[i].u) -= x[i];
        }
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto [u, v] = pairs[p];
            if (u == v) continue;
            const double wy = lambda * y[p];
            M(u, u) -= wy;
            M(v, v) -= wy;
            M(u, v) += wy;
            M(v, u) += wy;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
        return {es.eigenvalues()[0], es.eigenvectors().col(0)};
    }

    // Subgradient step along the violated eigendirection: raises the x-side
    // of the quadratic form and lowers the y-side.
    void spectral_repair(double lambda, double mu, const Eigen::VectorXd& v) {
        const auto& edges = g.edges();
        std::vector<double> a(edges.size());
        double a2 = 0.0;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const double d = v[edges[i].u] - v[edges[i].v];
            a[i] = d * d;
            a2 += a[i] * a[i];
        }
        std::vector<double> b(pairs.size(), 0.0);
        double b2 = 0.0;
        for (std::size_t p = 0; p < pairs.size(); ++p) {
            const auto [pu, pv] = pairs[p];
            if (pu == pv) continue;
            const double d = v[pu] - v[pv];
            b[p] = d * d;
            b2 += b[p] * b[p];
        }
        const double denom = a2 + lambda * lambda * b2;
        if (denom <= 0.0) return;
        const double eta = 1.5 * (-mu) / denom;
        for (std::size_t i = 0; i < edges.size(); ++i) x[i] += eta * a[i];
        for (std::size_t p = 0; p < pairs.size(); ++p)
            y[p] = std::max(0.0, y[p] - eta * lambda * b[p]);
    }

    SdpSolution export_solution(double lambda) const {
        std::vector<YEntry> ents;
        ents.reserve(pairs.size());
        for (std::size_t p = 0; p < pairs.size(); ++p)
            if (y[p] > 0.0) ents.push_back({pairs[p].first, pairs[p].second, y[p]});
        return make_solution(g, x, std::move(ents), lambda);
    }
};

std::vector<std::pair<int, int>> distance2_pairs(const WeightedGraph& g) {
    std::set<std::pair<int, int>> out;
    for (int u = 0; u < g.n(); ++u) {
        out.insert({u, u});
        for (const auto& [v, w1] : g.neighbors(u)) {
            (void)w1;
            out.insert({std::min(u, v), std::max(u, v)});
            for (const auto& [t, w2] : g.neighbors(v)) {
                (void)w2;
                if (t != u) out.insert({std::min(u, t), std::max(u, t)});
            }
        }
    }
    return {out.begin(), out.end()};
}

std::vector<std::pair<int, int>> hint_pairs(const WeightedGraph& g,
                                            const std::vector<VertexSet>& blocks) {
    std::set<std::pair<int, int>> out;
    for (int u = 0; u < g.n(); ++u) out.insert({u, u});
    for (const auto& b : blocks) {
        const auto& m = b.members();
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = i; j < m.size(); ++j) out.insert({m[i], m[j]});
    }
    return {out.begin(), out.end()};
}

enum class Verdict { Certified, Undetermined };

Verdict try_lambda(Workspace& ws, double lambda, const SolverOptions& opts,
                   double delta, SdpSolution* certified, int* iterations) {
    double best_res = -std::numeric_limits<double>::max();
    int stall = 0;
    for (int iter = 0; iter < opts.max_proj_iters; ++iter) {
        ws.project_linear_once();
        auto [mu, vec] = ws.pencil_bottom(lambda);
        const double res = std::min(ws.linear_residual(), mu);
        if (res >= -opts.feas_tol * 0.9) {
            SdpSolution cand = ws.export_solution(lambda);
            FeasibilityReport rep =
                check_feasible(ws.g, cand, delta, ws.hstar, opts.feas_tol);
            if (rep.feasible) {
                *certified = std::move(cand);
                *iterations = iter + 1;
                return Verdict::Certified;
            }
        }
        if (mu < -opts.feas_tol * 0.1) ws.spectral_repair(lambda, mu, vec);
        if (res > best_res + 1e-3 * std::abs(best_res) + 1e-12) {
            best_res = res;
            stall = 0;
        } else if (++stall > 80) {
            *iterations = iter + 1;
            return Verdict::Undetermined;
        }
    }
    *iterations = opts.max_proj_iters;
    return Verdict::Undetermined;
}

// Pushes the linear residuals of a certified point toward zero so that
// downstream expansion checks see clean constraint values, then finds the
// largest lambda its pencil still supports.
double polish(Workspace& ws, double target) {
    for (int iter = 0; iter < 20000; ++iter) {
        ws.project_linear_once();
        if (iter % 16 == 15 && ws.linear_residual() >= -target) break;
    }
    return ws.linear_residual();
}

double margin_lambda(const WeightedGraph& g, const SdpSolution& sol, double hi) {
    double lo = 0.0;
    if (lmi_margin(g, sol, hi) >= -1e-9) return hi;
    for (int i = 0; i < 60 && hi - lo > 1e-12 * (1.0 + hi); ++i) {
        const double mid = (lo + hi) / 2.0;
        if (lmi_margin(g, sol, mid) >= -1e-9)
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace

SolveResult solve_sdp(const WeightedGraph& g, double delta,
                      std::optional<double> hstar, const SolverOptions& opts,
                      const std::optional<SdpSolution>& warm_start) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("solve_sdp: delta must be in (0, 1]");
    if (!g.regular())
        throw std::invalid_argument("solve_sdp: graph must be declared regular");
    if (g.edges().empty())
        throw InfeasibleError("solve_sdp: graph has no edges, x != 0 cannot hold");
    if (!(opts.bisect_tol > 0.0 && opts.feas_tol > 0.0))
        throw std::invalid_argument("solve_sdp: tolerances must be positive");

    Workspace ws(g);
    ws.delta_n = delta * g.n();
    ws.hstar = hstar;
    ws.pairs = opts.cluster_hint ? hint_pairs(g, *opts.cluster_hint)
                                 : distance2_pairs(g);
    if (warm_start) {
        std::set<std::pair<int, int>> sup(ws.pairs.begin(), ws.pairs.end());
        for (const auto& e : warm_start->y)
            if (e.val > 0.0) sup.insert({e.u, e.v});
        ws.pairs.assign(sup.begin(), sup.end());
    }
    if (ws.pairs.size() > 2'000'000)
        throw std::invalid_argument("solve_sdp: y support too large at this scale");
    ws.rows.assign(g.n(), {});
    for (std::size_t p = 0; p < ws.pairs.size(); ++p) {
        ws.rows[ws.pairs[p].first].push_back(static_cast<int>(p));
        if (ws.pairs[p].second != ws.pairs[p].first)
            ws.rows[ws.pairs[p].second].push_back(static_cast<int>(p));
    }

    SolveResult result;
    result.y_support_mode = opts.cluster_hint ? "cluster-hint" : "distance-2";
    result.y_support_size = ws.pairs.size();

    double lo = opts.lambda_lo;
    double hi = opts.lambda_hi > 0.0 ? opts.lambda_hi : 4.0 * g.delta();
    if (!(lo < hi)) throw std::invalid_argument("solve_sdp: invalid lambda bracket");

    auto seed_point = [&](const SdpSolution& from) {
        std::map<std::pair<int, int>, double> ymap;
        for (const auto& e : from.y) ymap[{e.u, e.v}] = e.val;
        ws.x = from.x;
        ws.y.assign(ws.pairs.size(), 0.0);
        for (std::size_t p = 0; p < ws.pairs.size(); ++p) {
            auto it = ymap.find(ws.pairs[p]);
            if (it != ymap.end()) ws.y[p] = it->second;
        }
        ws.z = z_weights(g, from);
        // All constraints are covariant under joint (x, y, z) scaling, so a
        // feasible seed can be brought onto the sum(z) = 1 slice exactly.
        double sz = 0.0;
        for (double v : ws.z) sz += v;
        if (sz > 0.0) {
            for (auto& v : ws.x) v /= sz;
            for (auto& v : ws.y) v /= sz;
            for (auto& v : ws.z) v /= sz;
        }
    };

    std::optional<SdpSolution> best;
    double best_lambda = 0.0;

    if (warm_start) {
        FeasibilityReport rep =
            check_feasible(g, *warm_start, delta, hstar, opts.feas_tol);
        if (rep.feasible && warm_start->lambda > 0.0) {
            best = *warm_start;
            best_lambda = warm_start->lambda;
            lo = std::max(lo, warm_start->lambda);
            if (lo >= hi) hi = 2.0 * lo;
            result.probes.push_back({warm_start->lambda, true, 0});
        }
        seed_point(*warm_start);
    } else {
        ws.x.assign(g.edges().size(), 1.0);
        ws.y.assign(ws.pairs.size(), 1.0 / std::max<std::size_t>(1, ws.pairs.size()));
        ws.z = std::vector<double>(g.n(), 0.0);
        for (std::size_t i = 0; i < g.edges().size(); ++i) {
            ws.z[g.edges()[i].u] = std::max(ws.z[g.edges()[i].u], ws.x[i]);
            ws.z[g.edges()[i].v] = std::max(ws.z[g.edges()[i].v], ws.x[i]);
        }
        ws.project_linear_once();
    }

    if (!best) {
        SdpSolution cand = SdpSolution::zero(g);
        int iters = 0;
        Verdict v = try_lambda(ws, lo, opts, delta, &cand, &iters);
        result.probes.push_back({lo, v == Verdict::Certified, iters});
        if (v != Verdict::Certified)
            throw UndeterminedError(
                "solve_sdp: no feasible point certified at lambda_lo = " +
                std::to_string(lo));
        best = std::move(cand);
        best_lambda = lo;
    }

    const auto snapshot = *best;
    while ((hi - lo) / std::max(lo, 1e-12) > opts.bisect_tol) {
        const double mid = (lo + hi) / 2.0;
        seed_point(*best);
        SdpSolution cand = SdpSolution::zero(g);
        int iters = 0;
        Verdict v = try_lambda(ws, mid, opts, delta, &cand, &iters);
        result.probes.push_back({mid, v == Verdict::Certified, iters});
        if (v == Verdict::Certified) {
            best = std::move(cand);
            best_lambda = mid;
            lo = mid;
        } else {
            hi = mid;
        }
    }

    // Polished candidate: near-exact linear residuals, pencil-supported lambda.
    seed_point(*best);
    polish(ws, 1e-10);
    SdpSolution polished = ws.export_solution(best_lambda);
    const double pol_lambda = margin_lambda(g, polished, std::max(hi, best_lambda));
    if (pol_lambda > 0.0) {
        FeasibilityReport rep =
            check_feasible(g, polished, delta, hstar, opts.feas_tol);
        if (rep.feasible && pol_lambda > best_lambda) {
            polished.lambda = pol_lambda;
            best = std::move(polished);
            best_lambda = pol_lambda;
        }
    }
    if (warm_start && snapshot.lambda >= best_lambda &&
        result.probes.front().iterations == 0) {
        best = snapshot;
        best_lambda = snapshot.lambda;
    }

    best->lambda = best_lambda;
    FeasibilityReport final_rep = check_feasible(g, *best, delta, hstar, opts.feas_tol);
    if (!final_rep.feasible)
        throw std::runtime_error("solve_sdp: internal error, result failed the checker");

    // Probe verdicts must be consistent with a single threshold.
    double max_feasible = 0.0, min_infeasible = std::numeric_limits<double>::infinity();
    for (const auto& p : result.probes) {
        if (p.feasible)
            max_feasible = std::max(max_feasible, p.lambda);
        else
            min_infeasible = std::min(min_infeasible, p.lambda);
    }
    if (max_feasible > min_infeasible)
        throw std::runtime_error("solve_sdp: probe verdicts are not monotone");

    result.solution = std::move(*best);
    result.lambda = best_lambda;
    return result;
}

}  // namespace exk
