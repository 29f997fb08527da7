#include "exk/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

#include "exk/greedy.hpp"
#include "exk/spectral.hpp"

namespace exk {

using nlohmann::json;

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

VertexSet map_back(const VertexSet& local, const std::vector<int>& ids) {
    std::vector<int> mapped;
    mapped.reserve(local.size());
    for (int i : local.members()) mapped.push_back(ids[i]);
    return VertexSet(std::move(mapped));
}

double checked_exp(double exponent, const std::string& who) {
    if (exponent > 700.0) {
        std::ostringstream msg;
        msg << who << ": epsilon underflows, exponent " << exponent
            << " exceeds the double range (delta_deg / lambda too large)";
        throw std::runtime_error(msg.str());
    }
    return std::exp(exponent);
}

}  // namespace

WindowChoice find_low_width_set(const WeightedGraph& g, const SdpSolution& sol,
                                double window_len) {
    if (!(window_len > 0.0))
        throw std::invalid_argument("find_low_width_set: window length must be positive");
    const int n = g.n();
    const auto z = z_weights(g, sol);
    for (int v = 0; v < n; ++v)
        if (!(z[v] > 0.0))
            throw std::invalid_argument(
                "find_low_width_set: vertex of weight zero; restrict to the support first");

    double zsum = 0.0, xsum = 0.0;
    for (double v : z) zsum += v;
    for (double v : sol.x) xsum += v;
    if (!(xsum > 0.0)) throw std::invalid_argument("find_low_width_set: empty support");
    const double alpha = xsum / zsum;
    const int dmax = g.max_combinatorial_degree();
    const double bound = 2.0 * alpha * std::log(dmax / alpha) / window_len;

    // Vertices sorted by log z; runs of consecutive distinct values are the
    // only sets any window [t, t+w] can realize.
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return z[a] != z[b] ? z[a] < z[b] : a < b;
    });
    std::vector<double> logs(n);
    for (int i = 0; i < n; ++i) logs[i] = std::log(z[order[i]]);
    std::vector<double> values;        // distinct log z
    std::vector<int> bucket_end;       // exclusive end index in `order`
    for (int i = 0; i < n; ++i) {
        if (values.empty() || logs[i] > values.back()) {
            values.push_back(logs[i]);
            bucket_end.push_back(i + 1);
        } else {
            bucket_end.back() = i + 1;
        }
    }
    const int m = static_cast<int>(values.size());
    std::vector<int> bucket_begin(m);
    for (int i = 0; i < m; ++i) bucket_begin[i] = i == 0 ? 0 : bucket_end[i - 1];
    std::vector<double> zprefix(n + 1, 0.0);
    for (int i = 0; i < n; ++i) zprefix[i + 1] = zprefix[i] + z[order[i]];
    std::vector<int> value_index(n);
    for (int i = 0; i < m; ++i)
        for (int k = bucket_begin[i]; k < bucket_end[i]; ++k) value_index[order[k]] = i;

    // Candidate window starts: the content of [t, t+w] changes only when t
    // crosses some value or some value minus w, so sampling at the events and
    // between them enumerates every realizable content.
    std::vector<double> events;
    for (double p : values) {
        events.push_back(p);
        events.push_back(p - window_len);
    }
    std::sort(events.begin(), events.end());
    events.erase(std::unique(events.begin(), events.end()), events.end());
    std::vector<double> starts;
    for (std::size_t i = 0; i < events.size(); ++i) {
        starts.push_back(events[i]);
        if (i + 1 < events.size()) starts.push_back((events[i] + events[i + 1]) / 2.0);
    }

    std::set<std::pair<int, int>> seen;
    WindowChoice best;
    best.window_len = window_len;
    double best_hx = std::numeric_limits<double>::infinity();
    double best_zs = -1.0;
    for (double t : starts) {
        const int lo = static_cast<int>(
            std::lower_bound(values.begin(), values.end(), t) - values.begin());
        int hi = static_cast<int>(std::upper_bound(values.begin(), values.end(),
                                                   t + window_len) -
                                  values.begin()) -
                 1;
        if (lo >= m || hi < lo) continue;
        if (!seen.insert({lo, hi}).second) continue;
        const int vb = bucket_begin[lo], ve = bucket_end[hi];
        const double zs = zprefix[ve] - zprefix[vb];
        double xcut = 0.0;
        const auto& edges = g.edges();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const bool inu = value_index[edges[i].u] >= lo && value_index[edges[i].u] <= hi;
            const bool inv = value_index[edges[i].v] >= lo && value_index[edges[i].v] <= hi;
            if (inu != inv) xcut += sol.x[i];
        }
        const double hx = xcut / zs;
        if (hx < best_hx - 1e-15 || (hx <= best_hx + 1e-15 && zs > best_zs)) {
            best_hx = hx;
            best_zs = zs;
            best.t = t;
            std::vector<int> members(order.begin() + vb, order.begin() + ve);
            best.set = VertexSet(std::move(members));
            best.hx = hx;
        }
    }
    best.alpha = alpha;
    if (!(best.hx <= bound + 1e-8 * (1.0 + std::abs(bound))))
        throw std::runtime_error("find_low_width_set: window bound violated (hx " +
                                 std::to_string(best.hx) + " > " +
                                 std::to_string(bound) + ")");
    return best;
}

RefineOutcome refine_to_expander(const WeightedGraph& g, const SdpSolution& sol,
                                 const VertexSet& s, double delta, double eps) {
    if (s.empty()) throw std::invalid_argument("refine_to_expander: empty set");
    const int cap = static_cast<int>(std::floor(delta * g.n() / 2.0 + 1e-9));
    if (s.size() <= cap)
        return {RefineOutcome::Kind::NonExpanding, s, 0.0,
                weighted_expansion_x(g, sol, s)};

    WeightedGraph sub = induced_subgraph(g, s);
    DecompositionOutcome out = expander_or_partition_cap(sub, cap, eps);
    if (out.kind == DecompositionOutcome::Kind::Expander)
        return {RefineOutcome::Kind::Expander, map_back(out.set, s.members()),
                out.certificate, 0.0};

    double best_hx = std::numeric_limits<double>::infinity();
    VertexSet best;
    for (const auto& block : out.partition) {
        VertexSet mapped = map_back(block, s.members());
        const double hx = weighted_expansion_x(g, sol, mapped);
        if (hx < best_hx) {
            best_hx = hx;
            best = std::move(mapped);
        }
    }
    return {RefineOutcome::Kind::NonExpanding, best, 0.0, best_hx};
}

namespace {

RoundingReport run_rounding(const WeightedGraph& g, const SdpSolution& sol,
                            double delta, std::optional<double> hstar) {
    if (!(delta > 0.0 && delta <= 1.0))
        throw std::invalid_argument("rounding: delta must be in (0, 1]");
    const double dd = g.delta();
    if (hstar && !(*hstar >= 0.0 && *hstar <= dd * (1.0 - 2.0 / kE) + 1e-12))
        throw std::invalid_argument(
            "rounding: hstar must lie in [0, delta_deg * (1 - 2/e)]");

    FeasibilityReport rep = check_feasible(g, sol, delta, hstar);
    if (!rep.feasible)
        throw InfeasibleError("rounding: solution infeasible (" + rep.reason + ")");
    const double lambda = sol.lambda;
    if (!(lambda > 0.0))
        throw std::invalid_argument("rounding: need lambda > 0");

    const double logd = std::log(1.0 / delta);
    double w, eps;
    if (!hstar) {
        w = 8.0 * dd / (kE * lambda);
        const double grow = checked_exp(16.0 * dd / (kE * lambda), "round_sdp1");
        eps = logd == 0.0
                  ? 0.5
                  : lambda * lambda / (129.0 * dd * dd * logd * logd * grow);
    } else {
        const double gap = dd - *hstar;
        w = 4.0 * gap * std::log(2.0 * dd / gap) / lambda;
        const double grow =
            checked_exp(32.0 * (gap / lambda) * std::log(dd / gap), "round_sdp2");
        eps = logd == 0.0
                  ? 0.5
                  : lambda * lambda / (129.0 * dd * dd * logd * logd * grow);
    }
    eps = std::min(eps, 1.0 - 1e-9);

    if (!hstar) {
        // This must hold identically for the schedule above; a failure means
        // the floating range was exceeded.
        const double lhs =
            2.0 * std::exp(w) * logd * std::sqrt(2.0 * eps) * dd + 2.0 * dd / (kE * w);
        if (!(lhs < lambda / 2.0)) {
            std::ostringstream msg;
            msg << "round_sdp1: window/refinement budget " << lhs
                << " does not undercut lambda/2 = " << lambda / 2.0;
            throw std::runtime_error(msg.str());
        }
    }

    SupportRestriction sup = restrict_to_support(g, sol);
    WindowChoice win = find_low_width_set(sup.graph, sup.solution, w);

    if (hstar) {
        const double lhs = logd * std::sqrt(2.0 * eps) * dd + win.hx;
        if (!(lhs < lambda / 2.0)) {
            std::ostringstream msg;
            msg << "round_sdp2: window expansion budget " << lhs
                << " does not undercut lambda/2 = " << lambda / 2.0;
            throw std::runtime_error(msg.str());
        }
    }

    const double delta_red = delta * g.n() / sup.graph.n();
    RefineOutcome ref =
        refine_to_expander(sup.graph, sup.solution, win.set, delta_red, eps);
    if (ref.kind != RefineOutcome::Kind::Expander)
        throw std::runtime_error(
            "rounding: refinement returned a non-expanding block of h_x " +
            std::to_string(ref.hx) +
            ", contradicting the small-set expansion certificate");

    VertexSet result = map_back(ref.set, sup.orig_ids);
    const double l2 = lambda2(induced_subgraph(g, result)).value;
    if (8.0 * result.size() < 3.0 * delta * g.n() - 1e-6 || l2 < eps * dd - 1e-8)
        throw std::runtime_error("rounding: output failed recomputation (size " +
                                 std::to_string(result.size()) + ", lambda2 " +
                                 std::to_string(l2) + ")");

    RoundingReport out;
    out.params = {delta, eps, w, hstar};
    out.window = win;
    out.window.set = map_back(win.set, sup.orig_ids);
    out.result = std::move(result);
    out.lambda2_check = l2;
    out.size_check = out.result.size();
    return out;
}

}  // namespace

RoundingReport round_sdp1(const WeightedGraph& g, const SdpSolution& sol,
                          double delta) {
    return run_rounding(g, sol, delta, std::nullopt);
}

RoundingReport round_sdp2(const WeightedGraph& g, const SdpSolution& sol,
                          double delta, double hstar) {
    return run_rounding(g, sol, delta, hstar);
}

json rounding_report_to_json(const RoundingReport& rep) {
    json params{{"delta", rep.params.delta},
                {"eps", rep.params.eps},
                {"w", rep.params.window_len}};
    if (rep.params.hstar) params["hstar"] = *rep.params.hstar;
    json window{{"t", rep.window.t},
                {"window_len", rep.window.window_len},
                {"set", rep.window.set.members()},
                {"hx", rep.window.hx},
                {"alpha", rep.window.alpha}};
    return json{{"params", std::move(params)},
                {"window", std::move(window)},
                {"result_set", rep.result.members()},
                {"lambda2_check", rep.lambda2_check},
                {"size_check", rep.size_check}};
}

}  // namespace exk
