// Acceptance suite: one pass/fail line per criterion, each recomputed from
// scratch against the library's own primitives.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

#include "exk/graph.hpp"
#include "exk/greedy.hpp"
#include "exk/instances.hpp"
#include "exk/rounding.hpp"
#include "exk/sdp.hpp"
#include "exk/sdp_solver.hpp"
#include "exk/spectral.hpp"

using namespace exk;

namespace {

constexpr double kE = 2.718281828459045;

class Criterion {
  public:
    Criterion(int id, std::string title, double limit_s = 0.0)
        : id_(id), title_(std::move(title)), limit_s_(limit_s),
          start_(std::chrono::steady_clock::now()) {}

    void expect(bool cond, const char* what) {
        ok_ &= cond;
        CHECK_MESSAGE(cond, "criterion ", id_, ": ", what);
    }

    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start_)
            .count();
    }

    void finish() {
        const double s = seconds();
        if (limit_s_ > 0.0) expect(s < limit_s_, "runtime limit exceeded");
        std::printf("[%s] criterion %2d: %s (%.1fs)\n", ok_ ? "PASS" : "FAIL", id_,
                     title_.c_str(), s);
        std::fflush(stdout);
        finished_ = true;
    }

    ~Criterion() {
        if (!finished_) {
            std::printf("[FAIL] criterion %2d: %s (aborted)\n", id_, title_.c_str());
            std::fflush(stdout);
        }
    }

  private:
    int id_;
    std::string title_;
    double limit_s_;
    bool ok_ = true;
    bool finished_ = false;
    std::chrono::steady_clock::time_point start_;
};

WeightedGraph complete_graph(int n, double w = 1.0) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v, w});
    return WeightedGraph::create(n, std::move(edges), w * (n - 1), true);
}

WeightedGraph random_graph(int n, double p, bool weighted, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_real_distribution<double> wdist(0.2, 2.0);
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (coin(rng) < p) edges.push_back({u, v, weighted ? wdist(rng) : 1.0});
    return WeightedGraph::create(n, std::move(edges));
}

VertexSet random_subset(const std::vector<int>& universe, int size,
                        std::mt19937_64& rng) {
    std::vector<int> pool = universe;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(size);
    return VertexSet(std::move(pool));
}

struct CorpusEntry {
    std::string name;
    WeightedGraph graph;
    SdpSolution solution;
    double delta;
};

struct SuiteState {
    std::vector<InstanceBundle> planted;  // n = 256, d_out in {0, 2, 4}
    std::vector<std::pair<WeightedGraph, DecompositionOutcome>> partitions;
    std::vector<InstanceBundle> gap;  // dims 3..6, cloud 8
    std::vector<CorpusEntry> corpus;
};

SuiteState& suite() {
    static SuiteState s;
    return s;
}

}  // namespace

TEST_CASE("criterion 1: cheeger sandwich") {
    Criterion c(1, "cheeger sandwich on 200 small random graphs", 30.0);
    std::mt19937_64 rng(1001);
    std::uniform_int_distribution<int> ndist(4, 20);
    for (int rep = 0; rep < 200; ++rep) {
        const int n = ndist(rng);
        WeightedGraph g;
        switch (rep % 4) {
            case 0: g = random_graph(n, 0.25, false, rng); break;
            case 1: g = random_graph(n, 0.5, true, rng); break;
            case 2: g = random_graph(n, 3.0 / n, true, rng); break;
            default: {
                const int d = 2 + rep % 3;
                if (n > d && (n * d) % 2 == 0) {
                    g = random_regular(n, d, 5000 + rep);
                } else {
                    g = random_graph(n, 0.3, false, rng);
                }
            }
        }
        const double l2 = lambda2(g).value;
        const double h = graph_expansion_bruteforce(g).first;
        c.expect(l2 / 2.0 <= h + 1e-6, "lambda2/2 <= h failed");
        c.expect(h <= std::sqrt(2.0 * g.delta() * l2) + 1e-6,
                 "h <= sqrt(2 delta lambda2) failed");
    }
    c.finish();
}

TEST_CASE("criterion 2: spectral bisection contract") {
    Criterion c(2, "bisection outcomes verify on 100 graphs x 3 eps", 60.0);
    std::mt19937_64 rng(2002);
    std::uniform_int_distribution<int> ndist(20, 200);
    for (int rep = 0; rep < 100; ++rep) {
        const int n = ndist(rng);
        WeightedGraph g;
        switch (rep % 3) {
            case 0: g = random_graph(n, 3.0 / n, false, rng); break;
            case 1: g = random_graph(n, 8.0 / n, true, rng); break;
            default: {
                const int d = 3 + rep % 5;
                g = (n * d) % 2 == 0 ? random_regular(n, d, 7000 + rep)
                                     : random_regular(n + 1, d, 7000 + rep);
            }
        }
        for (double eps : {0.05, 0.25, 0.6}) {
            BisectionOutcome out = spectral_bisection(g, eps);
            if (out.kind == BisectionOutcome::Kind::ExpanderFound) {
                c.expect(4 * out.set.size() >= 3 * g.n(), "expander side too small");
                const double l2 = lambda2(induced_subgraph(g, out.set)).value;
                c.expect(l2 >= eps * g.delta() - 1e-8, "expander certificate failed");
            } else {
                c.expect(4 * out.set.size() >= g.n(), "cut side below n/4");
                c.expect(4 * out.set.size() <= 3 * g.n(), "cut side above 3n/4");
                c.expect(set_expansion(g, out.set) <=
                             std::sqrt(2.0 * eps) * g.delta() + 1e-8,
                         "cut expansion above sqrt(2 eps) delta");
            }
        }
    }
    c.finish();
}

TEST_CASE("criterion 4: greedy recovery on planted instances") {
    Criterion c(4, "greedy contract on planted bundles (n=256)", 120.0);
    const double delta = 0.25;
    for (int d_out : {0, 2, 4}) {
        InstanceBundle b = planted_expander(256, delta, 8, d_out, 2024 + d_out);
        GreedyResult res = greedy_find_expander(b.graph, delta);

        c.expect(8.0 * res.set.size() >= 3.0 * delta * b.graph.n() - 1e-9,
                 "set below 3 delta n / 8");
        const double l2 = lambda2(induced_subgraph(b.graph, res.set)).value;
        c.expect(l2 >= res.eps_used * b.graph.delta() - 1e-8,
                 "lambda2 below eps* delta");

        const double lp = b.measured["lambda2_planted"].get<double>();
        const double logd = std::log(1.0 / delta);
        const double dd = b.graph.delta();
        c.expect(res.eps_used >=
                     lp * lp * delta * delta / (64.0 * dd * dd * logd * logd) - 1e-12,
                 "eps* below the planted floor");

        for (auto& part : res.partitions_tried)
            suite().partitions.emplace_back(b.graph, std::move(part));
        suite().corpus.push_back(
            {"planted-dout" + std::to_string(d_out), b.graph, *b.planted_sdp, delta});
        suite().planted.push_back(std::move(b));
    }
    c.finish();
}

TEST_CASE("criterion 3: partition bound") {
    Criterion c(3, "every produced partition obeys the cut-weight budget");
    // Partitions recorded by the greedy runs plus a dedicated decomposition.
    WeightedGraph g = random_regular(96, 6, 3003);
    DecompositionOutcome direct = expander_or_partition(g, 0.25, 0.5);
    if (direct.kind == DecompositionOutcome::Kind::SparsePartition)
        suite().partitions.emplace_back(g, std::move(direct));

    c.expect(!suite().partitions.empty(), "no partitions were produced");
    for (const auto& [host, out] : suite().partitions) {
        const int cap = static_cast<int>(0.25 * host.n() / 2);
        const double delta_eff = 2.0 * cap / host.n();
        double total = 0.0;
        for (const auto& block : out.partition) {
            c.expect(block.size() <= cap, "block above delta n / 2");
            total += cut_weight(host, block);
        }
        const double bound = 2.0 * host.delta() * std::log(1.0 / delta_eff) *
                             std::sqrt(2.0 * out.eps_used) * host.n();
        c.expect(total <= bound + 1e-6, "total boundary above the budget");
    }
    c.finish();
}

TEST_CASE("criterion 9: integrality gap growth") {
    Criterion c(9, "certified relaxation value vs induced expansion, dims 3..6",
                300.0);
    std::mt19937_64 rng(9009);
    double cmin = 1e300, cmax = 0.0;
    for (int dim : {3, 4, 5, 6}) {
        InstanceBundle b = hypercube_blowup(dim, 8);
        REQUIRE(b.planted_sdp.has_value());
        FeasibilityReport rep = check_feasible(b.graph, *b.planted_sdp, b.delta);
        c.expect(rep.feasible, "planted point not feasible at its lambda");
        const double cval = b.planted_sdp->lambda / dim;
        c.expect(cval > 0.0, "certified c not positive");
        cmin = std::min(cmin, cval);
        cmax = std::max(cmax, cval);

        double worst = 0.0;
        for (const auto& w : b.witnesses)
            worst = std::max(worst, lambda2(induced_subgraph(b.graph, w)).value);
        const int n = b.graph.n();
        const int lo = static_cast<int>(std::ceil(b.delta * n));
        std::uniform_int_distribution<int> size_dist(lo, n / 2);
        std::vector<int> ids(n);
        std::iota(ids.begin(), ids.end(), 0);
        for (int s = 0; s < 500; ++s) {
            VertexSet set = random_subset(ids, size_dist(rng), rng);
            worst = std::max(worst, lambda2(induced_subgraph(b.graph, set)).value);
        }
        c.expect(worst <= 4.0 + 1e-9, "an induced lambda2 exceeded 4");
        c.expect(b.planted_sdp->lambda / std::max(worst, 4.0) >=
                     cval * dim / 4.0 - 1e-9,
                 "certified ratio fell behind linear growth");

        suite().corpus.push_back({"gap-dim" + std::to_string(dim), b.graph,
                                  *b.planted_sdp, b.delta});
        suite().gap.push_back(std::move(b));
    }
    c.expect(cmax / cmin <= 2.0, "c varies by more than a factor 2 across dims");
    c.finish();
}

TEST_CASE("criterion 10: solver soundness and warm-start dominance") {
    Criterion c(10, "solve_sdp outputs pass the checker; warm starts dominate");
    SolverOptions opts;
    opts.max_proj_iters = 600;

    for (int n : {8, 16, 32}) {
        WeightedGraph kn = complete_graph(n);
        SdpSolution warm = integral_solution(kn, VertexSet::full(n));
        SolveResult res = solve_sdp(kn, 1.0, std::nullopt, opts, warm);
        c.expect(check_feasible(kn, res.solution, 1.0, std::nullopt, opts.feas_tol)
                     .feasible,
                 "complete-graph solve failed the checker");
        c.expect(res.lambda >= warm.lambda * 0.95,
                 "certified lambda below 95% of the warm start");
        suite().corpus.push_back(
            {"solve-k" + std::to_string(n), kn, res.solution, 1.0});
    }
    for (std::size_t i = 0; i < suite().gap.size(); ++i) {
        const InstanceBundle& b = suite().gap[i];
        const int dim = 3 + static_cast<int>(i);
        if (dim > 4) break;
        SolveResult res = solve_sdp(b.graph, b.delta, std::nullopt, opts,
                                    b.planted_sdp);
        c.expect(
            check_feasible(b.graph, res.solution, b.delta, std::nullopt,
                           opts.feas_tol)
                .feasible,
            "blowup solve failed the checker");
        c.expect(res.lambda >= b.planted_sdp->lambda * 0.95,
                 "blowup lambda below 95% of the warm start");
        suite().corpus.push_back({"solve-gap-dim" + std::to_string(dim), b.graph,
                                  res.solution, b.delta});
    }
    c.finish();
}

TEST_CASE("criterion 5: small-set weighted expansion") {
    Criterion c(5, "h_x(S) >= lambda/2 over every corpus point, 200 sets each");
    // Add plain integral embeddings alongside solver outputs and gap points.
    WeightedGraph k16 = complete_graph(16);
    suite().corpus.push_back(
        {"integral-k16", k16, integral_solution(k16, VertexSet::full(16)), 1.0});
    InstanceBundle cp = clique_with_paths(8, 0.25);
    suite().corpus.push_back({"integral-cliquepaths", cp.graph,
                              integral_solution(cp.graph, *cp.planted_set),
                              cp.planted_set->size() /
                                  static_cast<double>(cp.graph.n())});

    std::mt19937_64 rng(5005);
    c.expect(suite().corpus.size() >= 10, "corpus unexpectedly small");
    for (const auto& entry : suite().corpus) {
        FeasibilityReport rep =
            check_feasible(entry.graph, entry.solution, entry.delta);
        c.expect(rep.feasible, "corpus point failed the checker");
        if (!rep.feasible || entry.solution.lambda <= 0.0) continue;
        SupportRestriction sup = restrict_to_support(entry.graph, entry.solution);
        const int cap = std::max(
            1, static_cast<int>(entry.delta * entry.graph.n() / 2.0 + 1e-9));
        std::uniform_int_distribution<int> size_dist(
            1, std::min(cap, sup.graph.n()));
        int violations = 0;
        for (int t = 0; t < 200; ++t) {
            std::vector<int> ids(sup.graph.n());
            std::iota(ids.begin(), ids.end(), 0);
            VertexSet s = random_subset(ids, size_dist(rng), rng);
            const double hx = weighted_expansion_x(sup.graph, sup.solution, s);
            if (hx < entry.solution.lambda / 2.0 - 1e-6) ++violations;
        }
        c.expect(violations == 0, "small-set expansion violated");
    }
    c.finish();
}

TEST_CASE("criterion 6: window selection bound") {
    Criterion c(6, "window width and h_x bound over the corpus");
    for (const auto& entry : suite().corpus) {
        if (entry.solution.lambda <= 0.0) continue;
        SupportRestriction sup = restrict_to_support(entry.graph, entry.solution);
        const auto z = z_weights(sup.graph, sup.solution);
        const double w4 =
            8.0 * entry.graph.delta() / (kE * entry.solution.lambda);
        for (double w : {0.5, 1.0, 2.0, w4}) {
            WindowChoice win = find_low_width_set(sup.graph, sup.solution, w);
            double zmax = 0.0, zmin = 1e300;
            for (int v : win.set.members()) {
                zmax = std::max(zmax, z[v]);
                zmin = std::min(zmin, z[v]);
            }
            c.expect(zmax / zmin <= std::exp(w) * (1.0 + 1e-9),
                     "window width above e^w");
            const int dmax = sup.graph.max_combinatorial_degree();
            c.expect(win.hx <=
                         2.0 * win.alpha * std::log(dmax / win.alpha) / w + 1e-8,
                     "window h_x above the selection bound");
        }
    }
    c.finish();
}

TEST_CASE("criterion 7: rounding end to end") {
    Criterion c(7, "round_sdp1 on planted bundles", 180.0);
    const double delta = 0.25;
    for (const auto& b : suite().planted) {
        const SdpSolution& sol = *b.planted_sdp;
        const double lambda = sol.lambda;
        const double dd = b.graph.delta();
        const double logd = std::log(1.0 / delta);

        RoundingReport rep = round_sdp1(b.graph, sol, delta);
        const double expect_eps =
            lambda * lambda /
            (129.0 * dd * dd * logd * logd * std::exp(16.0 * dd / (kE * lambda)));
        c.expect(std::abs(rep.params.eps - expect_eps) <=
                     1e-12 * (1.0 + expect_eps),
                 "eps deviates from the schedule");
        c.expect(8.0 * rep.result.size() >= 3.0 * delta * b.graph.n() - 1e-9,
                 "rounded set below 3 delta n / 8");
        const double l2 = lambda2(induced_subgraph(b.graph, rep.result)).value;
        c.expect(l2 >= rep.params.eps * dd - 1e-8, "rounded lambda2 below eps delta");

        // The schedule must undercut lambda/2 at every invocation.
        const double w = rep.params.window_len;
        const double lhs = 2.0 * std::exp(w) * logd *
                               std::sqrt(2.0 * rep.params.eps) * dd +
                           2.0 * dd / (kE * w);
        c.expect(lhs < lambda / 2.0, "window/refinement budget not below lambda/2");
    }
    c.finish();
}

TEST_CASE("criterion 8: density-aware rounding beats the plain schedule") {
    Criterion c(8, "round_sdp2 eps exceeds round_sdp1 eps at equal lambda");
    const InstanceBundle* pick = nullptr;
    for (const auto& b : suite().planted)
        if (b.params["d_out"].get<int>() == 2) pick = &b;
    REQUIRE(pick != nullptr);
    const double delta = 0.25;
    const double hstar = pick->measured["h_planted"].get<double>();
    const double dd = pick->graph.delta();
    c.expect(hstar <= dd * (1.0 - 2.0 / kE) + 1e-12, "hstar above the threshold");

    RoundingReport r2 = round_sdp2(pick->graph, *pick->planted_sdp, delta, hstar);
    RoundingReport r1 = round_sdp1(pick->graph, *pick->planted_sdp, delta);
    c.expect(r2.params.eps > r1.params.eps, "density schedule not strictly larger");
    c.expect(8.0 * r2.result.size() >= 3.0 * delta * pick->graph.n() - 1e-9,
             "rounded set below 3 delta n / 8");
    const double l2 = lambda2(induced_subgraph(pick->graph, r2.result)).value;
    c.expect(l2 >= r2.params.eps * dd - 1e-8, "rounded lambda2 below eps delta");
    c.finish();
}
