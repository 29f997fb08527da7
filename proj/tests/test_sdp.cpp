#include <doctest.h>

#include <cmath>
#include <random>

#include "exk/graph_io.hpp"
#include "exk/instances.hpp"
#include "exk/sdp.hpp"
#include "exk/spectral.hpp"

using namespace exk;

namespace {

WeightedGraph complete_graph(int n, double w = 1.0) {
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) edges.push_back({u, v, w});
    return WeightedGraph::create(n, std::move(edges));
}

VertexSet random_small_set(int n, int max_size, std::mt19937_64& rng,
                           const std::vector<int>& universe) {
    std::uniform_int_distribution<int> size_dist(1, max_size);
    std::vector<int> pool = universe;
    std::shuffle(pool.begin(), pool.end(), rng);
    pool.resize(size_dist(rng));
    return VertexSet(pool);
}

}  // namespace

TEST_CASE("integral solution on a complete graph") {
    WeightedGraph k6 = complete_graph(6);
    SdpSolution sol = integral_solution(k6, VertexSet::full(6));
    CHECK(sol.lambda == doctest::Approx(6.0));
    for (double v : sol.x) CHECK(v == doctest::Approx(1.0));

    FeasibilityReport rep = check_feasible(k6, sol, 1.0);
    CHECK(rep.feasible);
    CHECK(rep.lmi == doctest::Approx(0.0).epsilon(1e-7));
    CHECK(rep.sum_y == doctest::Approx(0.0));
    CHECK(rep.cap_y == doctest::Approx(0.0));

    CHECK(lmi_margin(k6, sol) == doctest::Approx(0.0).epsilon(1e-7));
    // Doubling lambda flips the pencil: min eigenvalue drops to -n.
    CHECK(lmi_margin(k6, sol, 12.0) == doctest::Approx(-6.0).epsilon(1e-7));

    SdpSolution no_y = make_solution(k6, sol.x, {}, sol.lambda);
    CHECK(lmi_margin(k6, no_y) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("integral solution on a disconnected induced subgraph is degenerate") {
    WeightedGraph g = WeightedGraph::create(
        6, {{0, 1, 1}, {2, 3, 1}, {0, 2, 1}, {4, 5, 1}});
    SdpSolution sol = integral_solution(g, VertexSet({0, 1, 4, 5}));
    CHECK(sol.lambda == 0.0);
    CHECK(check_feasible(g, sol, 4.0 / 6.0).feasible);
}

TEST_CASE("checker flags violations with reasons") {
    WeightedGraph k4 = complete_graph(4);
    SdpSolution zero = SdpSolution::zero(k4);
    FeasibilityReport rep = check_feasible(k4, zero, 0.5);
    CHECK_FALSE(rep.feasible);
    CHECK_FALSE(rep.x_nonzero);
    CHECK(rep.reason == "x != 0 violated");

    // y concentrated on one pair: the spreading constraint bites.
    SdpSolution conc = integral_solution(k4, VertexSet::full(4));
    conc.y.clear();
    conc = make_solution(k4, conc.x, {{0, 1, 2.0}}, 0.1);
    FeasibilityReport rep2 = check_feasible(k4, conc, 1.0);
    CHECK(rep2.cap_y < 0.0);
    CHECK_FALSE(rep2.feasible);

    CHECK_THROWS_AS(check_feasible(k4, SdpSolution{}, 0.5), std::invalid_argument);
}

TEST_CASE("integral round trip is feasible across instances") {
    std::mt19937_64 rng(101);
    for (int rep = 0; rep < 8; ++rep) {
        WeightedGraph g = random_regular(24, 5, 1000 + rep);
        std::vector<int> mem;
        for (int v = 0; v < 12; ++v) mem.push_back(v);
        VertexSet s(mem);
        WeightedGraph sub = induced_subgraph(g, s);
        int comps = 0;
        component_labels(sub, &comps);
        if (comps > 1) continue;
        SdpSolution sol = integral_solution(g, s);
        CHECK(check_feasible(g, sol, 0.5).feasible);
    }
}

TEST_CASE("weighted expansions") {
    WeightedGraph k8 = complete_graph(8);
    SdpSolution sol = integral_solution(k8, VertexSet::full(8));
    CHECK(weighted_expansion_x(k8, sol, VertexSet({0, 1, 2, 3})) ==
          doctest::Approx(4.0));
    CHECK(weighted_expansion_x(k8, sol, VertexSet::full(8)) == doctest::Approx(0.0));
    CHECK(weighted_expansion_y(k8, sol, VertexSet({0})) ==
          doctest::Approx(7.0 / 8.0));
    CHECK_THROWS_AS(
        weighted_expansion_x(k8, SdpSolution::zero(k8), VertexSet({0})),
        std::invalid_argument);
}

TEST_CASE("small sets expand by lambda/2 under any feasible point") {
    std::mt19937_64 rng(41);
    InstanceBundle b = planted_expander(96, 0.25, 6, 2, 7);
    const SdpSolution& sol = *b.planted_sdp;
    REQUIRE(check_feasible(b.graph, sol, 0.25).feasible);
    const int cap = static_cast<int>(0.25 * b.graph.n() / 2);
    for (int t = 0; t < 200; ++t) {
        VertexSet s = random_small_set(b.graph.n(), cap, rng,
                                       b.planted_set->members());
        CHECK(weighted_expansion_x(b.graph, sol, s) >= sol.lambda / 2.0 - 1e-6);
        // The quadratic-form consequence of the pencil constraint.
        const auto z = z_weights(b.graph, sol);
        double zs = 0.0;
        for (int v : s.members()) zs += z[v];
        CHECK(weighted_expansion_x(b.graph, sol, s) * zs >=
              sol.lambda * weighted_expansion_y(b.graph, sol, s) * zs - 1e-6);
    }
}

TEST_CASE("pencil margin is non-increasing in lambda") {
    WeightedGraph k5 = complete_graph(5);
    SdpSolution sol = integral_solution(k5, VertexSet::full(5));
    const double m1 = lmi_margin(k5, sol, 1.0);
    const double m2 = lmi_margin(k5, sol, 5.0);
    const double m3 = lmi_margin(k5, sol, 9.0);
    CHECK(m1 >= m2 - 1e-12);
    CHECK(m2 >= m3 - 1e-12);
}

TEST_CASE("support restriction drops zero-weight vertices") {
    WeightedGraph g = WeightedGraph::create(
        5, {{0, 1, 1.0}, {1, 2, 1.0}, {3, 4, 1.0}});
    SdpSolution sol = integral_solution(g, VertexSet({0, 1, 2}));
    SupportRestriction sup = restrict_to_support(g, sol);
    CHECK(sup.graph.n() == 3);
    CHECK(sup.orig_ids == std::vector<int>({0, 1, 2}));
    CHECK(sup.solution.x.size() == sup.graph.edges().size());
    const auto z = z_weights(sup.graph, sup.solution);
    for (double v : z) CHECK(v > 0.0);
}

TEST_CASE("solution json round trip and non-edge rejection") {
    WeightedGraph k4 = complete_graph(4);
    SdpSolution sol = integral_solution(k4, VertexSet({0, 1, 2}));
    auto j = solution_to_json(k4, sol);
    SdpSolution back = solution_from_json(k4, j);
    CHECK(back.lambda == doctest::Approx(sol.lambda));
    CHECK(back.x == sol.x);
    CHECK(back.y.size() == sol.y.size());

    WeightedGraph path = WeightedGraph::create(3, {{0, 1, 1.0}, {1, 2, 1.0}});
    nlohmann::json bad{{"lambda", 1.0},
                       {"x", {{0, 2, 0.5}}},
                       {"y", nlohmann::json::array()}};
    CHECK_THROWS_AS(solution_from_json(path, bad), std::invalid_argument);
}
