#include <doctest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "exk/cli.hpp"
#include "exk/graph_io.hpp"
#include "exk/instances.hpp"
#include "exk/sdp.hpp"

using namespace exk;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("exk_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string str(const std::string& name) const { return (path / name).string(); }
};

json run_ok(const std::vector<std::string>& args, int expect_code = 0) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    INFO("stderr: ", err.str());
    CHECK(code == expect_code);
    if (out.str().empty()) return json::object();
    return json::parse(out.str());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("gen writes a bundle and is seed deterministic") {
    TempDir tmp;
    json rec = run_ok({"gen", "planted", "--n", "64", "--delta", "0.25", "--d-in",
                       "4", "--d-out", "2", "--seed", "5", "-o", tmp.str("a")});
    CHECK(rec["command"] == "gen");
    CHECK(rec["tool_version"] == kToolVersion);
    const std::string bundle = rec["payload"]["bundle_file"].get<std::string>();
    CHECK(fs::exists(bundle));
    InstanceBundle b = load_bundle(bundle);
    CHECK(b.graph.n() == 64);
    for (int v = 0; v < 64; ++v)
        CHECK(b.graph.weighted_degree(v) == doctest::Approx(6.0));

    run_ok({"gen", "planted", "--n", "64", "--delta", "0.25", "--d-in", "4",
            "--d-out", "2", "--seed", "5", "-o", tmp.str("b")});
    CHECK(read_file(tmp.str("a") + "/planted_n64_s5_graph.json") ==
          read_file(tmp.str("b") + "/planted_n64_s5_graph.json"));

    std::ostringstream out, err;
    CHECK(run_cli({"gen", "hypercube-blowup", "--dim", "3", "--cloud", "0"}, out,
                  err) == 2);
}

TEST_CASE("spectral command") {
    TempDir tmp;
    InstanceBundle b = hypercube_blowup(2, 2);
    save_graph(b.graph, tmp.str("g.json"));
    json rec = run_ok({"spectral", tmp.str("g.json")});
    CHECK(rec["payload"]["lambda2"].get<double>() == doctest::Approx(2.0));

    // K4 written by hand.
    save_graph(WeightedGraph::create(
                   4, {{0, 1, 1}, {0, 2, 1}, {0, 3, 1}, {1, 2, 1}, {1, 3, 1}, {2, 3, 1}}),
               tmp.str("k4.json"));
    json k4 = run_ok({"spectral", tmp.str("k4.json")});
    CHECK(k4["payload"]["lambda2"].get<double>() == doctest::Approx(4.0));

    std::ostringstream out, err;
    CHECK(run_cli({"spectral", tmp.str("missing.json")}, out, err) == 2);
}

TEST_CASE("check command exit codes") {
    TempDir tmp;
    WeightedGraph k6 = WeightedGraph::create(
        6, [] {
            std::vector<Edge> e;
            for (int u = 0; u < 6; ++u)
                for (int v = u + 1; v < 6; ++v) e.push_back({u, v, 1.0});
            return e;
        }());
    save_graph(k6, tmp.str("k6.json"));
    save_solution(k6, integral_solution(k6, VertexSet::full(6)), tmp.str("sol.json"));
    json rec = run_ok({"check", tmp.str("k6.json"), tmp.str("sol.json"), "--delta",
                       "1.0"});
    CHECK(rec["payload"]["feasible"].get<bool>());

    save_solution(k6, SdpSolution::zero(k6), tmp.str("zero.json"));
    std::ostringstream out, err;
    const int code = run_cli(
        {"check", tmp.str("k6.json"), tmp.str("zero.json"), "--delta", "1.0"}, out,
        err);
    CHECK(code == 3);
    json rec2 = json::parse(out.str());
    CHECK_FALSE(rec2["payload"]["feasible"].get<bool>());
    CHECK(rec2["payload"]["reason"] == "x != 0 violated");
}

TEST_CASE("greedy and round commands on a planted bundle") {
    TempDir tmp;
    InstanceBundle b = planted_expander(96, 0.25, 6, 2, 13);
    save_graph(b.graph, tmp.str("g.json"));
    save_solution(b.graph, *b.planted_sdp, tmp.str("sol.json"));

    json grec = run_ok({"greedy", tmp.str("g.json"), "--delta", "0.25"});
    CHECK(grec["payload"]["size"].get<int>() >= 3.0 * 0.25 * 96 / 8);

    json rrec = run_ok({"round", tmp.str("g.json"), tmp.str("sol.json"), "--delta",
                        "0.25", "-o", tmp.str("round.json")});
    CHECK(rrec["payload"]["size_check"].get<int>() >= 3.0 * 0.25 * 96 / 8);
    CHECK(fs::exists(tmp.str("round.json")));
    json from_file = json::parse(read_file(tmp.str("round.json")));
    CHECK(from_file == rrec);

    // Rounding an infeasible point is a certified negative.
    save_solution(b.graph, SdpSolution::zero(b.graph), tmp.str("zero.json"));
    std::ostringstream out, err;
    CHECK(run_cli({"round", tmp.str("g.json"), tmp.str("zero.json"), "--delta",
                   "0.25"},
                  out, err) == 3);
}

TEST_CASE("solve command with warm start") {
    TempDir tmp;
    InstanceBundle b = hypercube_blowup(2, 4);
    save_graph(b.graph, tmp.str("g.json"));
    save_solution(b.graph, *b.planted_sdp, tmp.str("warm.json"));
    json rec = run_ok({"solve", tmp.str("g.json"), "--delta", "0.25",
                       "--warm-start", tmp.str("warm.json"), "--max-iters", "200"});
    CHECK(rec["payload"]["lambda"].get<double>() >=
          b.planted_sdp->lambda * 0.95);
    // The payload solution re-validates through the checker.
    SdpSolution sol =
        solution_from_json(b.graph, rec["payload"]["solution"]);
    CHECK(check_feasible(b.graph, sol, 0.25).feasible);

    // Edgeless graph: certified negative.
    save_graph(WeightedGraph::create(4, {}, 0.0, true), tmp.str("empty.json"));
    std::ostringstream out, err;
    CHECK(run_cli({"solve", tmp.str("empty.json"), "--delta", "0.5"}, out, err) ==
          3);
}

TEST_CASE("gap experiment table") {
    TempDir tmp;
    json rec = run_ok({"gap-experiment", "--dim-range", "2:3", "--cloud", "4",
                       "--samples", "20", "-o", tmp.str("gap")});
    const auto& table = rec["payload"]["table"];
    CHECK(table.size() == 2);
    for (const auto& row : table) {
        CHECK(row["lambda_sdp"].get<double>() > 0.0);
        CHECK(row["max_induced_lambda2"].get<double>() <= 4.0 + 1e-9);
    }
    CHECK(fs::exists(tmp.str("gap") + "/gap_experiment.csv"));

    json empty = run_ok({"gap-experiment", "--dim-range", "5:4"});
    CHECK(empty["payload"]["table"].empty());

    std::ostringstream out, err;
    CHECK(run_cli({"gap-experiment", "--dim-range", "oops"}, out, err) == 2);
}

TEST_CASE("help exits zero, bad flags exit two") {
    std::ostringstream out, err;
    CHECK(run_cli({"--help"}, out, err) == 0);
    std::ostringstream out2, err2;
    CHECK(run_cli({"frobnicate"}, out2, err2) == 2);
}
