#include "exk/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "exk/graph_io.hpp"
#include "exk/greedy.hpp"
#include "exk/instances.hpp"
#include "exk/rounding.hpp"
#include "exk/sdp.hpp"
#include "exk/sdp_solver.hpp"
#include "exk/spectral.hpp"

namespace exk {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

class Stopwatch {
  public:
    double ms() const {
        return std::chrono::duration<double, std::milli>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

int thread_budget() {
    if (const char* env = std::getenv("EXPANDER_KIT_THREADS")) {
        const int t = std::atoi(env);
        if (t >= 1) return t;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

json run_record(const std::string& command, json inputs, json params,
                double wall_ms, std::uint64_t seed, json payload) {
    return json{{"command", command},
                {"inputs", std::move(inputs)},
                {"params", std::move(params)},
                {"wall_ms", wall_ms},
                {"seed", seed},
                {"tool_version", kToolVersion},
                {"payload", std::move(payload)}};
}

void emit(std::ostream& out, const json& record,
          const std::optional<std::string>& out_file) {
    if (out_file) {
        std::ofstream f(*out_file);
        if (!f) throw std::invalid_argument("cannot write output file: " + *out_file);
        f << record.dump(2) << "\n";
    }
    out << record.dump(2) << "\n";
}

struct GapRow {
    int dim = 0;
    long n = 0;
    double delta = 0.0;
    double lambda_sdp = 0.0;
    double c = 0.0;
    double max_induced_lambda2 = 0.0;
    double ratio = 0.0;
    double wall_ms = 0.0;
};

GapRow gap_row_for_dim(int dim, int cloud, int samples, std::uint64_t seed) {
    Stopwatch sw;
    InstanceBundle b = hypercube_blowup(dim, cloud);
    GapRow row;
    row.dim = dim;
    row.n = b.graph.n();
    row.delta = b.delta;
    row.lambda_sdp = b.planted_sdp->lambda;
    row.c = b.measured["c"].get<double>();

    double best = 0.0;
    for (const auto& wset : b.witnesses)
        best = std::max(best, lambda2(induced_subgraph(b.graph, wset)).value);
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(dim) * 1000003ULL);
    const int n = b.graph.n();
    const int min_size = std::max(2, static_cast<int>(std::ceil(b.delta * n)));
    std::uniform_int_distribution<int> size_dist(min_size, std::max(min_size, n / 2));
    std::vector<int> ids(n);
    std::iota(ids.begin(), ids.end(), 0);
    for (int s = 0; s < samples; ++s) {
        std::shuffle(ids.begin(), ids.end(), rng);
        std::vector<int> pick(ids.begin(), ids.begin() + size_dist(rng));
        best = std::max(best,
                        lambda2(induced_subgraph(b.graph, VertexSet(pick))).value);
    }
    row.max_induced_lambda2 = best;
    row.ratio = best > 0.0 ? row.lambda_sdp / best : 0.0;
    row.wall_ms = sw.ms();
    return row;
}

int cmd_gap_experiment(const std::string& dim_range, int cloud, int samples,
                       std::uint64_t seed, const std::optional<std::string>& out_dir,
                       std::ostream& out) {
    Stopwatch sw;
    int lo = 0, hi = -1;
    {
        std::istringstream ss(dim_range);
        char sep = 0;
        if (!(ss >> lo >> sep >> hi) || sep != ':')
            throw std::invalid_argument("gap-experiment: --dim-range expects lo:hi");
    }
    std::vector<int> dims;
    for (int d = lo; d <= hi; ++d) dims.push_back(d);

    std::vector<GapRow> rows(dims.size());
    const int budget = thread_budget();
    for (std::size_t base = 0; base < dims.size();
         base += static_cast<std::size_t>(budget)) {
        std::vector<std::future<GapRow>> batch;
        for (std::size_t i = base;
             i < dims.size() && i < base + static_cast<std::size_t>(budget); ++i)
            batch.push_back(std::async(std::launch::async, gap_row_for_dim, dims[i],
                                       cloud, samples, seed));
        for (std::size_t i = 0; i < batch.size(); ++i) rows[base + i] = batch[i].get();
    }

    json table = json::array();
    std::ostringstream csv;
    csv << "dim,n,delta,lambda_sdp,c,max_induced_lambda2,ratio,wall_ms\n";
    for (const auto& r : rows) {
        table.push_back({{"dim", r.dim},
                         {"n", r.n},
                         {"delta", r.delta},
                         {"lambda_sdp", r.lambda_sdp},
                         {"c", r.c},
                         {"max_induced_lambda2", r.max_induced_lambda2},
                         {"ratio", r.ratio},
                         {"wall_ms", r.wall_ms}});
        csv << r.dim << "," << r.n << "," << r.delta << "," << r.lambda_sdp << ","
            << r.c << "," << r.max_induced_lambda2 << "," << r.ratio << ","
            << r.wall_ms << "\n";
    }
    std::optional<std::string> record_file;
    if (out_dir) {
        fs::create_directories(*out_dir);
        std::ofstream f((fs::path(*out_dir) / "gap_experiment.csv").string());
        f << csv.str();
        record_file = (fs::path(*out_dir) / "gap_experiment.json").string();
    }
    json record = run_record(
        "gap-experiment", json::object(),
        json{{"dim_range", dim_range}, {"cloud", cloud}, {"samples", samples}},
        sw.ms(), seed, json{{"table", std::move(table)}, {"csv", csv.str()}});
    emit(out, record, record_file);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"induced-expander toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "generate benchmark instances");
    gen->require_subcommand(1);
    std::string gen_out = ".";
    std::string gen_name;
    std::uint64_t seed = 0;

    auto* gen_hb = gen->add_subcommand("hypercube-blowup");
    int hb_dim = 3, hb_cloud = 8;
    gen_hb->add_option("--dim", hb_dim)->required();
    gen_hb->add_option("--cloud", hb_cloud)->required();
    gen_hb->add_option("-o,--out", gen_out);
    gen_hb->add_option("--name", gen_name);

    auto* gen_cp = gen->add_subcommand("clique-paths");
    int cp_n = 8;
    double cp_delta = 0.5;
    gen_cp->add_option("--clique-n", cp_n)->required();
    gen_cp->add_option("--delta", cp_delta)->required();
    gen_cp->add_option("-o,--out", gen_out);
    gen_cp->add_option("--name", gen_name);

    auto* gen_pl = gen->add_subcommand("planted");
    int pl_n = 256, pl_din = 8, pl_dout = 4;
    double pl_delta = 0.25;
    gen_pl->add_option("--n", pl_n)->required();
    gen_pl->add_option("--delta", pl_delta)->required();
    gen_pl->add_option("--d-in", pl_din)->required();
    gen_pl->add_option("--d-out", pl_dout)->required();
    gen_pl->add_option("--seed", seed);
    gen_pl->add_option("-o,--out", gen_out);
    gen_pl->add_option("--name", gen_name);

    auto* gen_rr = gen->add_subcommand("random-regular");
    int rr_n = 64, rr_d = 4;
    gen_rr->add_option("--n", rr_n)->required();
    gen_rr->add_option("--d", rr_d)->required();
    gen_rr->add_option("--seed", seed);
    gen_rr->add_option("-o,--out", gen_out);
    gen_rr->add_option("--name", gen_name);

    // analysis commands
    std::string graph_file, solution_file, warm_file, report_file_s;
    double delta = 0.25;
    double hstar = -1.0;

    auto* sp = app.add_subcommand("spectral", "second eigenpair and sweep cut");
    sp->add_option("graph", graph_file)->required();
    sp->add_option("-o,--out", report_file_s);

    auto* gr = app.add_subcommand("greedy", "decomposition-based expander search");
    gr->add_option("graph", graph_file)->required();
    gr->add_option("--delta", delta)->required();
    gr->add_option("-o,--out", report_file_s);

    auto* ck = app.add_subcommand("check", "feasibility check of a relaxation point");
    ck->add_option("graph", graph_file)->required();
    ck->add_option("solution", solution_file)->required();
    ck->add_option("--delta", delta)->required();
    ck->add_option("--hstar", hstar);
    ck->add_option("-o,--out", report_file_s);

    auto* rd = app.add_subcommand("round", "round a relaxation point to an expander");
    rd->add_option("graph", graph_file)->required();
    rd->add_option("solution", solution_file)->required();
    rd->add_option("--delta", delta)->required();
    rd->add_option("--hstar", hstar);
    rd->add_option("-o,--out", report_file_s);

    auto* sv = app.add_subcommand("solve", "certify a relaxation value by bisection");
    SolverOptions sopts;
    sv->add_option("graph", graph_file)->required();
    sv->add_option("--delta", delta)->required();
    sv->add_option("--hstar", hstar);
    sv->add_option("--warm-start", warm_file);
    sv->add_option("--lambda-lo", sopts.lambda_lo);
    sv->add_option("--lambda-hi", sopts.lambda_hi);
    sv->add_option("--bisect-tol", sopts.bisect_tol);
    sv->add_option("--max-iters", sopts.max_proj_iters);
    sv->add_option("--feas-tol", sopts.feas_tol);
    sv->add_option("-o,--out", report_file_s);

    auto* gx = app.add_subcommand("gap-experiment",
                                  "relaxation value vs best induced expansion");
    std::string dim_range;
    int gx_cloud = 8, gx_samples = 500;
    std::string gx_out;
    gx->add_option("--dim-range", dim_range)->required();
    gx->add_option("--cloud", gx_cloud);
    gx->add_option("--samples", gx_samples);
    gx->add_option("--seed", seed);
    gx->add_option("-o,--out", gx_out);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help() << "\n";
        return 0;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return 2;
    }

    const std::optional<std::string> report_file =
        report_file_s.empty() ? std::nullopt : std::optional(report_file_s);
    const std::optional<double> hstar_opt =
        hstar >= 0.0 ? std::optional(hstar) : std::nullopt;

    try {
        if (gen->parsed()) {
            Stopwatch sw;
            InstanceBundle b;
            if (gen_hb->parsed()) {
                b = hypercube_blowup(hb_dim, hb_cloud);
                if (gen_name.empty())
                    gen_name = "hypercube_d" + std::to_string(hb_dim) + "_c" +
                               std::to_string(hb_cloud);
            } else if (gen_cp->parsed()) {
                b = clique_with_paths(cp_n, cp_delta);
                if (gen_name.empty()) gen_name = "cliquepaths_n" + std::to_string(cp_n);
            } else if (gen_pl->parsed()) {
                b = planted_expander(pl_n, pl_delta, pl_din, pl_dout, seed);
                if (gen_name.empty())
                    gen_name = "planted_n" + std::to_string(pl_n) + "_s" +
                               std::to_string(seed);
            } else {
                b.graph = random_regular(rr_n, rr_d, seed);
                b.generator = "random-regular";
                b.params = json{{"n", rr_n}, {"d", rr_d}};
                b.seed = seed;
                if (gen_name.empty())
                    gen_name = "regular_n" + std::to_string(rr_n) + "_d" +
                               std::to_string(rr_d) + "_s" + std::to_string(seed);
            }
            const std::string sidecar = save_bundle(b, gen_out, gen_name);
            json payload{{"bundle_file", sidecar},
                         {"n", b.graph.n()},
                         {"delta_deg", b.graph.delta()},
                         {"measured", b.measured}};
            emit(out, run_record("gen", json::object(), b.params, sw.ms(), seed,
                                 payload),
                 std::nullopt);
            return 0;
        }
        if (sp->parsed()) {
            Stopwatch sw;
            WeightedGraph g = load_graph(graph_file);
            EigenPair pair = lambda2(g);
            json payload{{"lambda2", pair.value}, {"n", g.n()}};
            if (pair.vector.maxCoeff() - pair.vector.minCoeff() > 0.0) {
                auto [set, val] = sweep_cut(g, pair.vector);
                payload["sweep"] = {{"set", set.members()}, {"value", val}};
            }
            emit(out,
                 run_record("spectral", json{{"graph", graph_file}}, json::object(),
                            sw.ms(), seed, payload),
                 report_file);
            return 0;
        }
        if (gr->parsed()) {
            Stopwatch sw;
            WeightedGraph g = load_graph(graph_file);
            GreedyResult res = greedy_find_expander(g, delta);
            json payload{{"set", res.set.members()},
                         {"size", res.set.size()},
                         {"eps", res.eps_used},
                         {"lambda2", res.certificate},
                         {"levels_tried", res.partitions_tried.size() + 1}};
            emit(out,
                 run_record("greedy", json{{"graph", graph_file}},
                            json{{"delta", delta}}, sw.ms(), seed, payload),
                 report_file);
            return 0;
        }
        if (ck->parsed()) {
            Stopwatch sw;
            WeightedGraph g = load_graph(graph_file);
            SdpSolution sol = load_solution(g, solution_file);
            FeasibilityReport rep = check_feasible(g, sol, delta, hstar_opt);
            json payload = feasibility_to_json(rep);
            payload["lambda"] = sol.lambda;
            json params{{"delta", delta}};
            if (hstar_opt) params["hstar"] = *hstar_opt;
            emit(out,
                 run_record("check",
                            json{{"graph", graph_file}, {"solution", solution_file}},
                            params, sw.ms(), seed, payload),
                 report_file);
            return rep.feasible ? 0 : 3;
        }
        if (rd->parsed()) {
            Stopwatch sw;
            WeightedGraph g = load_graph(graph_file);
            SdpSolution sol = load_solution(g, solution_file);
            RoundingReport rep = hstar_opt ? round_sdp2(g, sol, delta, *hstar_opt)
                                           : round_sdp1(g, sol, delta);
            json params{{"delta", delta}};
            if (hstar_opt) params["hstar"] = *hstar_opt;
            emit(out,
                 run_record("round",
                            json{{"graph", graph_file}, {"solution", solution_file}},
                            params, sw.ms(), seed, rounding_report_to_json(rep)),
                 report_file);
            return 0;
        }
        if (sv->parsed()) {
            Stopwatch sw;
            WeightedGraph g = load_graph(graph_file);
            std::optional<SdpSolution> warm;
            if (!warm_file.empty()) warm = load_solution(g, warm_file);
            SolveResult res = solve_sdp(g, delta, hstar_opt, sopts, warm);
            json probes = json::array();
            for (const auto& p : res.probes)
                probes.push_back({{"lambda", p.lambda},
                                  {"feasible", p.feasible},
                                  {"iterations", p.iterations}});
            json payload{{"lambda", res.lambda},
                         {"solution", solution_to_json(g, res.solution)},
                         {"probes", std::move(probes)},
                         {"y_support",
                          {{"mode", res.y_support_mode},
                           {"size", res.y_support_size}}}};
            json params{{"delta", delta},
                        {"bisect_tol", sopts.bisect_tol},
                        {"feas_tol", sopts.feas_tol},
                        {"max_iters", sopts.max_proj_iters}};
            if (hstar_opt) params["hstar"] = *hstar_opt;
            if (!warm_file.empty()) params["warm_start"] = warm_file;
            emit(out,
                 run_record("solve", json{{"graph", graph_file}}, params, sw.ms(),
                            seed, payload),
                 report_file);
            return 0;
        }
        if (gx->parsed()) {
            return cmd_gap_experiment(
                dim_range, gx_cloud, gx_samples, seed,
                gx_out.empty() ? std::nullopt : std::optional(gx_out), out);
        }
    } catch (const InfeasibleError& e) {
        err << "certified infeasible: " << e.what() << "\n";
        return 3;
    } catch (const UndeterminedError& e) {
        err << "undetermined: " << e.what() << "\n";
        return 4;
    } catch (const std::invalid_argument& e) {
        err << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        err << "aborted: " << e.what() << "\n";
        return 4;
    }
    err << "no subcommand selected\n";
    return 2;
}

}  // namespace exk
