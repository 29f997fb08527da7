#ifndef EXK_SDP_HPP
#define EXK_SDP_HPP

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "exk/graph.hpp"

namespace exk {

// A point or problem certified infeasible (e.g. x = 0 is forced, or an
// input point fails the checker).
struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// A verdict could not be reached within the configured budget.
struct UndeterminedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Entry of the pair-indexed vector y. Pairs are unordered (u <= v); the
// diagonal u == v is allowed and contributes to row sums only.
struct YEntry {
    int u = 0;
    int v = 0;
    double val = 0.0;
};

// Relaxation variables: x lives on the graph edges (aligned with the edge
// order of the host graph), y on a sparse set of vertex pairs. The vertex
// weights z_v = max_{e ~ v} x_e are always derived, never stored.
struct SdpSolution {
    std::vector<double> x;
    std::vector<YEntry> y;
    double lambda = 0.0;

    static SdpSolution zero(const WeightedGraph& g);
};

struct FeasibilityReport {
    bool feasible = false;
    double lmi = 0.0;    // min eigenvalue of sum x_e L_e - lambda sum y_uv L_uv
    double sum_y = 0.0;  // min_u (sum_v y_uv - z_u)
    double cap_y = 0.0;  // min_{u,v} (sum_w y_uw - delta n * y_uv)
    std::optional<double> density;  // sum x_e - (delta_deg - hstar)/2 * sum z_u
    bool x_nonneg = true;
    bool y_nonneg = true;
    bool x_nonzero = true;
    std::string reason;  // first violated requirement, empty when feasible
};

// Normalizes y entries (u <= v, sorted, merged) and validates indices
// against g. Throws on x entries for non-edges via size mismatch.
SdpSolution make_solution(const WeightedGraph& g, std::vector<double> x,
                          std::vector<YEntry> y, double lambda);

std::vector<double> z_weights(const WeightedGraph& g, const SdpSolution& sol);
std::vector<double> y_row_sums(const WeightedGraph& g, const SdpSolution& sol);

// x_e = w_e on edges inside s, y = 1/|s| on all pairs from s (diagonal
// included), lambda = lambda2 of the induced subgraph (0 when disconnected).
SdpSolution integral_solution(const WeightedGraph& g, const VertexSet& s);

FeasibilityReport check_feasible(const WeightedGraph& g, const SdpSolution& sol,
                                 double delta,
                                 std::optional<double> hstar = std::nullopt,
                                 double tol = 1e-6);

// Min eigenvalue of sum_e x_e L_e - lambda sum_{u,v} y_uv L_uv. The second
// form overrides the lambda stored in the solution.
double lmi_margin(const WeightedGraph& g, const SdpSolution& sol);
double lmi_margin(const WeightedGraph& g, const SdpSolution& sol, double lambda);

// Weighted expansions h_x(S) = x(S, S-bar) / z(S) and the y analogue
// (numerator over all pairs, not only edges).
double weighted_expansion_x(const WeightedGraph& g, const SdpSolution& sol,
                            const VertexSet& s);
double weighted_expansion_y(const WeightedGraph& g, const SdpSolution& sol,
                            const VertexSet& s);

// Deletes vertices of weight zero; y entries touching them are dropped.
struct SupportRestriction {
    WeightedGraph graph;
    SdpSolution solution;
    std::vector<int> orig_ids;  // local index -> original vertex
};
SupportRestriction restrict_to_support(const WeightedGraph& g,
                                       const SdpSolution& sol);

// Solution schema: {"lambda": float, "x": [[u,v,val],...], "y": [[u,v,val],...]}
nlohmann::json solution_to_json(const WeightedGraph& g, const SdpSolution& sol);
SdpSolution solution_from_json(const WeightedGraph& g, const nlohmann::json& j);
SdpSolution load_solution(const WeightedGraph& g, const std::string& path);
void save_solution(const WeightedGraph& g, const SdpSolution& sol,
                   const std::string& path);

nlohmann::json feasibility_to_json(const FeasibilityReport& rep);

}  // namespace exk

#endif
