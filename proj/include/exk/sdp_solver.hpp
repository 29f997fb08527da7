#ifndef EXK_SDP_SOLVER_HPP
#define EXK_SDP_SOLVER_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "exk/graph.hpp"
#include "exk/sdp.hpp"

namespace exk {

struct SolverOptions {
    double lambda_lo = 1e-3;
    double lambda_hi = 0.0;  // <= 0 means 4 * delta_deg
    double bisect_tol = 1e-2;  // relative lambda tolerance
    int max_proj_iters = 5000;
    double feas_tol = 1e-5;
    // Restricts the y support to pairs inside the given blocks instead of
    // pairs at graph distance <= 2. Diagonals are always kept.
    std::optional<std::vector<VertexSet>> cluster_hint;
};

struct ProbeLog {
    double lambda = 0.0;
    bool feasible = false;
    int iterations = 0;
};

struct SolveResult {
    SdpSolution solution;
    double lambda = 0.0;
    std::vector<ProbeLog> probes;
    std::string y_support_mode;
    std::size_t y_support_size = 0;
};

// Binary search on lambda over a first-order feasibility subroutine
// (cyclic half-space projections plus a spectral repair step). The returned
// solution always passes check_feasible at the returned lambda; an
// uncertified probe is treated as infeasible, so the result is a lower
// bound on the optimum.
SolveResult solve_sdp(const WeightedGraph& g, double delta,
                      std::optional<double> hstar, const SolverOptions& opts,
                      const std::optional<SdpSolution>& warm_start = std::nullopt);

}  // namespace exk

#endif
