#ifndef EXK_ROUNDING_HPP
#define EXK_ROUNDING_HPP

#include <json.hpp>

#include <optional>

#include "exk/graph.hpp"
#include "exk/sdp.hpp"

namespace exk {

// A window in log-weight space: the vertices whose z falls in
// [e^t, e^(t + window_len)], so the width ratio is at most e^window_len.
struct WindowChoice {
    double t = 0.0;
    double window_len = 0.0;
    VertexSet set;
    double hx = 0.0;
    double alpha = 0.0;  // sum_e x_e / z(V)
};

struct RoundingParams {
    double delta = 0.0;
    double eps = 0.0;
    double window_len = 0.0;
    std::optional<double> hstar;
};

struct RefineOutcome {
    enum class Kind { Expander, NonExpanding };
    Kind kind = Kind::Expander;
    VertexSet set;
    double lambda2 = 0.0;  // when Expander
    double hx = 0.0;       // when NonExpanding
};

struct RoundingReport {
    RoundingParams params;
    WindowChoice window;  // set in original vertex ids
    VertexSet result;
    double lambda2_check = 0.0;
    int size_check = 0;
};

// Minimizes h_x over every set realizable as a log-z window of the given
// length. All z_v must be positive (restrict_to_support first).
WindowChoice find_low_width_set(const WeightedGraph& g, const SdpSolution& sol,
                                double window_len);

// Returns s itself when |s| <= delta n / 2; otherwise decomposes G[s] with
// the absolute cap floor(delta n / 2) and returns either the expander or
// the partition block of minimum h_x.
RefineOutcome refine_to_expander(const WeightedGraph& g, const SdpSolution& sol,
                                 const VertexSet& s, double delta, double eps);

RoundingReport round_sdp1(const WeightedGraph& g, const SdpSolution& sol,
                          double delta);

RoundingReport round_sdp2(const WeightedGraph& g, const SdpSolution& sol,
                          double delta, double hstar);

nlohmann::json rounding_report_to_json(const RoundingReport& rep);

}  // namespace exk

#endif
