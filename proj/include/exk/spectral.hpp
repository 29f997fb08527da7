#ifndef EXK_SPECTRAL_HPP
#define EXK_SPECTRAL_HPP

#include <Eigen/Dense>

#include <utility>

#include "exk/graph.hpp"

namespace exk {

// Second-smallest Laplacian eigenvalue with a unit eigenvector orthogonal
// to the all-ones direction.
struct EigenPair {
    double value = 0.0;
    Eigen::VectorXd vector;
};

struct BisectionOutcome {
    enum class Kind { ExpanderFound, BalancedSparseCut };
    Kind kind = Kind::ExpanderFound;
    VertexSet set;
    // lambda2 of the induced graph for ExpanderFound, expansion of the cut
    // side for BalancedSparseCut.
    double certificate = 0.0;
};

// Disconnected graphs return exactly 0 with a component-indicator vector.
EigenPair lambda2(const WeightedGraph& g);

// Best threshold cut of f: sorts vertices by f and minimizes
// cut(T)/|T| over the smaller side of each of the n-1 thresholds.
std::pair<VertexSet, double> sweep_cut(const WeightedGraph& g,
                                       const Eigen::VectorXd& f);

// Repeated sweep rounding: returns either a large induced expander
// (lambda2 >= eps * delta, size >= 3n/4) or a balanced cut of expansion
// at most sqrt(2 eps) * delta.
BisectionOutcome spectral_bisection(const WeightedGraph& g, double eps);

}  // namespace exk

#endif
