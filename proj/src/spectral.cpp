#include "exk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace exk {

namespace {

constexpr int kDenseLimit = 512;
constexpr double kResidualTol = 1e-9;

Eigen::VectorXd apply_laplacian(const WeightedGraph& g, const Eigen::VectorXd& x) {
    Eigen::VectorXd y(g.n());
    for (int v = 0; v < g.n(); ++v) {
        double acc = g.weighted_degree(v) * x[v];
        for (const auto& [u, w] : g.neighbors(v)) acc -= w * x[u];
        y[v] = acc;
    }
    return y;
}

void deflate_ones(Eigen::VectorXd& v) {
    v.array() -= v.mean();
}

EigenPair lambda2_dense(const WeightedGraph& g) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(laplacian(g));
    if (es.info() != Eigen::Success)
        throw std::runtime_error("lambda2: dense eigensolver failed");
    Eigen::VectorXd v = es.eigenvectors().col(1);
    deflate_ones(v);
    v.normalize();
    return {es.eigenvalues()[1], std::move(v)};
}

// Lanczos with full reorthogonalization against the basis and the all-ones
// direction, restarted from the best Ritz vector until the residual passes.
EigenPair lambda2_lanczos(const WeightedGraph& g) {
    const int n = g.n();
    const int block = std::min(n - 1, 160);
    const long cap = static_cast<long>(10.0 * n * std::log(std::max(3, n)));
    long matvecs = 0;

    Eigen::VectorXd start = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < n; ++i) start[i] = std::cos(1.0 + 0.7 * i);
    deflate_ones(start);
    start.normalize();

    double theta = 0.0;
    Eigen::VectorXd ritz = start;
    double residual = std::numeric_limits<double>::infinity();

    while (matvecs < cap) {
        std::vector<Eigen::VectorXd> basis;
        Eigen::VectorXd alpha(block), beta(block);
        Eigen::VectorXd q = ritz;
        deflate_ones(q);
        q.normalize();
        basis.push_back(q);
        int m = 0;
        for (int j = 0; j < block; ++j) {
            Eigen::VectorXd w = apply_laplacian(g, basis[j]);
            ++matvecs;
            alpha[j] = basis[j].dot(w);
            w -= alpha[j] * basis[j];
            if (j > 0) w -= beta[j - 1] * basis[j - 1];
            deflate_ones(w);
            for (const auto& b : basis) w -= b.dot(w) * b;
            beta[j] = w.norm();
            m = j + 1;
            if (beta[j] < 1e-13) break;
            if (j + 1 < block) basis.push_back(w / beta[j]);
        }
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            T(j, j) = alpha[j];
            if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        theta = es.eigenvalues()[0];
        Eigen::VectorXd y = es.eigenvectors().col(0);
        ritz = Eigen::VectorXd::Zero(n);
        for (int j = 0; j < m; ++j) ritz += y[j] * basis[j];
        deflate_ones(ritz);
        ritz.normalize();
        residual = (apply_laplacian(g, ritz) - theta * ritz).lpNorm<Eigen::Infinity>();
        ++matvecs;
        if (residual <= kResidualTol * (1.0 + std::abs(theta)))
            return {theta, std::move(ritz)};
    }
    throw std::runtime_error("lambda2: Lanczos did not converge, residual " +
                             std::to_string(residual) + " after " +
                             std::to_string(matvecs) + " matvecs");
}

}  // namespace

EigenPair lambda2(const WeightedGraph& g) {
    const int n = g.n();
    if (n < 2) throw std::invalid_argument("lambda2: need at least 2 vertices");

    int comps = 0;
    auto label = component_labels(g, &comps);
    if (comps > 1) {
        // Exact kernel vector: indicator of the smallest component, shifted
        // to be orthogonal to ones and normalized.
        std::vector<int> sizes(comps, 0);
        for (int v = 0; v < n; ++v) ++sizes[label[v]];
        const int c =
            static_cast<int>(std::min_element(sizes.begin(), sizes.end()) - sizes.begin());
        const double k = sizes[c];
        const double a = std::sqrt((n - k) / (n * k));
        const double b = -std::sqrt(k / (n * (n - k)));
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = label[i] == c ? a : b;
        return {0.0, std::move(v)};
    }
    if (n <= kDenseLimit) return lambda2_dense(g);
    return lambda2_lanczos(g);
}

std::pair<VertexSet, double> sweep_cut(const WeightedGraph& g,
                                       const Eigen::VectorXd& f) {
    const int n = g.n();
    if (f.size() != n) throw std::invalid_argument("sweep_cut: vector size mismatch");
    if (n < 2) throw std::invalid_argument("sweep_cut: need at least 2 vertices");
    if (f.maxCoeff() - f.minCoeff() == 0.0)
        throw std::invalid_argument("sweep_cut: constant vector");

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return f[a] != f[b] ? f[a] < f[b] : a < b;
    });

    std::vector<char> in(n, 0);
    double cut = 0.0;
    double best_val = std::numeric_limits<double>::infinity();
    int best_k = -1, best_balance = n + 1;
    for (int i = 0; i + 1 < n; ++i) {
        const int v = order[i];
        in[v] = 1;
        for (const auto& [u, w] : g.neighbors(v)) cut += in[u] ? -w : w;
        const int k = i + 1;
        const int side = std::min(k, n - k);
        const double val = cut / side;
        const int balance = std::abs(n - 2 * k);
        if (val < best_val ||
            (val == best_val && (balance < best_balance ||
                                 (balance == best_balance && k < best_k)))) {
            best_val = val;
            best_k = k;
            best_balance = balance;
        }
    }
    std::vector<int> side;
    if (best_k <= n - best_k)
        side.assign(order.begin(), order.begin() + best_k);
    else
        side.assign(order.begin() + best_k, order.end());
    return {VertexSet(std::move(side)), best_val};
}

BisectionOutcome spectral_bisection(const WeightedGraph& g, double eps) {
    if (g.n() == 0) throw std::invalid_argument("spectral_bisection: empty graph");
    if (!(eps > 0.0 && eps < 1.0))
        throw std::invalid_argument("spectral_bisection: eps must be in (0,1)");

    const int n = g.n();
    std::vector<int> current(n);
    std::iota(current.begin(), current.end(), 0);

    while (4 * static_cast<int>(current.size()) >= 3 * n) {
        VertexSet s(current);
        WeightedGraph h = induced_subgraph(g, s);
        if (h.n() < 2)
            throw std::runtime_error("spectral_bisection: subgraph too small to certify");
        EigenPair pair = lambda2(h);
        // pair.value > 0 keeps the degenerate delta = 0 case (edgeless
        // graphs) from certifying vacuously.
        if (pair.value >= eps * g.delta() && pair.value > 0.0)
            return {BisectionOutcome::Kind::ExpanderFound, s, pair.value};
        auto [t_local, val] = sweep_cut(h, pair.vector);
        (void)val;
        if (t_local.size() == 0 || t_local.size() == h.n())
            throw std::runtime_error("spectral_bisection: degenerate sweep side");
        std::vector<char> remove(h.n(), 0);
        for (int i : t_local.members()) remove[i] = 1;
        std::vector<int> next;
        next.reserve(current.size() - t_local.size());
        for (std::size_t i = 0; i < current.size(); ++i)
            if (!remove[i]) next.push_back(current[i]);
        current = std::move(next);
    }
    VertexSet removed = VertexSet(current).complement(n);
    return {BisectionOutcome::Kind::BalancedSparseCut, removed,
            set_expansion(g, removed)};
}

}  // namespace exk
