#include "fegraph/fe_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>

#include <Eigen/Dense>

#include "fegraph/errors.hpp"
#include "fegraph/parallel.hpp"
#include "fegraph/rng.hpp"

namespace fegraph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_params(const FEParams& p) {
    if (!(p.eta > 0.0))
        throw ValidationError("fe: eta must be positive");
    if (p.horizon < 0)
        throw ValidationError("fe: horizon must be positive or 0 (until convergence)");
    if (!(p.convergence_tol > 0.0))
        throw ValidationError("fe: convergence_tol must be positive");
    if (!(p.drop_threshold > 0.0))
        throw ValidationError("fe: drop_threshold must be positive");
    if (p.max_sweeps < 0)
        throw ValidationError("fe: max_sweeps must be nonnegative");
}

// Flat adjacency with per-arc transition probability and cost.
struct Arcs {
    std::vector<int> offset;
    std::vector<int> head;
    std::vector<double> prob;
    std::vector<double> cost;
};

Arcs build_arcs(const Graph& g) {
    Arcs a;
    a.offset.assign(g.n + 1, 0);
    for (int s = 0; s < g.n; ++s)
        a.offset[s + 1] = a.offset[s] + static_cast<int>(g.adj[s].size());
    a.head.resize(a.offset.back());
    a.prob.resize(a.offset.back());
    a.cost.resize(a.offset.back());
    for (int s = 0; s < g.n; ++s) {
        if (g.degree[s] <= 0.0)
            throw ValidationError("fe: node " + std::to_string(s) + " has zero degree");
        int k = a.offset[s];
        for (const Neighbor& nb : g.adj[s]) {
            a.head[k] = nb.node;
            a.prob[k] = nb.weight / g.degree[s];
            a.cost[k] = 1.0 / nb.weight;
            ++k;
        }
    }
    return a;
}

void fe_column(const Arcs& a, int n, const FEParams& p, int t, double* out) {
    const int cap = p.horizon > 0 ? p.horizon
                                  : (p.max_sweeps > 0 ? p.max_sweeps : 10 * n);
    std::vector<double> cur(n, kInf), next(n, kInf);
    cur[t] = 0.0;
    next[t] = 0.0;
    for (int sweep = 1; sweep <= cap; ++sweep) {
        double max_change = 0.0;
        for (int s = 0; s < n; ++s) {
            if (s == t)
                continue;
            const int b = a.offset[s], e = a.offset[s + 1];
            double xstar = kInf;
            for (int k = b; k < e; ++k)
                xstar = std::min(xstar, a.cost[k] + cur[a.head[k]]);
            double value = kInf;
            if (xstar < kInf) {
                double sum = 0.0;
                for (int k = b; k < e; ++k) {
                    const double x = a.cost[k] + cur[a.head[k]];
                    if (x == kInf)
                        continue;
                    const double gap = p.eta * (x - xstar);
                    if (gap > p.drop_threshold)
                        continue;
                    sum += a.prob[k] * std::exp(-gap);
                }
                value = xstar - std::log(sum) / p.eta;
                if (!std::isfinite(value))
                    throw NumericalError("fe: non-finite value at source " + std::to_string(s) +
                                         ", target " + std::to_string(t) + ", sweep " +
                                         std::to_string(sweep));
            }
            next[s] = value;
            if (value < kInf)
                max_change = std::max(max_change,
                                      cur[s] < kInf ? std::abs(value - cur[s]) : kInf);
        }
        cur.swap(next);
        if (p.horizon == 0 && max_change < p.convergence_tol)
            break;
    }
    for (int s = 0; s < n; ++s)
        out[s] = cur[s];
}

} // namespace

DissimilarityMatrix fe_directed(const Graph& g, const FEParams& params,
                                const std::vector<int>& targets, int threads) {
    check_params(params);
    if (targets.empty())
        throw ValidationError("fe_directed: empty target set");
    for (std::size_t j = 0; j < targets.size(); ++j) {
        if (targets[j] < 0 || targets[j] >= g.n)
            throw ValidationError("fe_directed: target out of range");
        if (j > 0 && targets[j] <= targets[j - 1])
            throw ValidationError("fe_directed: targets must be strictly ascending");
    }
    if (!is_connected(g))
        throw ValidationError("fe_directed: graph must be connected");
    const Arcs arcs = build_arcs(g);

    DissimilarityMatrix dm;
    dm.params = params;
    dm.targets = targets;
    dm.values.resize(g.n, static_cast<Eigen::Index>(targets.size()));
    parallel_chunks(targets.size(), threads, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> column(g.n);
        for (std::size_t j = lo; j < hi; ++j) {
            fe_column(arcs, g.n, params, targets[j], column.data());
            for (int s = 0; s < g.n; ++s)
                dm.values(s, static_cast<Eigen::Index>(j)) = column[s];
        }
    });
    return dm;
}

DissimilarityMatrix symmetrize(const DissimilarityMatrix& phi) {
    if (phi.values.rows() != phi.values.cols())
        throw ValidationError("symmetrize: matrix must be square (all targets)");
    for (std::size_t j = 0; j < phi.targets.size(); ++j)
        if (phi.targets[j] != static_cast<int>(j))
            throw ValidationError("symmetrize: targets must cover all nodes in order");
    DissimilarityMatrix out = phi;
    out.values = 0.5 * (phi.values + phi.values.transpose());
    out.symmetric = true;
    return out;
}

DissimilarityMatrix fe_distance(const Graph& g, double eta, double tol, int max_sweeps,
                                double drop_threshold, int threads) {
    FEParams p;
    p.eta = eta;
    p.horizon = 0;
    p.convergence_tol = tol;
    p.drop_threshold = drop_threshold;
    p.max_sweeps = max_sweeps;
    std::vector<int> all(g.n);
    for (int i = 0; i < g.n; ++i)
        all[i] = i;
    return symmetrize(fe_directed(g, p, all, threads));
}

DissimilarityMatrix sp_distance(const Graph& g) {
    if (!is_connected(g))
        throw ValidationError("sp_distance: graph must be connected");
    DissimilarityMatrix dm;
    dm.symmetric = true;
    dm.targets.resize(g.n);
    for (int i = 0; i < g.n; ++i)
        dm.targets[i] = i;
    dm.values = Eigen::MatrixXd::Constant(g.n, g.n, kInf);
    using Item = std::pair<double, int>;
    for (int src = 0; src < g.n; ++src) {
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        auto dist = dm.values.col(src);
        dist(src) = 0.0;
        heap.emplace(0.0, src);
        while (!heap.empty()) {
            const auto [d, u] = heap.top();
            heap.pop();
            if (d > dist(u))
                continue;
            for (const Neighbor& nb : g.adj[u]) {
                const double nd = d + 1.0 / nb.weight;
                if (nd < dist(nb.node)) {
                    dist(nb.node) = nd;
                    heap.emplace(nd, nb.node);
                }
            }
        }
    }
    // Symmetric by construction; average away roundoff asymmetry.
    dm.values = 0.5 * (dm.values + dm.values.transpose()).eval();
    return dm;
}

DissimilarityMatrix ct_distance(const Graph& g) {
    if (!is_connected(g))
        throw ValidationError("ct_distance: graph must be connected");
    for (const Edge& e : g.edges)
        if (e.w != 1.0)
            throw ValidationError("ct_distance: only unit edge weights are supported");
    const Eigen::MatrixXd p = g.transition();
    Eigen::MatrixXd hitting = Eigen::MatrixXd::Zero(g.n, g.n); // hitting(s, t) = H(s, t)
    for (int t = 0; t < g.n; ++t) {
        // Solve (I - P_{-t}) h = 1 over the non-target rows.
        const int m = g.n - 1;
        Eigen::MatrixXd sys(m, m);
        for (int r = 0, i = 0; r < g.n; ++r) {
            if (r == t)
                continue;
            for (int c = 0, j = 0; c < g.n; ++c) {
                if (c == t)
                    continue;
                sys(i, j) = (r == c ? 1.0 : 0.0) - p(r, c);
                ++j;
            }
            ++i;
        }
        const Eigen::VectorXd h = Eigen::PartialPivLU<Eigen::MatrixXd>(sys).solve(
            Eigen::VectorXd::Ones(m));
        for (int r = 0, i = 0; r < g.n; ++r) {
            if (r == t)
                continue;
            hitting(r, t) = h(i++);
        }
    }
    DissimilarityMatrix dm;
    dm.symmetric = true;
    dm.targets.resize(g.n);
    for (int i = 0; i < g.n; ++i)
        dm.targets[i] = i;
    dm.values = hitting + hitting.transpose();
    return dm;
}

double path_enumeration_oracle(const Graph& g, double eta, int s, int t, int max_len) {
    if (g.n > 8)
        throw ValidationError("path_enumeration_oracle: graph too large (n <= 8)");
    if (max_len > 12 || max_len < 0)
        throw ValidationError("path_enumeration_oracle: max_len out of range (<= 12)");
    if (s < 0 || s >= g.n || t < 0 || t >= g.n)
        throw ValidationError("path_enumeration_oracle: node out of range");
    if (!(eta > 0.0))
        throw ValidationError("path_enumeration_oracle: eta must be positive");
    if (s == t)
        return 0.0;
    double mass = 0.0;
    // Depth-first over random-walk trajectories; a trajectory is absorbed
    // (and counted) the first time it reaches t.
    auto walk = [&](auto&& self, int u, int len, double pref, double cost) -> void {
        if (len == max_len)
            return;
        for (const Neighbor& nb : g.adj[u]) {
            const double pr = pref * nb.weight / g.degree[u];
            const double c = cost + 1.0 / nb.weight;
            if (nb.node == t)
                mass += pr * std::exp(-eta * c);
            else
                self(self, nb.node, len + 1, pr, c);
        }
    };
    walk(walk, s, 0, 1.0, 0.0);
    if (mass == 0.0)
        return kInf;
    return -std::log(mass) / eta;
}

std::vector<int> sample_targets(int n, int count, std::uint64_t seed) {
    if (count <= 0 || count > n)
        throw ValidationError("sample_targets: count must be in [1, n]");
    Rng rng(seed);
    auto picked = rng.sample_without_replacement(static_cast<std::uint64_t>(n),
                                                 static_cast<std::uint64_t>(count));
    std::vector<int> out(picked.begin(), picked.end());
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace fegraph
