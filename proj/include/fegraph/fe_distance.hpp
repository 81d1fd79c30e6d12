#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "fegraph/graph.hpp"

namespace fegraph {

// Parameters of the free-energy recurrence. horizon > 0 runs exactly that
// many sweeps; horizon == 0 iterates until the largest change of any finite
// entry drops below convergence_tol, capped at max_sweeps (0 picks the
// default cap of 10*n; small eta converges slowly and needs a larger cap).
// Neighbor terms with eta*(x_i - x*) above drop_threshold are skipped;
// set it to infinity to disable truncation.
struct FEParams {
    double eta = 1.0;
    int horizon = 0;
    double convergence_tol = 1e-9;
    double drop_threshold = 7.0;
    int max_sweeps = 0;
};

struct DissimilarityMatrix {
    Eigen::MatrixXd values;    // n x |targets|
    std::vector<int> targets;
    bool symmetric = false;
    FEParams params;
};

// Directed free-energy dissimilarities phi[s][t] toward each target column.
//
// Column t starts at phi = +inf except phi[t] = 0 and repeats the damped
// Bellman-type update
//   phi[s] <- x* - (1/eta) * log sum_i P[s][i] * exp(-eta * (x_i - x*)),
//   x_i = C[s][i] + phi[i],  x* = min finite x_i,
// which after tau sweeps aggregates every absorbing walk of length <= tau.
// Entries no walk has reached stay +inf. Columns are independent and are
// computed in parallel.
DissimilarityMatrix fe_directed(const Graph& g, const FEParams& params,
                                const std::vector<int>& targets, int threads = 0);

// (Phi + Phi^T) / 2; requires a square matrix over all targets in order.
DissimilarityMatrix symmetrize(const DissimilarityMatrix& phi);

// Symmetric FE distance at convergence: fe_directed over all targets with
// horizon "until convergence", then symmetrized.
DissimilarityMatrix fe_distance(const Graph& g, double eta, double tol = 1e-9,
                                int max_sweeps = 0, double drop_threshold = 7.0,
                                int threads = 0);

// All-pairs shortest-path costs (Dijkstra per source, cost 1/weight).
DissimilarityMatrix sp_distance(const Graph& g);

// Commute times CT(s,t) = H(s,t) + H(t,s) from the hitting-time systems
// H(s,t) = 1 + sum_i P[s][i] H(i,t). Only defined for unit edge weights.
DissimilarityMatrix ct_distance(const Graph& g);

// Brute-force reference: enumerates every absorbing walk s -> t of length
// <= max_len and returns -(1/eta) * log sum_p Pref(p) * exp(-eta * c(p)).
// Exponential in max_len; restricted to tiny graphs.
double path_enumeration_oracle(const Graph& g, double eta, int s, int t, int max_len);

// Uniform sample of `count` distinct target nodes, sorted ascending.
std::vector<int> sample_targets(int n, int count, std::uint64_t seed);

} // namespace fegraph
