#pragma once

#include <Eigen/Core>

#include "fegraph/fe_distance.hpp"
#include "fegraph/graph.hpp"

namespace fegraph {

enum class SimilaritySource { FE, DeepWalk, External };

// Entries may be negative or -infinity (-infinity means "no association";
// it becomes a pure-repulsion pair downstream). shift/scale record the
// affine transform for FE-derived matrices.
struct SimilarityMatrix {
    Eigen::MatrixXd values;
    SimilaritySource source = SimilaritySource::External;
    double shift = 0.0;   // b
    double scale = 1.0;   // gamma
    double eta = 0.0;     // FE only
    int window = 0;       // DeepWalk only
    int negatives = 0;    // DeepWalk only
};

struct PosNegWeights {
    Eigen::MatrixXd s_plus;
    Eigen::MatrixXd s_minus;
};

// S = gamma * (-Delta + b). b is the nearest-rank percentile (the
// ceil(p/100 * m)-th smallest of the m off-diagonal entries, where
// "diagonal" means source node == target node) and gamma scales the largest
// off-diagonal entry of -Delta + b to max_target.
SimilarityMatrix to_similarity(const DissimilarityMatrix& delta, double percentile = 70.0,
                               double max_target = 6.0);

// The matrix DeepWalk implicitly factorizes:
// S = log( vol(G) / (negatives * window) * sum_{t=1..window} P^t D^-1 ),
// computed with dense powers; zero inner entries map to -infinity.
SimilarityMatrix deepwalk_similarity(const Graph& g, int window = 10, int negatives = 1,
                                     int dense_cap = 5000);

// S+ = exp(S) (with -infinity -> 0), S- = 1. Entries above exp_cap indicate
// a mis-scaled similarity and are rejected.
PosNegWeights pos_neg_from_similarity(const SimilarityMatrix& s, double exp_cap = 30.0);

} // namespace fegraph
