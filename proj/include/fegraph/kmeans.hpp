#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace fegraph {

struct KMeansResult {
    std::vector<int> labels;
    double objective = 0.0; // within-cluster sum of squared distances
};

// Lloyd's algorithm with k-means++ seeding; `runs` restarts with derived
// seeds, keeping the labeling with the smallest objective. Empty clusters
// are reseeded to the point farthest from its current center.
KMeansResult kmeans(const Eigen::MatrixXd& x, int k, int runs, std::uint64_t seed);

} // namespace fegraph
