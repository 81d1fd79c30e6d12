#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>

#include "fegraph/factorization.hpp"
#include "fegraph/fe_distance.hpp"
#include "fegraph/graph.hpp"
#include "fegraph/similarity.hpp"

namespace fegraph {

// End-to-end embedding options: distance/similarity construction plus the
// factorization settings. targets == 0 keeps all nodes (square similarity,
// tied symmetric factorization); a positive count samples that many target
// columns and unties the factors.
struct PipelineOptions {
    SimilaritySource source = SimilaritySource::FE;
    FEParams fe;
    int targets = 0;
    double percentile = 70.0;
    double max_target = 6.0;
    int window = 10;
    int negatives = 1;
    int dense_cap = 5000;
    std::string external_path; // binary similarity container for External
    FitOptions fit;
    int threads = 0;
};

struct PipelineResult {
    SimilarityMatrix similarity;
    FitResult fit;
};

// Builds the similarity for a preprocessed connected graph and fits the
// factorization. The row embedding U is the node embedding.
PipelineResult run_pipeline(const Graph& g, const PipelineOptions& opts, std::uint64_t seed);

// Convenience wrapper returning only U.
Eigen::MatrixXd embed_graph(const Graph& g, const PipelineOptions& opts, std::uint64_t seed);

} // namespace fegraph
