#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "fegraph/graph.hpp"
#include "fegraph/logreg.hpp"
#include "fegraph/metrics.hpp"

namespace fegraph {

struct EvalReport {
    std::string task;
    std::map<std::string, double> metrics;
    std::vector<std::uint64_t> seeds;
    std::map<std::string, std::string> hyperparameters;
    int repetitions = 0;
};

std::string to_json(const EvalReport& report, int indent = 2);

// Label file: "node_id label[,label,...]" per line, '#' comment lines.
// Node ids resolve against g.node_ids (or the index as a string when the
// graph has no ids); lines for unknown nodes are ignored so one label file
// can serve a graph and its preprocessed subgraph. Every node of g must end
// up labeled.
LabelSet load_label_list(std::istream& in, const Graph& g);
LabelSet load_label_list_file(const std::string& path, const Graph& g);

// Produces an n x d embedding of a graph under a derived seed; protocols
// inject the full similarity+factorization pipeline through this.
using EmbedGraphFn = std::function<Eigen::MatrixXd(const Graph&, std::uint64_t)>;
// Same, for protocols that re-embed one fixed graph.
using EmbedFn = std::function<Eigen::MatrixXd(std::uint64_t)>;

// Clustering over embed_reps embeddings x kmeans_runs single-run k-means
// realizations, k = number of classes; reports mean acc/nmi/ari/weighted_f1.
EvalReport clustering_protocol(const EmbedFn& embed, const LabelSet& truth, int embed_reps = 5,
                               int kmeans_runs = 10, std::uint64_t seed = 0);

// Per split: seeded train/test node split, one-vs-rest fit, top-k_i
// prediction (k_i = true label count); reports mean micro/macro F1.
EvalReport classification_protocol(const Eigen::MatrixXd& u, const LabelSet& truth,
                                   double train_fraction, int splits = 10,
                                   std::uint64_t seed = 0, const LogRegOptions& opts = {});

// Per repetition: edge split, embeddings learned on the train graph only,
// pair features for train/test positives and negatives, logistic regression
// on the train pairs, AUC on the test pairs; reports the mean AUC.
EvalReport link_prediction_protocol(const Graph& g, const EmbedGraphFn& embed,
                                    PairOperator op, double removal_fraction = 0.3,
                                    int repetitions = 10, std::uint64_t seed = 0,
                                    const LogRegOptions& opts = {});

} // namespace fegraph
