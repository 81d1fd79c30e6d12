#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace fegraph {

// Per-node label sets. Single-label data has exactly one label per node.
struct LabelSet {
    std::vector<std::vector<int>> labels;
    bool multi_label = false;
    int num_labels = 0;

    int size() const { return static_cast<int>(labels.size()); }
};

LabelSet make_label_set(std::vector<std::vector<int>> labels);

// Flat single-label view; errors on multi-label data.
std::vector<int> single_labels(const LabelSet& ls);

struct LogRegOptions {
    double l2 = 1.0; // common default; bias unregularized
    int max_iters = 500;
    double tol = 1e-8;
};

// One binary logistic regression per label (one-vs-rest), trained by
// full-batch gradient descent with backtracking line search on the
// l2-regularized negative log-likelihood. Labels with a single class get
// the constant prior classifier.
struct LogRegModel {
    Eigen::MatrixXd w; // num_labels x d
    Eigen::VectorXd b; // num_labels

    // Per-label linear scores, rows = examples.
    Eigen::MatrixXd scores(const Eigen::MatrixXd& x) const;

    // Top-k labels per example, k from per-example counts.
    std::vector<std::vector<int>> predict_top_k(const Eigen::MatrixXd& x,
                                                const std::vector<int>& k) const;
};

LogRegModel fit_logreg_ovr(const Eigen::MatrixXd& x, const LabelSet& y,
                           const LogRegOptions& opts = {}, std::uint64_t seed = 0);

} // namespace fegraph
