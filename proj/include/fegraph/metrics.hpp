#pragma once

#include <map>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace fegraph {

// Maximum-reward assignment (Kuhn-Munkres). Returns, for each row, the
// assigned column or -1; rectangular inputs are padded internally.
std::vector<int> max_assignment(const Eigen::MatrixXd& reward);

// Mutual information normalized by the arithmetic mean of the entropies.
double nmi_score(const std::vector<int>& a, const std::vector<int>& b);

// Adjusted Rand index (pair-counting, chance-corrected).
double ari_score(const std::vector<int>& a, const std::vector<int>& b);

// ACC, NMI, ARI and weighted F1 of a predicted clustering against
// single-label ground truth; ACC and weighted F1 are computed after mapping
// clusters to classes with max_assignment on the contingency table.
std::map<std::string, double> clustering_scores(const std::vector<int>& pred,
                                                const std::vector<int>& truth);

// Micro/macro F1 over per-node predicted and true label sets.
std::map<std::string, double> f1_scores(const std::vector<std::vector<int>>& pred,
                                        const std::vector<std::vector<int>>& truth,
                                        int num_labels);

// Probability that a random positive scores above a random negative, ties
// counted one half (Mann-Whitney).
double auc_score(const std::vector<double>& scores, const std::vector<int>& labels);

enum class PairOperator { Average, Hadamard, WeightedL1, WeightedL2 };

PairOperator pair_operator_from_string(const std::string& name);
std::string to_string(PairOperator op);

// Per-coordinate pair features: (u+v)/2, u*v, |u-v|, |u-v|^2.
Eigen::VectorXd pair_embedding(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                               PairOperator op);

} // namespace fegraph
