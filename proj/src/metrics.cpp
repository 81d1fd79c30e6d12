#include "fegraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "fegraph/errors.hpp"

namespace fegraph {

namespace {

int label_count(const std::vector<int>& v) {
    int k = 0;
    for (int x : v) {
        if (x < 0)
            throw ValidationError("labels must be nonnegative");
        k = std::max(k, x + 1);
    }
    return k;
}

Eigen::MatrixXd contingency(const std::vector<int>& a, const std::vector<int>& b) {
    if (a.size() != b.size() || a.empty())
        throw ValidationError("labelings must be nonempty and equally sized");
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(label_count(a), label_count(b));
    for (std::size_t i = 0; i < a.size(); ++i)
        c(a[i], b[i]) += 1.0;
    return c;
}

} // namespace

std::vector<int> max_assignment(const Eigen::MatrixXd& reward) {
    if (reward.size() == 0)
        throw ValidationError("max_assignment: empty matrix");
    const int n = static_cast<int>(std::max(reward.rows(), reward.cols()));
    // Pad to square and negate: the potential-based algorithm below solves
    // the minimum-cost assignment.
    Eigen::MatrixXd cost = Eigen::MatrixXd::Zero(n, n);
    cost.topLeftCorner(reward.rows(), reward.cols()) = -reward;

    // Kuhn-Munkres with row/column potentials, one augmenting path per row.
    std::vector<double> pot_row(n + 1, 0.0), pot_col(n + 1, 0.0);
    std::vector<int> match(n + 1, n); // match[col] = row, n = unmatched
    std::vector<int> path(n + 1, n);
    for (int r = 0; r < n; ++r) {
        match[n] = r;
        int col = n;
        std::vector<double> min_reduced(n + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(n + 1, false);
        do {
            used[col] = true;
            const int row = match[col];
            double delta = std::numeric_limits<double>::infinity();
            int next = n;
            for (int c = 0; c < n; ++c) {
                if (used[c])
                    continue;
                const double reduced = cost(row, c) - pot_row[row] - pot_col[c];
                if (reduced < min_reduced[c]) {
                    min_reduced[c] = reduced;
                    path[c] = col;
                }
                if (min_reduced[c] < delta) {
                    delta = min_reduced[c];
                    next = c;
                }
            }
            for (int c = 0; c <= n; ++c) {
                if (used[c]) {
                    pot_row[match[c]] += delta;
                    pot_col[c] -= delta;
                } else {
                    min_reduced[c] -= delta;
                }
            }
            col = next;
        } while (match[col] != n);
        while (col != n) {
            const int prev = path[col];
            match[col] = match[prev];
            col = prev;
        }
    }

    std::vector<int> assign(reward.rows(), -1);
    for (int c = 0; c < n; ++c) {
        const int r = match[c];
        if (r < reward.rows() && c < reward.cols())
            assign[r] = c;
    }
    return assign;
}

double nmi_score(const std::vector<int>& a, const std::vector<int>& b) {
    const Eigen::MatrixXd c = contingency(a, b);
    const double n = static_cast<double>(a.size());
    const Eigen::VectorXd ra = c.rowwise().sum();
    const Eigen::VectorXd cb = c.colwise().sum();
    double mi = 0.0, ha = 0.0, hb = 0.0;
    for (Eigen::Index i = 0; i < ra.size(); ++i)
        if (ra(i) > 0.0)
            ha -= ra(i) / n * std::log(ra(i) / n);
    for (Eigen::Index j = 0; j < cb.size(); ++j)
        if (cb(j) > 0.0)
            hb -= cb(j) / n * std::log(cb(j) / n);
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            if (c(i, j) > 0.0)
                mi += c(i, j) / n * std::log(n * c(i, j) / (ra(i) * cb(j)));
    const double denom = 0.5 * (ha + hb);
    if (denom == 0.0)
        return 1.0; // both partitions trivial, hence identical
    return mi / denom;
}

double ari_score(const std::vector<int>& a, const std::vector<int>& b) {
    const Eigen::MatrixXd c = contingency(a, b);
    auto comb2 = [](double x) { return x * (x - 1.0) / 2.0; };
    double sum_cells = 0.0;
    for (Eigen::Index i = 0; i < c.rows(); ++i)
        for (Eigen::Index j = 0; j < c.cols(); ++j)
            sum_cells += comb2(c(i, j));
    double sum_rows = 0.0, sum_cols = 0.0;
    const Eigen::VectorXd ra = c.rowwise().sum();
    const Eigen::VectorXd cb = c.colwise().sum();
    for (Eigen::Index i = 0; i < ra.size(); ++i)
        sum_rows += comb2(ra(i));
    for (Eigen::Index j = 0; j < cb.size(); ++j)
        sum_cols += comb2(cb(j));
    const double expected = sum_rows * sum_cols / comb2(static_cast<double>(a.size()));
    const double maximum = 0.5 * (sum_rows + sum_cols);
    if (maximum == expected)
        return 1.0; // degenerate: both partitions trivial
    return (sum_cells - expected) / (maximum - expected);
}

std::map<std::string, double> clustering_scores(const std::vector<int>& pred,
                                                const std::vector<int>& truth) {
    const Eigen::MatrixXd c = contingency(pred, truth);
    const std::vector<int> assign = max_assignment(c);
    const double n = static_cast<double>(pred.size());

    double correct = 0.0;
    std::vector<std::vector<int>> mapped(pred.size()), truth_sets(pred.size());
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const int cls = assign[pred[i]];
        if (cls == truth[i])
            correct += 1.0;
        if (cls >= 0)
            mapped[i].push_back(cls);
        truth_sets[i].push_back(truth[i]);
    }
    const auto f1 = f1_scores(mapped, truth_sets, static_cast<int>(c.cols()));

    return {{"acc", correct / n},
            {"nmi", nmi_score(pred, truth)},
            {"ari", ari_score(pred, truth)},
            {"weighted_f1", f1.at("weighted_f1")}};
}

std::map<std::string, double> f1_scores(const std::vector<std::vector<int>>& pred,
                                        const std::vector<std::vector<int>>& truth,
                                        int num_labels) {
    if (pred.size() != truth.size() || pred.empty())
        throw ValidationError("f1_scores: prediction/truth size mismatch");
    std::vector<double> tp(num_labels, 0.0), fp(num_labels, 0.0), fn(num_labels, 0.0);
    std::vector<double> support(num_labels, 0.0);
    for (std::size_t i = 0; i < pred.size(); ++i) {
        for (int l : truth[i]) {
            if (l < 0 || l >= num_labels)
                throw ValidationError("f1_scores: label out of range");
            support[l] += 1.0;
            if (std::find(pred[i].begin(), pred[i].end(), l) != pred[i].end())
                tp[l] += 1.0;
            else
                fn[l] += 1.0;
        }
        for (int l : pred[i]) {
            if (l < 0 || l >= num_labels)
                throw ValidationError("f1_scores: predicted label out of range");
            if (std::find(truth[i].begin(), truth[i].end(), l) == truth[i].end())
                fp[l] += 1.0;
        }
    }
    double tp_all = 0.0, fp_all = 0.0, fn_all = 0.0;
    double macro = 0.0, weighted = 0.0, total_support = 0.0;
    for (int l = 0; l < num_labels; ++l) {
        tp_all += tp[l];
        fp_all += fp[l];
        fn_all += fn[l];
        const double denom = 2.0 * tp[l] + fp[l] + fn[l];
        const double f1 = denom > 0.0 ? 2.0 * tp[l] / denom : 0.0;
        macro += f1;
        weighted += support[l] * f1;
        total_support += support[l];
    }
    const double micro_denom = 2.0 * tp_all + fp_all + fn_all;
    return {{"micro_f1", micro_denom > 0.0 ? 2.0 * tp_all / micro_denom : 0.0},
            {"macro_f1", macro / num_labels},
            {"weighted_f1", total_support > 0.0 ? weighted / total_support : 0.0}};
}

double auc_score(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size() || scores.empty())
        throw ValidationError("auc_score: scores/labels size mismatch");
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return scores[i] < scores[j]; });
    // Rank-sum with midranks for ties.
    std::vector<double> rank(scores.size());
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j + 1 < order.size() && scores[order[j + 1]] == scores[order[i]])
            ++j;
        const double mid = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k)
            rank[order[k]] = mid;
        i = j + 1;
    }
    double pos = 0.0, neg = 0.0, rank_sum = 0.0;
    for (std::size_t k = 0; k < labels.size(); ++k) {
        if (labels[k] == 1) {
            pos += 1.0;
            rank_sum += rank[k];
        } else if (labels[k] == 0) {
            neg += 1.0;
        } else {
            throw ValidationError("auc_score: labels must be 0 or 1");
        }
    }
    if (pos == 0.0 || neg == 0.0)
        throw ValidationError("auc_score: both classes must be present");
    return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

PairOperator pair_operator_from_string(const std::string& name) {
    if (name == "average")
        return PairOperator::Average;
    if (name == "hadamard")
        return PairOperator::Hadamard;
    if (name == "l1")
        return PairOperator::WeightedL1;
    if (name == "l2")
        return PairOperator::WeightedL2;
    throw ValidationError("unknown pair operator '" + name + "'");
}

std::string to_string(PairOperator op) {
    switch (op) {
    case PairOperator::Average:
        return "average";
    case PairOperator::Hadamard:
        return "hadamard";
    case PairOperator::WeightedL1:
        return "l1";
    case PairOperator::WeightedL2:
        return "l2";
    }
    return "?";
}

Eigen::VectorXd pair_embedding(const Eigen::VectorXd& u, const Eigen::VectorXd& v,
                               PairOperator op) {
    if (u.size() != v.size())
        throw ValidationError("pair_embedding: dimension mismatch");
    switch (op) {
    case PairOperator::Average:
        return 0.5 * (u + v);
    case PairOperator::Hadamard:
        return u.cwiseProduct(v);
    case PairOperator::WeightedL1:
        return (u - v).cwiseAbs();
    case PairOperator::WeightedL2:
        return (u - v).cwiseAbs2();
    }
    throw ValidationError("pair_embedding: unknown operator");
}

} // namespace fegraph
