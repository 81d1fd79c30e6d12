#include "fegraph/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "fegraph/errors.hpp"
#include "fegraph/kmeans.hpp"
#include "fegraph/rng.hpp"

namespace fegraph {

namespace {

std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string to_json(const EvalReport& report, int indent) {
    nlohmann::json j;
    j["task"] = report.task;
    j["metrics"] = report.metrics;
    j["seeds"] = report.seeds;
    j["hyperparameters"] = report.hyperparameters;
    j["repetitions"] = report.repetitions;
    return j.dump(indent);
}

LabelSet load_label_list(std::istream& in, const Graph& g) {
    std::map<std::string, int> node_of;
    for (int i = 0; i < g.n; ++i)
        node_of[g.node_ids.empty() ? std::to_string(i) : g.node_ids[i]] = i;

    std::vector<std::vector<int>> per_node(g.n);
    std::map<std::string, int> label_ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string node_token, label_token;
        if (!(ls >> node_token) || node_token.front() == '#')
            continue;
        if (!(ls >> label_token))
            throw ParseError("labels line " + std::to_string(lineno) +
                             ": expected 'node label[,label...]'");
        std::string extra;
        if (ls >> extra)
            throw ParseError("labels line " + std::to_string(lineno) + ": trailing tokens");
        auto it = node_of.find(node_token);
        if (it == node_of.end())
            continue; // node not in this graph (e.g. dropped by preprocessing)
        if (!per_node[it->second].empty())
            throw ParseError("labels line " + std::to_string(lineno) + ": duplicate node '" +
                             node_token + "'");
        std::stringstream parts(label_token);
        std::string label;
        while (std::getline(parts, label, ',')) {
            if (label.empty())
                throw ParseError("labels line " + std::to_string(lineno) + ": empty label");
            const auto lit = label_ids.emplace(label, static_cast<int>(label_ids.size())).first;
            per_node[it->second].push_back(lit->second);
        }
        if (per_node[it->second].empty())
            throw ParseError("labels line " + std::to_string(lineno) + ": no labels");
    }
    int missing = 0;
    for (const auto& labels : per_node)
        if (labels.empty())
            ++missing;
    if (missing > 0)
        throw ValidationError("label file leaves " + std::to_string(missing) +
                              " node(s) unlabeled");
    return make_label_set(std::move(per_node));
}

LabelSet load_label_list_file(const std::string& path, const Graph& g) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open label file '" + path + "'");
    return load_label_list(in, g);
}

EvalReport clustering_protocol(const EmbedFn& embed, const LabelSet& truth, int embed_reps,
                               int kmeans_runs, std::uint64_t seed) {
    if (embed_reps <= 0 || kmeans_runs <= 0)
        throw ValidationError("clustering_protocol: repetition counts must be positive");
    const std::vector<int> y = single_labels(truth);
    const int k = truth.num_labels;

    EvalReport report;
    report.task = "clustering";
    report.repetitions = embed_reps * kmeans_runs;
    std::map<std::string, double> sums;
    for (int e = 0; e < embed_reps; ++e) {
        const std::uint64_t embed_seed = derive_seed(seed, static_cast<std::uint64_t>(e));
        report.seeds.push_back(embed_seed);
        const Eigen::MatrixXd u = embed(embed_seed);
        if (u.rows() != static_cast<Eigen::Index>(y.size()))
            throw ValidationError("clustering_protocol: embedding rows != labeled nodes");
        for (int r = 0; r < kmeans_runs; ++r) {
            const std::uint64_t km_seed =
                derive_seed(embed_seed, 1000003ULL + static_cast<std::uint64_t>(r));
            const KMeansResult km = kmeans(u, k, 1, km_seed);
            for (const auto& [name, value] : clustering_scores(km.labels, y))
                sums[name] += value;
        }
    }
    for (const auto& [name, total] : sums)
        report.metrics[name] = total / report.repetitions;
    report.hyperparameters["k"] = std::to_string(k);
    report.hyperparameters["embed_reps"] = std::to_string(embed_reps);
    report.hyperparameters["kmeans_runs"] = std::to_string(kmeans_runs);
    return report;
}

EvalReport classification_protocol(const Eigen::MatrixXd& u, const LabelSet& truth,
                                   double train_fraction, int splits, std::uint64_t seed,
                                   const LogRegOptions& opts) {
    if (!(train_fraction > 0.0) || !(train_fraction < 1.0))
        throw ValidationError("classification_protocol: train fraction must be in (0, 1)");
    if (splits <= 0)
        throw ValidationError("classification_protocol: splits must be positive");
    const Eigen::Index n = u.rows();
    if (n != truth.size())
        throw ValidationError("classification_protocol: embedding rows != labeled nodes");
    const Eigen::Index train_n =
        static_cast<Eigen::Index>(std::floor(train_fraction * static_cast<double>(n)));
    if (train_n < 1 || train_n >= n)
        throw ValidationError("classification_protocol: split leaves an empty side");

    EvalReport report;
    report.task = "classification";
    report.repetitions = splits;
    double micro_sum = 0.0, macro_sum = 0.0;
    for (int s = 0; s < splits; ++s) {
        const std::uint64_t split_seed = derive_seed(seed, static_cast<std::uint64_t>(s));
        report.seeds.push_back(split_seed);
        Rng rng(split_seed);
        std::vector<std::uint64_t> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);

        Eigen::MatrixXd x_train(train_n, u.cols()), x_test(n - train_n, u.cols());
        std::vector<std::vector<int>> y_train, y_test;
        std::vector<int> k_test;
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto node = static_cast<std::size_t>(order[static_cast<std::size_t>(i)]);
            if (i < train_n) {
                x_train.row(i) = u.row(static_cast<Eigen::Index>(node));
                y_train.push_back(truth.labels[node]);
            } else {
                x_test.row(i - train_n) = u.row(static_cast<Eigen::Index>(node));
                y_test.push_back(truth.labels[node]);
                k_test.push_back(static_cast<int>(truth.labels[node].size()));
            }
        }
        LabelSet train_set;
        train_set.labels = std::move(y_train);
        train_set.multi_label = truth.multi_label;
        train_set.num_labels = truth.num_labels;

        const LogRegModel model = fit_logreg_ovr(x_train, train_set, opts, split_seed);
        const auto pred = model.predict_top_k(x_test, k_test);
        const auto f1 = f1_scores(pred, y_test, truth.num_labels);
        micro_sum += f1.at("micro_f1");
        macro_sum += f1.at("macro_f1");
    }
    report.metrics["micro_f1"] = micro_sum / splits;
    report.metrics["macro_f1"] = macro_sum / splits;
    report.hyperparameters["train_fraction"] = format_full(train_fraction);
    report.hyperparameters["l2"] = format_full(opts.l2);
    return report;
}

EvalReport link_prediction_protocol(const Graph& g, const EmbedGraphFn& embed,
                                    PairOperator op, double removal_fraction,
                                    int repetitions, std::uint64_t seed,
                                    const LogRegOptions& opts) {
    if (repetitions <= 0)
        throw ValidationError("link_prediction_protocol: repetitions must be positive");

    auto pair_features = [&](const Eigen::MatrixXd& u,
                             const std::vector<std::pair<int, int>>& pairs,
                             Eigen::MatrixXd& out, Eigen::Index at) {
        for (const auto& [a, b] : pairs) {
            out.row(at++) =
                pair_embedding(u.row(a).transpose(), u.row(b).transpose(), op).transpose();
        }
        return at;
    };

    EvalReport report;
    report.task = "link_prediction";
    report.repetitions = repetitions;
    double auc_sum = 0.0;
    for (int r = 0; r < repetitions; ++r) {
        const std::uint64_t rep_seed = derive_seed(seed, static_cast<std::uint64_t>(r));
        report.seeds.push_back(rep_seed);
        const EdgeSplit split =
            split_edges_for_link_prediction(g, removal_fraction, derive_seed(rep_seed, 0));
        if (split.test_positive_pairs.empty())
            throw ValidationError("link_prediction_protocol: no test positives; "
                                  "removal fraction too small for this graph");
        const Eigen::MatrixXd u = embed(split.train_graph, derive_seed(rep_seed, 1));
        if (u.rows() != split.train_graph.n)
            throw ValidationError("link_prediction_protocol: embedding rows != train nodes");

        const auto& train_pos = split.train_graph.edges;
        const Eigen::Index n_train =
            static_cast<Eigen::Index>(train_pos.size() + split.negative_pairs_train.size());
        Eigen::MatrixXd x_train(n_train, u.cols());
        std::vector<std::vector<int>> y_train;
        Eigen::Index at = 0;
        std::vector<std::pair<int, int>> train_pos_pairs;
        train_pos_pairs.reserve(train_pos.size());
        for (const Edge& e : train_pos)
            train_pos_pairs.emplace_back(e.u, e.v);
        at = pair_features(u, train_pos_pairs, x_train, at);
        at = pair_features(u, split.negative_pairs_train, x_train, at);
        for (std::size_t i = 0; i < train_pos_pairs.size(); ++i)
            y_train.push_back({1});
        for (std::size_t i = 0; i < split.negative_pairs_train.size(); ++i)
            y_train.push_back({0});
        LabelSet train_set = make_label_set(std::move(y_train));
        train_set.num_labels = 2;
        const LogRegModel model = fit_logreg_ovr(x_train, train_set, opts, rep_seed);

        const Eigen::Index n_test = static_cast<Eigen::Index>(
            split.test_positive_pairs.size() + split.negative_pairs_test.size());
        Eigen::MatrixXd x_test(n_test, u.cols());
        at = 0;
        at = pair_features(u, split.test_positive_pairs, x_test, at);
        at = pair_features(u, split.negative_pairs_test, x_test, at);
        const Eigen::MatrixXd s = model.scores(x_test);
        std::vector<double> scores(static_cast<std::size_t>(n_test));
        std::vector<int> labels(static_cast<std::size_t>(n_test), 0);
        for (Eigen::Index i = 0; i < n_test; ++i)
            scores[static_cast<std::size_t>(i)] = s(i, 1); // score of the "edge" class
        std::fill(labels.begin(), labels.begin() + split.test_positive_pairs.size(), 1);
        auc_sum += auc_score(scores, labels);
    }
    report.metrics["auc"] = auc_sum / repetitions;
    report.hyperparameters["operator"] = to_string(op);
    report.hyperparameters["removal_fraction"] = format_full(removal_fraction);
    report.hyperparameters["l2"] = format_full(opts.l2);
    return report;
}

} // namespace fegraph
