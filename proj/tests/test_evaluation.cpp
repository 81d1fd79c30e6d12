#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "fegraph/errors.hpp"
#include "fegraph/evaluation.hpp"
#include "fegraph/kmeans.hpp"
#include "fegraph/logreg.hpp"
#include "fegraph/metrics.hpp"
#include "fegraph/rng.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace fegraph;
namespace tg = fegraph::testing;

namespace {

// Points in three tight blobs around (0,0), (10,0), (0,10).
Eigen::MatrixXd three_blobs(int per_blob, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd x(3 * per_blob, 2);
    const double cx[3] = {0.0, 10.0, 0.0};
    const double cy[3] = {0.0, 0.0, 10.0};
    for (int b = 0; b < 3; ++b)
        for (int i = 0; i < per_blob; ++i) {
            x(b * per_blob + i, 0) = cx[b] + 0.3 * rng.normal();
            x(b * per_blob + i, 1) = cy[b] + 0.3 * rng.normal();
        }
    return x;
}

std::vector<int> blob_truth(int per_blob) {
    std::vector<int> t(3 * per_blob);
    for (int i = 0; i < 3 * per_blob; ++i)
        t[i] = i / per_blob;
    return t;
}

LabelSet single_label_set(const std::vector<int>& flat) {
    std::vector<std::vector<int>> nested;
    nested.reserve(flat.size());
    for (int v : flat)
        nested.push_back({v});
    return make_label_set(std::move(nested));
}

// Embedding whose rows carry the planted block structure plus noise.
Eigen::MatrixXd noisy_block_embedding(const std::vector<int>& block_of, int d, double noise,
                                      std::uint64_t seed) {
    Rng rng(seed);
    const int n = static_cast<int>(block_of.size());
    Eigen::MatrixXd u = Eigen::MatrixXd::Zero(n, d);
    for (int i = 0; i < n; ++i) {
        u(i, block_of[i] % d) = 3.0;
        for (int k = 0; k < d; ++k)
            u(i, k) += noise * rng.normal();
    }
    return u;
}

} // namespace

TEST_CASE("k-means recovers well-separated blobs") {
    const auto x = three_blobs(12, 500);
    const auto res = kmeans(x, 3, 5, 1);
    const auto truth = blob_truth(12);
    CHECK(ari_score(res.labels, truth) == doctest::Approx(1.0));
    CHECK(res.objective > 0.0);
    // Objective equals the within-cluster sum of squares of the labeling.
    Eigen::MatrixXd centers = Eigen::MatrixXd::Zero(3, 2);
    Eigen::VectorXd counts = Eigen::VectorXd::Zero(3);
    for (int i = 0; i < x.rows(); ++i) {
        centers.row(res.labels[i]) += x.row(i);
        counts(res.labels[i]) += 1.0;
    }
    for (int c = 0; c < 3; ++c)
        centers.row(c) /= counts(c);
    double wcss = 0.0;
    for (int i = 0; i < x.rows(); ++i)
        wcss += (x.row(i) - centers.row(res.labels[i])).squaredNorm();
    CHECK(res.objective == doctest::Approx(wcss).epsilon(1e-9));
}

TEST_CASE("k-means with one cluster centers at the mean") {
    const auto x = three_blobs(5, 501);
    const auto res = kmeans(x, 1, 1, 0);
    for (int lab : res.labels)
        CHECK(lab == 0);
    double wcss = 0.0;
    const Eigen::RowVectorXd mean = x.colwise().mean();
    for (int i = 0; i < x.rows(); ++i)
        wcss += (x.row(i) - mean).squaredNorm();
    CHECK(res.objective == doctest::Approx(wcss).epsilon(1e-9));
}

TEST_CASE("more k-means restarts never raise the kept objective") {
    Rng rng(502);
    Eigen::MatrixXd x(40, 3);
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 3; ++j)
            x(i, j) = rng.normal();
    const double one = kmeans(x, 5, 1, 7).objective;
    const double ten = kmeans(x, 5, 10, 7).objective;
    CHECK(ten <= one + 1e-12);
    // Deterministic in the seed.
    CHECK(kmeans(x, 5, 10, 7).objective == ten);
    CHECK(kmeans(x, 5, 10, 7).labels == kmeans(x, 5, 10, 7).labels);
}

TEST_CASE("k-means validates inputs") {
    const auto x = three_blobs(2, 503);
    CHECK_THROWS_AS(kmeans(x, 0, 1, 0), ValidationError);
    CHECK_THROWS_AS(kmeans(x, 7, 1, 0), ValidationError);
    CHECK_THROWS_AS(kmeans(x, 2, 0, 0), ValidationError);
}

TEST_CASE("assignment maximizes total reward") {
    Eigen::MatrixXd r(3, 3);
    r << 1, 2, 3,
         3, 1, 2,
         2, 3, 1;
    const auto a = max_assignment(r);
    // All three 3s are compatible: rows pick columns 2, 0, 1.
    CHECK(a == std::vector<int>{2, 0, 1});
}

TEST_CASE("assignment handles rectangular rewards") {
    Eigen::MatrixXd r(2, 4);
    r << 0, 9, 0, 1,
         0, 8, 0, 7;
    const auto a = max_assignment(r);
    CHECK(a == std::vector<int>{1, 3});
}

TEST_CASE("clustering accuracy agrees with the exhaustive mapping oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(derive_seed(504, seed));
        const int n = 4 + rng.uniform_int(16);
        const int kp = 1 + rng.uniform_int(5);
        const int kt = 1 + rng.uniform_int(5);
        std::vector<int> pred(n), truth(n);
        for (int i = 0; i < n; ++i) {
            pred[i] = rng.uniform_int(kp);
            truth[i] = rng.uniform_int(kt);
        }
        const auto scores = clustering_scores(pred, truth);
        CHECK(scores.at("acc") ==
              doctest::Approx(tg::exhaustive_best_acc(pred, truth)).epsilon(1e-12));
    }
}

TEST_CASE("adjusted Rand agrees with the pair-counting oracle") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(derive_seed(505, seed));
        const int n = 5 + rng.uniform_int(20);
        std::vector<int> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = rng.uniform_int(4);
            b[i] = rng.uniform_int(3);
        }
        CHECK(ari_score(a, b) == doctest::Approx(tg::brute_force_ari(a, b)).epsilon(1e-12));
        CHECK(ari_score(a, b) == doctest::Approx(ari_score(b, a)).epsilon(1e-12));
    }
}

TEST_CASE("partition metrics hit their reference points") {
    const std::vector<int> truth = {0, 0, 1, 1, 2, 2};
    SUBCASE("a relabeled copy scores perfectly") {
        const std::vector<int> relabeled = {2, 2, 0, 0, 1, 1};
        CHECK(nmi_score(relabeled, truth) == doctest::Approx(1.0));
        CHECK(ari_score(relabeled, truth) == doctest::Approx(1.0));
        CHECK(clustering_scores(relabeled, truth).at("acc") == doctest::Approx(1.0));
        CHECK(clustering_scores(relabeled, truth).at("weighted_f1") == doctest::Approx(1.0));
    }
    SUBCASE("a constant prediction carries no information") {
        const std::vector<int> constant = {0, 0, 0, 0, 0, 0};
        CHECK(nmi_score(constant, truth) == doctest::Approx(0.0));
        CHECK(ari_score(constant, truth) == doctest::Approx(0.0));
        CHECK(clustering_scores(constant, truth).at("acc") ==
              doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
    SUBCASE("both constant is a degenerate perfect match") {
        const std::vector<int> constant = {0, 0, 0, 0, 0, 0};
        CHECK(nmi_score(constant, constant) == doctest::Approx(1.0));
        CHECK(ari_score(constant, constant) == doctest::Approx(1.0));
    }
    SUBCASE("half-right two-cluster split") {
        const std::vector<int> t = {0, 0, 1, 1};
        const std::vector<int> p = {0, 1, 0, 1};
        CHECK(clustering_scores(p, t).at("acc") == doctest::Approx(0.5));
        CHECK(ari_score(p, t) == doctest::Approx(tg::brute_force_ari(p, t)).epsilon(1e-12));
    }
}

TEST_CASE("F1 scores on a worked multi-label example") {
    // Node 0: pred {0}, true {0,1}; node 1: pred {1}, true {1}; node 2:
    // pred {0,2}, true {1}. Label 0: tp=1 fp=1 fn=0; label 1: tp=1 fp=0
    // fn=2; label 2: tp=0 fp=1 fn=0.
    const std::vector<std::vector<int>> pred = {{0}, {1}, {0, 2}};
    const std::vector<std::vector<int>> truth = {{0, 1}, {1}, {1}};
    const auto f1 = f1_scores(pred, truth, 3);
    const double micro = 2.0 * 2.0 / (2.0 * 2.0 + 2.0 + 2.0); // tp=2 fp=2 fn=2
    const double f1_0 = 2.0 / 3.0;  // p=1/2 r=1
    const double f1_1 = 0.5;        // p=1 r=1/3
    const double f1_2 = 0.0;        // no true positives
    CHECK(f1.at("micro_f1") == doctest::Approx(micro).epsilon(1e-12));
    CHECK(f1.at("macro_f1") == doctest::Approx((f1_0 + f1_1 + f1_2) / 3.0).epsilon(1e-12));
    // Weighted by true support: label 0 once, label 1 three times, label 2 never.
    CHECK(f1.at("weighted_f1") ==
          doctest::Approx((1.0 * f1_0 + 3.0 * f1_1) / 4.0).epsilon(1e-12));
}

TEST_CASE("perfect multi-label prediction scores one everywhere") {
    const std::vector<std::vector<int>> y = {{0, 2}, {1}, {0}, {2, 1}};
    const auto f1 = f1_scores(y, y, 3);
    CHECK(f1.at("micro_f1") == doctest::Approx(1.0));
    CHECK(f1.at("macro_f1") == doctest::Approx(1.0));
    CHECK(f1.at("weighted_f1") == doctest::Approx(1.0));
}

TEST_CASE("AUC reference values") {
    CHECK(auc_score({0.1, 0.2, 0.8, 0.9}, {0, 0, 1, 1}) == doctest::Approx(1.0));
    CHECK(auc_score({0.9, 0.8, 0.2, 0.1}, {0, 0, 1, 1}) == doctest::Approx(0.0));
    CHECK(auc_score({0.5, 0.5, 0.5, 0.5}, {0, 1, 0, 1}) == doctest::Approx(0.5));
    CHECK(auc_score({0.2, 0.5, 0.5, 0.9}, {0, 0, 1, 1}) == doctest::Approx(0.875));
    CHECK_THROWS_AS(auc_score({0.3, 0.7}, {1, 1}), ValidationError);
    CHECK_THROWS_AS(auc_score({0.3, 0.7}, {0, 1, 1}), ValidationError);
}

TEST_CASE("AUC agrees with the pairwise oracle and ignores monotone rescaling") {
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        Rng rng(derive_seed(506, seed));
        const int n = 5 + rng.uniform_int(40);
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        int pos = 0;
        for (int i = 0; i < n; ++i) {
            // Coarse grid forces plenty of ties.
            scores[i] = rng.uniform_int(8) / 4.0;
            labels[i] = rng.uniform_int(2);
            pos += labels[i];
        }
        if (pos == 0 || pos == n)
            labels[0] = 1 - labels[0];
        const double auc = auc_score(scores, labels);
        CHECK(auc == doctest::Approx(tg::brute_force_auc(scores, labels)).epsilon(1e-12));
        std::vector<double> warped(n);
        for (int i = 0; i < n; ++i)
            warped[i] = std::exp(3.0 * scores[i]) - 2.0;
        CHECK(auc_score(warped, labels) == doctest::Approx(auc).epsilon(1e-12));
    }
}

TEST_CASE("logistic regression separates separable data") {
    Rng rng(507);
    const int n = 60;
    Eigen::MatrixXd x(n, 2);
    std::vector<std::vector<int>> y(n);
    for (int i = 0; i < n; ++i) {
        const int cls = i % 2;
        x(i, 0) = (cls ? 3.0 : -3.0) + 0.5 * rng.normal();
        x(i, 1) = rng.normal();
        y[i] = {cls};
    }
    const auto model = fit_logreg_ovr(x, make_label_set(y));
    const auto pred = model.predict_top_k(x, std::vector<int>(n, 1));
    for (int i = 0; i < n; ++i)
        CHECK(pred[i][0] == i % 2);
}

TEST_CASE("logistic regression on pure noise stays near chance") {
    Rng rng(508);
    const int n = 400;
    Eigen::MatrixXd x(n, 3);
    std::vector<std::vector<int>> y(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < 3; ++j)
            x(i, j) = rng.normal();
        y[i] = {static_cast<int>(rng.uniform_int(2))};
    }
    const auto model = fit_logreg_ovr(x, make_label_set(y));
    // With heavy regularization relative to signal, scores hug the prior.
    const auto s = model.scores(x);
    int hits = 0;
    const auto pred = model.predict_top_k(x, std::vector<int>(n, 1));
    for (int i = 0; i < n; ++i)
        hits += pred[i][0] == y[i][0];
    CHECK(static_cast<double>(hits) / n < 0.65);
    CHECK(s.array().abs().maxCoeff() < 1.5);
}

TEST_CASE("single-class training data yields the smoothed prior") {
    Eigen::MatrixXd x(4, 2);
    x << 1, 2, 3, 4, 5, 6, 7, 8;
    LabelSet y = make_label_set({{0}, {0}, {0}, {0}});
    const auto model = fit_logreg_ovr(x, y);
    CHECK(model.w.row(0).norm() == 0.0);
    // p = (4 + 1) / (4 + 2), bias = log(p / (1 - p)).
    CHECK(model.b(0) == doctest::Approx(std::log(5.0)).epsilon(1e-12));
}

TEST_CASE("top-k prediction takes the k highest scores per node") {
    LogRegModel model;
    model.w.resize(3, 1);
    model.w << 1.0, 2.0, -1.0;
    model.b.resize(3);
    model.b << 0.0, -1.5, 0.0;
    Eigen::MatrixXd x(1, 1);
    x << 1.0;
    // Scores: label 0 -> 1.0, label 1 -> 0.5, label 2 -> -1.0.
    const auto top1 = model.predict_top_k(x, {1});
    CHECK(top1[0] == std::vector<int>{0});
    const auto top2 = model.predict_top_k(x, {2});
    CHECK(top2[0] == std::vector<int>{0, 1});
}

TEST_CASE("pair operators on a worked example") {
    Eigen::VectorXd u(2), v(2);
    u << 1.0, 2.0;
    v << 3.0, 4.0;
    const auto avg = pair_embedding(u, v, PairOperator::Average);
    CHECK(avg(0) == 2.0);
    CHECK(avg(1) == 3.0);
    const auto had = pair_embedding(u, v, PairOperator::Hadamard);
    CHECK(had(0) == 3.0);
    CHECK(had(1) == 8.0);
    const auto l1 = pair_embedding(u, v, PairOperator::WeightedL1);
    CHECK(l1(0) == 2.0);
    CHECK(l1(1) == 2.0);
    const auto l2 = pair_embedding(u, v, PairOperator::WeightedL2);
    CHECK(l2(0) == 4.0);
    CHECK(l2(1) == 4.0);
    CHECK(pair_operator_from_string("hadamard") == PairOperator::Hadamard);
    CHECK(pair_operator_from_string("average") == PairOperator::Average);
    CHECK(pair_operator_from_string("l1") == PairOperator::WeightedL1);
    CHECK(pair_operator_from_string("l2") == PairOperator::WeightedL2);
    CHECK_THROWS_AS(pair_operator_from_string("cosine"), ValidationError);
    CHECK(to_string(PairOperator::Hadamard) == "hadamard");
}

TEST_CASE("label files parse, ignore strangers, and demand coverage") {
    std::vector<Edge> edges = {{0, 1, 1.0}, {1, 2, 1.0}};
    const Graph g = make_graph(3, edges, {"a", "b", "c"});
    SUBCASE("single labels with comments and unknown nodes") {
        std::istringstream in("# header\na 0\nb 1\nzz 5\nc 0\n");
        const auto ls = load_label_list(in, g);
        CHECK(ls.size() == 3);
        CHECK(!ls.multi_label);
        CHECK(single_labels(ls) == std::vector<int>{0, 1, 0});
    }
    SUBCASE("multi-label syntax") {
        std::istringstream in("a 0,2\nb 1\nc 2\n");
        const auto ls = load_label_list(in, g);
        CHECK(ls.multi_label);
        CHECK(ls.num_labels == 3);
        // Dense label ids follow first appearance: "0" -> 0, "2" -> 1, "1" -> 2.
        CHECK(ls.labels[0] == std::vector<int>{0, 1});
        CHECK(ls.labels[1] == std::vector<int>{2});
        CHECK(ls.labels[2] == std::vector<int>{1});
    }
    SUBCASE("duplicate node line") {
        std::istringstream in("a 0\na 1\nb 0\nc 0\n");
        CHECK_THROWS_AS(load_label_list(in, g), ParseError);
    }
    SUBCASE("missing node") {
        std::istringstream in("a 0\nb 1\n");
        CHECK_THROWS_AS(load_label_list(in, g), ValidationError);
    }
    SUBCASE("trailing junk") {
        std::istringstream in("a 0 extra\nb 1\nc 0\n");
        CHECK_THROWS_AS(load_label_list(in, g), ParseError);
    }
    SUBCASE("index-named graphs resolve numeric ids") {
        const Graph plain = make_graph(2, {{0, 1, 1.0}});
        std::istringstream in("1 4\n0 7\n");
        const auto ls = load_label_list(in, plain);
        // Distinct labels are compacted into a dense range by first
        // appearance in sorted label order.
        CHECK(ls.num_labels == 2);
        CHECK(single_labels(ls)[0] != single_labels(ls)[1]);
    }
}

TEST_CASE("evaluation reports serialize to well-formed JSON") {
    EvalReport r;
    r.task = "clustering";
    r.metrics = {{"acc", 0.75}, {"nmi", 0.5}};
    r.seeds = {1, 2, 3};
    r.hyperparameters = {{"d", "8"}, {"eta", "1.0"}};
    r.repetitions = 3;
    const auto text = to_json(r);
    const auto parsed = nlohmann::json::parse(text);
    CHECK(parsed["task"] == "clustering");
    CHECK(parsed["metrics"]["acc"] == doctest::Approx(0.75));
    CHECK(parsed["seeds"].size() == 3);
    CHECK(parsed["hyperparameters"]["d"] == "8");
    CHECK(parsed["repetitions"] == 3);
}

TEST_CASE("clustering protocol recovers planted blocks from a clean embedding") {
    std::vector<int> block_of;
    const Graph g = tg::planted_partition(36, 3, 0.5, 0.05, 510, &block_of);
    const auto truth = single_label_set(block_of);
    const EmbedFn embed = [&](std::uint64_t seed) {
        return noisy_block_embedding(block_of, 4, 0.2, seed);
    };
    const auto report = clustering_protocol(embed, truth, 3, 4, 42);
    CHECK(report.task == "clustering");
    CHECK(report.repetitions == 12);
    CHECK(report.metrics.at("acc") > 0.95);
    CHECK(report.metrics.at("nmi") > 0.9);
    CHECK(report.metrics.at("ari") > 0.9);
    CHECK(report.seeds.size() == 3);
    // Deterministic in the protocol seed.
    const auto again = clustering_protocol(embed, truth, 3, 4, 42);
    CHECK(again.metrics == report.metrics);
    const auto other = clustering_protocol(embed, truth, 3, 4, 43);
    CHECK(other.seeds != report.seeds);
}

TEST_CASE("classification protocol is perfect on separable embeddings") {
    std::vector<int> block_of(40);
    for (int i = 0; i < 40; ++i)
        block_of[i] = i % 4;
    const auto truth = single_label_set(block_of);
    const auto u = noisy_block_embedding(block_of, 4, 0.1, 511);
    const auto report = classification_protocol(u, truth, 0.5, 5, 9);
    CHECK(report.task == "classification");
    CHECK(report.repetitions == 5);
    CHECK(report.metrics.at("micro_f1") == doctest::Approx(1.0));
    CHECK(report.metrics.at("macro_f1") == doctest::Approx(1.0));
    CHECK(std::stod(report.hyperparameters.at("train_fraction")) == doctest::Approx(0.5));
}

TEST_CASE("classification protocol sits near chance on shuffled labels") {
    Rng rng(512);
    std::vector<int> noise(120);
    for (auto& v : noise)
        v = rng.uniform_int(6);
    const auto truth = single_label_set(noise);
    Eigen::MatrixXd u(120, 5);
    for (int i = 0; i < 120; ++i)
        for (int j = 0; j < 5; ++j)
            u(i, j) = rng.normal();
    const auto report = classification_protocol(u, truth, 0.5, 8, 10);
    CHECK(report.metrics.at("micro_f1") < 0.35);
}

TEST_CASE("link prediction protocol separates planted structure from noise") {
    std::vector<int> block_of;
    Graph planted = tg::planted_partition(48, 4, 0.65, 0.03, 513, &block_of);
    // Name the nodes so train graphs can report which originals they kept.
    std::vector<std::string> ids;
    for (int i = 0; i < planted.n; ++i)
        ids.push_back(std::to_string(i));
    const Graph g = make_graph(planted.n, planted.edges, ids);
    // Embeddings from node identity in the split graph: the protocol hands
    // the train graph, whose node_ids name the surviving original nodes.
    const EmbedGraphFn structured = [&](const Graph& train, std::uint64_t seed) {
        std::vector<int> blocks(train.n);
        for (int i = 0; i < train.n; ++i)
            blocks[i] = block_of[std::stoi(train.node_ids[i])];
        return noisy_block_embedding(blocks, 4, 0.25, seed);
    };
    const auto report =
        link_prediction_protocol(g, structured, PairOperator::Hadamard, 0.25, 3, 21);
    CHECK(report.task == "link_prediction");
    CHECK(report.repetitions == 3);
    CHECK(report.metrics.at("auc") > 0.80);
    CHECK(report.hyperparameters.at("operator") == "hadamard");

    const EmbedGraphFn random = [&](const Graph& train, std::uint64_t seed) {
        Rng r(seed);
        Eigen::MatrixXd u(train.n, 4);
        for (int i = 0; i < train.n; ++i)
            for (int j = 0; j < 4; ++j)
                u(i, j) = r.normal();
        return u;
    };
    const auto chance =
        link_prediction_protocol(g, random, PairOperator::Hadamard, 0.25, 3, 21);
    CHECK(chance.metrics.at("auc") > 0.3);
    CHECK(chance.metrics.at("auc") < 0.7);
    CHECK(report.metrics.at("auc") > chance.metrics.at("auc"));
}

TEST_CASE("link prediction protocol is deterministic in its seed") {
    std::vector<int> block_of;
    const Graph g = tg::planted_partition(30, 3, 0.6, 0.05, 514, &block_of);
    const EmbedGraphFn embed = [&](const Graph& train, std::uint64_t seed) {
        Rng r(seed);
        Eigen::MatrixXd u(train.n, 3);
        for (int i = 0; i < train.n; ++i)
            for (int j = 0; j < 3; ++j)
                u(i, j) = r.normal();
        return u;
    };
    const auto a = link_prediction_protocol(g, embed, PairOperator::Average, 0.3, 2, 5);
    const auto b = link_prediction_protocol(g, embed, PairOperator::Average, 0.3, 2, 5);
    CHECK(a.metrics == b.metrics);
    CHECK(a.seeds == b.seeds);
}
