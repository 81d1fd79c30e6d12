#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "fegraph/errors.hpp"
#include "fegraph/evaluation.hpp"
#include "fegraph/factorization.hpp"
#include "fegraph/fe_distance.hpp"
#include "fegraph/graph.hpp"
#include "fegraph/kmeans.hpp"
#include "fegraph/logreg.hpp"
#include "fegraph/matrix_io.hpp"
#include "fegraph/metrics.hpp"
#include "fegraph/pipeline.hpp"
#include "fegraph/similarity.hpp"

namespace py = pybind11;
using namespace fegraph;

namespace {

MergeRule merge_rule_from_string(const std::string& name) {
    if (name == "sum")
        return MergeRule::Sum;
    if (name == "max")
        return MergeRule::Max;
    throw ValidationError("merge rule must be 'sum' or 'max'");
}

FEParams make_fe_params(double eta, int horizon, double tol, double drop_threshold,
                        int max_sweeps) {
    FEParams p;
    p.eta = eta;
    p.horizon = horizon;
    p.convergence_tol = tol;
    p.drop_threshold = drop_threshold;
    p.max_sweeps = max_sweeps;
    return p;
}

FitOptions make_fit_options(int d, bool symmetric, double learning_rate, int iterations,
                            std::uint64_t seed, double init_scale) {
    FitOptions o;
    o.d = d;
    o.symmetric = symmetric;
    o.learning_rate = learning_rate;
    o.iterations = iterations;
    o.seed = seed;
    o.init_scale = init_scale;
    return o;
}

PipelineOptions make_pipeline_options(const std::string& similarity, double eta, int horizon,
                                      double tol, double drop_threshold, int max_sweeps,
                                      int targets, double percentile, double max_target,
                                      int window, int negatives, int d, int iterations,
                                      double learning_rate, double init_scale, int threads) {
    PipelineOptions o;
    if (similarity == "fe")
        o.source = SimilaritySource::FE;
    else if (similarity == "deepwalk")
        o.source = SimilaritySource::DeepWalk;
    else
        throw ValidationError("similarity must be 'fe' or 'deepwalk'");
    o.fe = make_fe_params(eta, horizon, tol, drop_threshold, max_sweeps);
    o.targets = targets;
    o.percentile = percentile;
    o.max_target = max_target;
    o.window = window;
    o.negatives = negatives;
    o.fit = make_fit_options(d, false, learning_rate, iterations, 0, init_scale);
    o.threads = threads;
    return o;
}

py::dict report_to_dict(const EvalReport& r) {
    py::dict d;
    d["task"] = r.task;
    d["metrics"] = r.metrics;
    d["seeds"] = r.seeds;
    d["hyperparameters"] = r.hyperparameters;
    d["repetitions"] = r.repetitions;
    return d;
}

} // namespace

PYBIND11_MODULE(_fegraph, m) {
    m.doc() = "free-energy graph embeddings: distances, similarities, factorization, evaluation";

    py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

    py::class_<Graph>(m, "Graph")
        .def_readonly("n", &Graph::n)
        .def_property_readonly("num_edges",
                               [](const Graph& g) { return g.edges.size(); })
        .def_property_readonly("edges",
                               [](const Graph& g) {
                                   std::vector<std::tuple<int, int, double>> out;
                                   out.reserve(g.edges.size());
                                   for (const auto& e : g.edges)
                                       out.emplace_back(e.u, e.v, e.w);
                                   return out;
                               })
        .def_readonly("node_ids", &Graph::node_ids)
        .def("has_edge", &Graph::has_edge)
        .def("total_volume", &Graph::total_volume)
        .def("adjacency", &Graph::adjacency)
        .def("transition", &Graph::transition)
        .def("__repr__", [](const Graph& g) {
            std::ostringstream ss;
            ss << "Graph(n=" << g.n << ", m=" << g.edges.size() << ")";
            return ss.str();
        });

    m.def(
        "load_edge_list",
        [](const std::string& text, const std::string& merge) {
            std::istringstream in(text);
            return load_edge_list(in, merge_rule_from_string(merge));
        },
        py::arg("text"), py::arg("merge") = "sum",
        "Parse an edge list from a string: 'u v [weight]' per line, '#' comments.");
    m.def(
        "load_edge_list_file",
        [](const std::string& path, const std::string& merge) {
            return load_edge_list_file(path, merge_rule_from_string(merge));
        },
        py::arg("path"), py::arg("merge") = "sum");
    m.def("preprocess", &preprocess, py::arg("graph"),
          "Drop self-loops and keep the largest connected component.");

    py::class_<DissimilarityMatrix>(m, "DissimilarityMatrix")
        .def_readonly("values", &DissimilarityMatrix::values)
        .def_readonly("targets", &DissimilarityMatrix::targets)
        .def_readonly("symmetric", &DissimilarityMatrix::symmetric);

    m.def(
        "fe_directed",
        [](const Graph& g, double eta, int horizon, const std::vector<int>& targets, double tol,
           double drop_threshold, int max_sweeps, int threads) {
            std::vector<int> t = targets;
            if (t.empty()) {
                t.resize(static_cast<std::size_t>(g.n));
                for (int i = 0; i < g.n; ++i)
                    t[static_cast<std::size_t>(i)] = i;
            }
            return fe_directed(g, make_fe_params(eta, horizon, tol, drop_threshold, max_sweeps),
                               t, threads);
        },
        py::arg("graph"), py::arg("eta") = 1.0, py::arg("horizon") = 0,
        py::arg("targets") = std::vector<int>{}, py::arg("tol") = 1e-9,
        py::arg("drop_threshold") = 7.0, py::arg("max_sweeps") = 0, py::arg("threads") = 0,
        "Directed free-energy dissimilarity columns for the given targets.");
    m.def("symmetrize", &symmetrize, py::arg("phi"));
    m.def("fe_distance", &fe_distance, py::arg("graph"), py::arg("eta"), py::arg("tol") = 1e-9,
          py::arg("max_sweeps") = 0, py::arg("drop_threshold") = 7.0, py::arg("threads") = 0,
          "Symmetric free-energy distance at convergence.");
    m.def("sp_distance", &sp_distance, py::arg("graph"));
    m.def("ct_distance", &ct_distance, py::arg("graph"));
    m.def("sample_targets", &sample_targets, py::arg("n"), py::arg("count"), py::arg("seed"));

    py::class_<SimilarityMatrix>(m, "SimilarityMatrix")
        .def_readonly("values", &SimilarityMatrix::values)
        .def_readonly("shift", &SimilarityMatrix::shift)
        .def_readonly("scale", &SimilarityMatrix::scale);

    m.def("to_similarity", &to_similarity, py::arg("delta"), py::arg("percentile") = 70.0,
          py::arg("max_target") = 6.0,
          "Affine map S = scale * (b - distance) with a percentile shift.");
    m.def("deepwalk_similarity", &deepwalk_similarity, py::arg("graph"), py::arg("window") = 10,
          py::arg("negatives") = 1, py::arg("dense_cap") = 5000);

    py::class_<PosNegWeights>(m, "PosNegWeights")
        .def_readonly("s_plus", &PosNegWeights::s_plus)
        .def_readonly("s_minus", &PosNegWeights::s_minus);
    m.def("pos_neg_from_similarity", &pos_neg_from_similarity, py::arg("similarity"),
          py::arg("exp_cap") = 30.0);

    py::class_<FitResult>(m, "FitResult")
        .def_property_readonly("u", [](const FitResult& r) { return r.embedding.U; })
        .def_property_readonly("v",
                               [](const FitResult& r) -> py::object {
                                   if (r.embedding.tied())
                                       return py::none();
                                   return py::cast(*r.embedding.V);
                               })
        .def_readonly("final_loss", &FitResult::final_loss)
        .def_readonly("loss_trace", &FitResult::loss_trace);

    m.def(
        "gmf_fit",
        [](const Eigen::MatrixXd& s_plus, const Eigen::MatrixXd& s_minus, int d, bool symmetric,
           double learning_rate, int iterations, std::uint64_t seed, double init_scale) {
            PosNegWeights w;
            w.s_plus = s_plus;
            w.s_minus = s_minus;
            return gmf_fit(w, make_fit_options(d, symmetric, learning_rate, iterations, seed,
                                               init_scale));
        },
        py::arg("s_plus"), py::arg("s_minus"), py::arg("d") = 128, py::arg("symmetric") = false,
        py::arg("learning_rate") = 0.1, py::arg("iterations") = 300, py::arg("seed") = 0,
        py::arg("init_scale") = 0.1,
        "Weighted log-sigmoid factorization, full-batch Adam ascent.");
    m.def("truncated_svd", &truncated_svd, py::arg("matrix"), py::arg("d"), py::arg("seed") = 0,
          "Best rank-d approximation factors (u, v) with reconstruction u @ v.T.");

    m.def(
        "kmeans",
        [](const Eigen::MatrixXd& x, int k, int runs, std::uint64_t seed) {
            const KMeansResult r = kmeans(x, k, runs, seed);
            return py::make_tuple(r.labels, r.objective);
        },
        py::arg("x"), py::arg("k"), py::arg("runs") = 10, py::arg("seed") = 0);
    m.def("clustering_scores", &clustering_scores, py::arg("pred"), py::arg("truth"));
    m.def("nmi_score", &nmi_score, py::arg("a"), py::arg("b"));
    m.def("ari_score", &ari_score, py::arg("a"), py::arg("b"));
    m.def("auc_score", &auc_score, py::arg("scores"), py::arg("labels"));
    m.def(
        "pair_embedding",
        [](const Eigen::VectorXd& u, const Eigen::VectorXd& v, const std::string& op) {
            return pair_embedding(u, v, pair_operator_from_string(op));
        },
        py::arg("u"), py::arg("v"), py::arg("op"));

    m.def("write_matrix_binary", &write_matrix_binary, py::arg("path"), py::arg("matrix"));
    m.def("read_matrix_binary", &read_matrix_binary, py::arg("path"));
    m.def("write_embedding_text", &write_embedding_text, py::arg("path"), py::arg("u"));
    m.def("read_embedding_text", &read_embedding_text, py::arg("path"));

    m.def(
        "embed_graph",
        [](const Graph& g, std::uint64_t seed, const std::string& similarity, double eta,
           int horizon, double tol, double drop_threshold, int max_sweeps, int targets,
           double percentile, double max_target, int window, int negatives, int d,
           int iterations, double learning_rate, double init_scale, int threads) {
            return embed_graph(g,
                               make_pipeline_options(similarity, eta, horizon, tol,
                                                     drop_threshold, max_sweeps, targets,
                                                     percentile, max_target, window, negatives,
                                                     d, iterations, learning_rate, init_scale,
                                                     threads),
                               seed);
        },
        py::arg("graph"), py::arg("seed") = 0, py::arg("similarity") = "fe",
        py::arg("eta") = 1.0, py::arg("horizon") = 0, py::arg("tol") = 1e-9,
        py::arg("drop_threshold") = 7.0, py::arg("max_sweeps") = 0, py::arg("targets") = 0,
        py::arg("percentile") = 70.0, py::arg("max_target") = 6.0, py::arg("window") = 10,
        py::arg("negatives") = 1, py::arg("d") = 128, py::arg("iterations") = 300,
        py::arg("learning_rate") = 0.1, py::arg("init_scale") = 0.1, py::arg("threads") = 0,
        "Full pipeline: distance -> similarity -> factorization; returns the row embedding.");

    m.def(
        "load_label_list",
        [](const std::string& text, const Graph& g) {
            std::istringstream in(text);
            const LabelSet ls = load_label_list(in, g);
            return ls.labels;
        },
        py::arg("text"), py::arg("graph"));

    m.def(
        "clustering_protocol",
        [](const std::function<Eigen::MatrixXd(std::uint64_t)>& embed,
           const std::vector<std::vector<int>>& labels, int embed_reps, int kmeans_runs,
           std::uint64_t seed) {
            return report_to_dict(clustering_protocol(embed, make_label_set(labels), embed_reps,
                                                      kmeans_runs, seed));
        },
        py::arg("embed"), py::arg("labels"), py::arg("embed_reps") = 5,
        py::arg("kmeans_runs") = 10, py::arg("seed") = 0);
    m.def(
        "classification_protocol",
        [](const Eigen::MatrixXd& u, const std::vector<std::vector<int>>& labels,
           double train_fraction, int splits, std::uint64_t seed) {
            return report_to_dict(
                classification_protocol(u, make_label_set(labels), train_fraction, splits, seed));
        },
        py::arg("u"), py::arg("labels"), py::arg("train_fraction") = 0.5, py::arg("splits") = 10,
        py::arg("seed") = 0);
    m.def(
        "link_prediction_protocol",
        [](const Graph& g,
           const std::function<Eigen::MatrixXd(const Graph&, std::uint64_t)>& embed,
           const std::string& op, double removal_fraction, int repetitions, std::uint64_t seed) {
            return report_to_dict(link_prediction_protocol(
                g, embed, pair_operator_from_string(op), removal_fraction, repetitions, seed));
        },
        py::arg("graph"), py::arg("embed"), py::arg("op") = "hadamard",
        py::arg("removal_fraction") = 0.3, py::arg("repetitions") = 10, py::arg("seed") = 0);
}
