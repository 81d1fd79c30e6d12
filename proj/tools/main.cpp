#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fegraph/errors.hpp"
#include "fegraph/evaluation.hpp"
#include "fegraph/factorization.hpp"
#include "fegraph/fe_distance.hpp"
#include "fegraph/graph.hpp"
#include "fegraph/matrix_io.hpp"
#include "fegraph/metrics.hpp"
#include "fegraph/pipeline.hpp"
#include "fegraph/rng.hpp"
#include "fegraph/similarity.hpp"

namespace {

using namespace fegraph;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using ConfigMap = std::map<std::string, std::string>;

void log_config(const std::string& command, const ConfigMap& config) {
    std::cerr << "[fegraph] " << command << " resolved config:";
    for (const auto& [k, v] : config)
        std::cerr << ' ' << k << '=' << v;
    std::cerr << '\n';
}

class WallClock {
  public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }
    double log(const std::string& command) const {
        const double s = seconds();
        std::cerr << "[fegraph] " << command << " wall clock: " << s << " s\n";
        return s;
    }

  private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

// Sidecar metadata for artifact files: resolved config plus timing.
void write_meta(const std::string& artifact_path, const std::string& command,
                const ConfigMap& config, double wall_seconds) {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config;
    j["wall_seconds"] = wall_seconds;
    std::ofstream out(artifact_path + ".meta.json");
    if (!out)
        throw ValidationError("cannot write " + artifact_path + ".meta.json");
    out << j.dump(2) << '\n';
}

// Options shared by every command that builds embeddings or distances.
struct PipelineFlags {
    double eta = 1.0;
    int horizon = 0;
    double tol = 1e-9;
    double drop_threshold = 7.0;
    int max_sweeps = 0;
    int targets = 0;
    double percentile = 70.0;
    double max_target = 6.0;
    std::string similarity = "fe";
    std::string similarity_file;
    int window = 10;
    int negatives = 1;
    int d = 128;
    int iterations = 300;
    double learning_rate = 0.1;
    double init_scale = 0.1;
    std::uint64_t seed = 0;
    int threads = 0;

    void add_distance_flags(CLI::App* cmd) {
        cmd->add_option("--eta", eta, "inverse temperature of the free-energy recurrence");
        cmd->add_option("--horizon", horizon,
                        "number of sweeps (path-length bound); 0 = run to convergence");
        cmd->add_option("--tol", tol, "convergence tolerance for horizon 0");
        cmd->add_option("--drop-threshold", drop_threshold,
                        "log-sum-exp truncation gap; inf disables dropping");
        cmd->add_option("--max-sweeps", max_sweeps,
                        "sweep cap for horizon 0; 0 = ten times the node count");
        cmd->add_option("--targets", targets, "number of sampled target columns; 0 = all nodes");
        cmd->add_option("--seed", seed, "root seed; all randomness derives from it");
        cmd->add_option("--threads", threads, "worker thread cap; 0 = hardware default");
    }

    void add_embedding_flags(CLI::App* cmd) {
        add_distance_flags(cmd);
        cmd->add_option("--percentile", percentile, "off-diagonal percentile used as the shift b");
        cmd->add_option("--max-target", max_target, "largest off-diagonal similarity after scaling");
        cmd->add_option("--similarity", similarity, "similarity source")
            ->check(CLI::IsMember({"fe", "deepwalk", "external"}));
        cmd->add_option("--similarity-file", similarity_file,
                        "binary similarity matrix for --similarity external");
        cmd->add_option("--window", window, "random-walk window for the deepwalk source");
        cmd->add_option("--negatives", negatives, "negative-sampling factor for deepwalk");
        cmd->add_option("--d", d, "embedding dimension");
        cmd->add_option("--iterations", iterations, "optimizer iterations");
        cmd->add_option("--lr", learning_rate, "optimizer step size");
        cmd->add_option("--init-scale", init_scale, "factor init std = init-scale / sqrt(d)");
    }

    PipelineOptions to_pipeline_options() const {
        PipelineOptions o;
        if (similarity == "fe")
            o.source = SimilaritySource::FE;
        else if (similarity == "deepwalk")
            o.source = SimilaritySource::DeepWalk;
        else
            o.source = SimilaritySource::External;
        o.fe.eta = eta;
        o.fe.horizon = horizon;
        o.fe.convergence_tol = tol;
        o.fe.drop_threshold = drop_threshold;
        o.fe.max_sweeps = max_sweeps;
        o.targets = targets;
        o.percentile = percentile;
        o.max_target = max_target;
        o.window = window;
        o.negatives = negatives;
        o.external_path = similarity_file;
        o.fit.d = d;
        o.fit.iterations = iterations;
        o.fit.learning_rate = learning_rate;
        o.fit.init_scale = init_scale;
        o.threads = threads;
        return o;
    }

    ConfigMap config_map(bool distance_only = false) const {
        ConfigMap m;
        m["eta"] = fmt_g(eta);
        m["horizon"] = std::to_string(horizon);
        m["tol"] = fmt_g(tol);
        m["drop_threshold"] = fmt_g(drop_threshold);
        m["max_sweeps"] = std::to_string(max_sweeps);
        m["targets"] = std::to_string(targets);
        m["seed"] = std::to_string(seed);
        m["threads"] = std::to_string(threads);
        if (distance_only)
            return m;
        m["percentile"] = fmt_g(percentile);
        m["max_target"] = fmt_g(max_target);
        m["similarity"] = similarity;
        if (!similarity_file.empty())
            m["similarity_file"] = similarity_file;
        m["window"] = std::to_string(window);
        m["negatives"] = std::to_string(negatives);
        m["d"] = std::to_string(d);
        m["iterations"] = std::to_string(iterations);
        m["lr"] = fmt_g(learning_rate);
        m["init_scale"] = fmt_g(init_scale);
        return m;
    }
};

Graph load_and_preprocess(const std::string& path) {
    return preprocess(load_edge_list_file(path));
}

// Merge a key=value config file under the command line: file values fill
// options the flags left untouched (precedence flags > file > defaults).
void apply_config_file(CLI::App* cmd, const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read config file " + path);
    const auto strip = [](const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string text = strip(line);
        if (text.empty() || text[0] == '#')
            continue;
        const auto eq = text.find('=');
        if (eq == std::string::npos)
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected key=value");
        const std::string key = strip(text.substr(0, eq));
        const std::string value = strip(text.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected key=value");
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr)
            throw ParseError(path + ":" + std::to_string(lineno) + ": unknown key '" + key +
                             "'");
        if (opt->count() > 0)
            continue; // explicit flags win
        opt->add_result(value);
        opt->run_callback();
    }
}

void write_report(const EvalReport& report, const std::string& output_path) {
    const std::string text = to_json(report) + "\n";
    if (output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(output_path);
    if (!out)
        throw ValidationError("cannot write " + output_path);
    out << text;
}

void merge_config_into_report(EvalReport& report, const ConfigMap& config) {
    for (const auto& [k, v] : config)
        report.hyperparameters.emplace(k, v); // protocol-set keys win
}

// -------------------------------------------------------------------------
// prep

int run_prep(const std::string& input, const std::string& output, const std::string& merge) {
    WallClock clock;
    const ConfigMap config = {{"input", input}, {"output", output}, {"merge", merge}};
    log_config("prep", config);
    const Graph raw = load_edge_list_file(input, merge == "max" ? MergeRule::Max : MergeRule::Sum);
    const Graph g = preprocess(raw);
    std::ofstream out(output);
    if (!out)
        throw ValidationError("cannot write " + output);
    for (const auto& e : g.edges) {
        const std::string u = g.node_ids.empty() ? std::to_string(e.u) : g.node_ids[e.u];
        const std::string v = g.node_ids.empty() ? std::to_string(e.v) : g.node_ids[e.v];
        out << u << ' ' << v << ' ' << fmt_g(e.w) << '\n';
    }
    out.close();
    std::cerr << "[fegraph] prep: " << raw.n << " -> " << g.n << " nodes, " << g.edges.size()
              << " edges\n";
    write_meta(output, "prep", config, clock.log("prep"));
    return 0;
}

// -------------------------------------------------------------------------
// distance

int run_distance(const std::string& input, const std::string& output, const PipelineFlags& flags,
                 bool symmetrize_output, bool also_csv) {
    WallClock clock;
    ConfigMap config = flags.config_map(true);
    config["input"] = input;
    config["output"] = output;
    config["symmetrize"] = symmetrize_output ? "true" : "false";
    log_config("distance", config);

    const Graph g = load_and_preprocess(input);
    FEParams params;
    params.eta = flags.eta;
    params.horizon = flags.horizon;
    params.convergence_tol = flags.tol;
    params.drop_threshold = flags.drop_threshold;
    params.max_sweeps = flags.max_sweeps;

    std::vector<int> targets;
    if (flags.targets > 0 && flags.targets < g.n)
        targets = sample_targets(g.n, flags.targets, derive_seed(flags.seed, 0));
    else {
        targets.resize(g.n);
        for (int i = 0; i < g.n; ++i)
            targets[i] = i;
    }
    DissimilarityMatrix dist = fe_directed(g, params, targets, flags.threads);
    if (symmetrize_output)
        dist = symmetrize(dist);

    write_matrix_binary(output, dist.values);
    if (also_csv)
        write_matrix_csv(output + ".csv", dist.values);
    write_meta(output, "distance", config, clock.log("distance"));
    return 0;
}

// -------------------------------------------------------------------------
// embed

int run_embed(const std::string& input, const std::string& output, const PipelineFlags& flags,
              const std::string& trace_path) {
    WallClock clock;
    ConfigMap config = flags.config_map();
    config["input"] = input;
    config["output"] = output;
    log_config("embed", config);

    const Graph g = load_and_preprocess(input);
    const PipelineResult result = run_pipeline(g, flags.to_pipeline_options(), flags.seed);
    write_embedding_text(output, result.fit.embedding.U);
    if (!trace_path.empty()) {
        Eigen::MatrixXd trace(static_cast<Eigen::Index>(result.fit.loss_trace.size()), 1);
        for (std::size_t i = 0; i < result.fit.loss_trace.size(); ++i)
            trace(static_cast<Eigen::Index>(i), 0) = result.fit.loss_trace[i];
        write_matrix_csv(trace_path, trace);
    }
    std::cerr << "[fegraph] embed: " << g.n << " nodes -> d=" << flags.d
              << ", final objective " << fmt_g(result.fit.final_loss) << '\n';
    write_meta(output, "embed", config, clock.log("embed"));
    return 0;
}

// -------------------------------------------------------------------------
// evaluation commands

EvalReport eval_cluster_report(const Graph& g, const LabelSet& labels, const PipelineFlags& flags,
                               int embed_reps, int kmeans_runs) {
    const PipelineOptions opts = flags.to_pipeline_options();
    const EmbedFn embed = [&](std::uint64_t s) { return embed_graph(g, opts, s); };
    return clustering_protocol(embed, labels, embed_reps, kmeans_runs, flags.seed);
}

EvalReport eval_classify_report(const Graph& g, const LabelSet& labels, const PipelineFlags& flags,
                                double train_fraction, int splits) {
    const PipelineOptions opts = flags.to_pipeline_options();
    const Eigen::MatrixXd u = embed_graph(g, opts, derive_seed(flags.seed, 1));
    EvalReport report =
        classification_protocol(u, labels, train_fraction, splits, derive_seed(flags.seed, 2));
    report.seeds = {flags.seed};
    return report;
}

EvalReport eval_linkpred_report(const Graph& g, const PipelineFlags& flags,
                                const std::string& op_name, double removal_fraction,
                                int repetitions) {
    const PipelineOptions opts = flags.to_pipeline_options();
    const EmbedGraphFn embed = [&](const Graph& train, std::uint64_t s) {
        return embed_graph(train, opts, s);
    };
    return link_prediction_protocol(g, embed, pair_operator_from_string(op_name),
                                    removal_fraction, repetitions, flags.seed);
}

int run_eval_cluster(const std::string& input, const std::string& labels_path,
                     const std::string& output, const PipelineFlags& flags, int embed_reps,
                     int kmeans_runs) {
    WallClock clock;
    ConfigMap config = flags.config_map();
    config["input"] = input;
    config["labels"] = labels_path;
    config["embed_reps"] = std::to_string(embed_reps);
    config["kmeans_runs"] = std::to_string(kmeans_runs);
    log_config("eval-cluster", config);
    const Graph g = load_and_preprocess(input);
    const LabelSet labels = load_label_list_file(labels_path, g);
    EvalReport report = eval_cluster_report(g, labels, flags, embed_reps, kmeans_runs);
    merge_config_into_report(report, config);
    write_report(report, output);
    clock.log("eval-cluster");
    return 0;
}

int run_eval_classify(const std::string& input, const std::string& labels_path,
                      const std::string& output, const PipelineFlags& flags,
                      double train_fraction, int splits) {
    WallClock clock;
    ConfigMap config = flags.config_map();
    config["input"] = input;
    config["labels"] = labels_path;
    config["train_fraction"] = fmt_g(train_fraction);
    config["splits"] = std::to_string(splits);
    log_config("eval-classify", config);
    const Graph g = load_and_preprocess(input);
    const LabelSet labels = load_label_list_file(labels_path, g);
    EvalReport report = eval_classify_report(g, labels, flags, train_fraction, splits);
    merge_config_into_report(report, config);
    write_report(report, output);
    clock.log("eval-classify");
    return 0;
}

int run_eval_linkpred(const std::string& input, const std::string& output,
                      const PipelineFlags& flags, const std::string& op_name,
                      double removal_fraction, int repetitions) {
    WallClock clock;
    ConfigMap config = flags.config_map();
    config["input"] = input;
    config["operator"] = op_name;
    config["removal_fraction"] = fmt_g(removal_fraction);
    config["repetitions"] = std::to_string(repetitions);
    log_config("eval-linkpred", config);
    const Graph g = load_and_preprocess(input);
    EvalReport report = eval_linkpred_report(g, flags, op_name, removal_fraction, repetitions);
    merge_config_into_report(report, config);
    write_report(report, output);
    clock.log("eval-linkpred");
    return 0;
}

// -------------------------------------------------------------------------
// recon-demo: factorize the +/-5 similarity of a small random graph and
// compare generalized-fit and plain SVD reconstructions around the edges.

Graph random_er_connected(int n, double p, std::uint64_t seed) {
    if (n < 2)
        throw ValidationError("recon-demo: need at least 2 nodes");
    for (std::uint64_t attempt = 0; attempt < 10000; ++attempt) {
        Rng rng(derive_seed(seed, attempt));
        std::vector<Edge> edges;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j)
                if (rng.uniform() < p)
                    edges.push_back({i, j, 1.0});
        Graph g = make_graph(n, std::move(edges));
        if (is_connected(g))
            return g;
    }
    throw ValidationError("recon-demo: no connected sample after 10000 attempts");
}

struct ReconErrors {
    double edge_mae = 0.0;
    double non_edge_mae = 0.0;
    double max_abs = 0.0;
};

ReconErrors recon_errors(const Eigen::MatrixXd& rec, const Eigen::MatrixXd& s, const Graph& g) {
    ReconErrors e;
    int edge_cells = 0, non_edge_cells = 0;
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            if (i == j)
                continue;
            const double err = std::abs(rec(i, j) - s(i, j));
            if (g.has_edge(i, j)) {
                e.edge_mae += err;
                ++edge_cells;
            } else {
                e.non_edge_mae += err;
                ++non_edge_cells;
            }
        }
    e.edge_mae /= edge_cells;
    e.non_edge_mae /= non_edge_cells;
    e.max_abs = (rec - s).cwiseAbs().maxCoeff();
    return e;
}

int run_recon_demo(int n, double p, int d, int iterations, double lr, std::uint64_t seed,
                   const std::string& output_prefix) {
    WallClock clock;
    const ConfigMap config = {
        {"n", std::to_string(n)},         {"p", fmt_g(p)},
        {"d", std::to_string(d)},         {"iterations", std::to_string(iterations)},
        {"lr", fmt_g(lr)},                {"seed", std::to_string(seed)},
        {"output", output_prefix},
    };
    log_config("recon-demo", config);

    const Graph g = random_er_connected(n, p, derive_seed(seed, 0));
    Eigen::MatrixXd s = Eigen::MatrixXd::Constant(n, n, -5.0);
    for (const auto& e : g.edges) {
        s(e.u, e.v) = 5.0;
        s(e.v, e.u) = 5.0;
    }

    SimilarityMatrix sim;
    sim.values = s;
    sim.source = SimilaritySource::External;
    const PosNegWeights w = pos_neg_from_similarity(sim);

    FitOptions fit_opts;
    fit_opts.d = d;
    fit_opts.iterations = iterations;
    fit_opts.learning_rate = lr;
    fit_opts.seed = derive_seed(seed, 1);
    const FitResult fit = gmf_fit(w, fit_opts);
    const Eigen::MatrixXd gmf_rec = reconstruct(fit.embedding);

    const auto [svd_u, svd_v] = truncated_svd(s, d, derive_seed(seed, 2));
    const Eigen::MatrixXd svd_rec = svd_u * svd_v.transpose();

    write_matrix_binary(output_prefix + ".s.bin", s);
    write_matrix_binary(output_prefix + ".gmf.bin", gmf_rec);
    write_matrix_binary(output_prefix + ".svd.bin", svd_rec);

    const ReconErrors ge = recon_errors(gmf_rec, s, g);
    const ReconErrors se = recon_errors(svd_rec, s, g);
    nlohmann::json j;
    j["config"] = config;
    j["edges"] = g.edges.size();
    j["gmf"] = {{"edge_mae", ge.edge_mae},
                {"non_edge_mae", ge.non_edge_mae},
                {"max_abs_error", ge.max_abs},
                {"final_objective", fit.final_loss}};
    j["svd"] = {{"edge_mae", se.edge_mae},
                {"non_edge_mae", se.non_edge_mae},
                {"max_abs_error", se.max_abs}};
    j["wall_seconds"] = clock.seconds();
    std::ofstream out(output_prefix + ".json");
    if (!out)
        throw ValidationError("cannot write " + output_prefix + ".json");
    out << j.dump(2) << '\n';
    std::cerr << "[fegraph] recon-demo: gmf edge MAE " << ge.edge_mae << ", svd edge MAE "
              << se.edge_mae << '\n';
    clock.log("recon-demo");
    return 0;
}

// -------------------------------------------------------------------------
// sweep

std::vector<double> parse_values(const std::string& text) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty())
            throw ValidationError("sweep: empty value in --values");
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(token, &pos);
        } catch (const std::exception&) {
            throw ParseError("sweep: cannot parse value '" + token + "'");
        }
        if (pos != token.size())
            throw ParseError("sweep: cannot parse value '" + token + "'");
        values.push_back(v);
    }
    if (values.empty())
        throw ValidationError("sweep: --values is empty");
    return values;
}

void apply_sweep_value(PipelineFlags& flags, const std::string& parameter, double value) {
    const auto as_int = [&](int min_value) {
        const int i = static_cast<int>(value);
        if (static_cast<double>(i) != value || i < min_value)
            throw ValidationError("sweep: " + parameter + " needs an integer >= " +
                                  std::to_string(min_value) + ", got " + fmt_g(value));
        return i;
    };
    if (parameter == "eta")
        flags.eta = value;
    else if (parameter == "percentile")
        flags.percentile = value;
    else if (parameter == "max_target")
        flags.max_target = value;
    else if (parameter == "d")
        flags.d = as_int(1);
    else if (parameter == "horizon")
        flags.horizon = as_int(0);
    else if (parameter == "targets")
        flags.targets = as_int(0);
    else
        throw ValidationError("sweep: unknown parameter '" + parameter + "'");
}

int run_sweep(const std::string& input, const std::string& labels_path, const std::string& output,
              const PipelineFlags& base_flags, const std::string& parameter,
              const std::string& values_text, const std::string& task, double train_fraction,
              int splits, const std::string& op_name, double removal_fraction, int repetitions,
              int embed_reps, int kmeans_runs) {
    WallClock clock;
    ConfigMap config = base_flags.config_map();
    config["input"] = input;
    config["output"] = output;
    config["parameter"] = parameter;
    config["values"] = values_text;
    config["task"] = task;
    if (!labels_path.empty())
        config["labels"] = labels_path;
    log_config("sweep", config);

    const std::vector<double> values = parse_values(values_text);
    const Graph g = load_and_preprocess(input);
    LabelSet labels;
    if (task != "linkpred") {
        if (labels_path.empty())
            throw ValidationError("sweep: task '" + task + "' needs --labels");
        labels = load_label_list_file(labels_path, g);
    }

    std::vector<std::string> metric_names;
    std::vector<std::vector<double>> rows;
    for (double value : values) {
        PipelineFlags flags = base_flags;
        apply_sweep_value(flags, parameter, value);
        WallClock row_clock;
        EvalReport report;
        if (task == "cluster")
            report = eval_cluster_report(g, labels, flags, embed_reps, kmeans_runs);
        else if (task == "classify")
            report = eval_classify_report(g, labels, flags, train_fraction, splits);
        else if (task == "linkpred")
            report = eval_linkpred_report(g, flags, op_name, removal_fraction, repetitions);
        else
            throw ValidationError("sweep: unknown task '" + task + "'");
        if (metric_names.empty())
            for (const auto& [name, unused] : report.metrics)
                metric_names.push_back(name);
        std::vector<double> row = {value};
        for (const auto& name : metric_names)
            row.push_back(report.metrics.at(name));
        row.push_back(row_clock.seconds());
        rows.push_back(std::move(row));
        std::cerr << "[fegraph] sweep " << parameter << '=' << fmt_g(value) << " done\n";
    }

    std::ofstream out(output);
    if (!out)
        throw ValidationError("cannot write " + output);
    out << parameter;
    for (const auto& name : metric_names)
        out << ',' << name;
    out << ",runtime_s\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << fmt_g(row[i]);
        out << '\n';
    }
    out.close();
    write_meta(output, "sweep", config, clock.log("sweep"));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"free-energy graph embeddings: distances, similarities, factorization, "
                 "evaluation"};
    app.require_subcommand(1);
    std::map<std::string, std::string> config_paths; // per-subcommand --config
    const auto add_config = [&config_paths](CLI::App* cmd) {
        cmd->add_option("--config", config_paths[cmd->get_name()],
                        "key=value config file (flags win)");
    };

    // prep ------------------------------------------------------------
    auto* prep = app.add_subcommand("prep", "clean an edge list: drop self-loops, keep the "
                                            "largest connected component");
    std::string prep_input, prep_output, prep_merge = "sum";
    prep->add_option("--input", prep_input, "edge list file")->required();
    prep->add_option("--output", prep_output, "cleaned edge list file")->required();
    prep->add_option("--merge", prep_merge, "duplicate-edge rule")
        ->check(CLI::IsMember({"sum", "max"}));
    add_config(prep);

    // distance ---------------------------------------------------------
    auto* distance = app.add_subcommand("distance", "free-energy dissimilarity columns");
    std::string dist_input, dist_output;
    PipelineFlags dist_flags;
    bool dist_symmetrize = false, dist_csv = false;
    distance->add_option("--input", dist_input, "edge list file")->required();
    distance->add_option("--output", dist_output, "binary matrix output")->required();
    dist_flags.add_distance_flags(distance);
    distance->add_flag("--symmetrize", dist_symmetrize,
                       "write (Phi + Phi^T)/2 instead of directed Phi (full targets only)");
    distance->add_flag("--csv", dist_csv, "also write a CSV copy next to the binary");
    add_config(distance);

    // embed -------------------------------------------------------------
    auto* embed = app.add_subcommand("embed", "similarity + factorization node embedding");
    std::string embed_input, embed_output, embed_trace;
    PipelineFlags embed_flags;
    embed_flags.d = 128;
    embed->add_option("--input", embed_input, "edge list file")->required();
    embed->add_option("--output", embed_output, "embedding text output")->required();
    embed_flags.add_embedding_flags(embed);
    embed->add_option("--trace", embed_trace, "optional objective trace CSV");
    add_config(embed);

    // eval-cluster -------------------------------------------------------
    auto* evc = app.add_subcommand("eval-cluster", "clustering protocol: k-means on embeddings");
    std::string evc_input, evc_labels, evc_output;
    PipelineFlags evc_flags;
    evc_flags.d = 8;
    int evc_embed_reps = 5, evc_kmeans_runs = 10;
    evc->add_option("--input", evc_input, "edge list file")->required();
    evc->add_option("--labels", evc_labels, "label file")->required();
    evc->add_option("--output", evc_output, "JSON report path (stdout when omitted)");
    evc_flags.add_embedding_flags(evc);
    evc->add_option("--embed-reps", evc_embed_reps, "independent embeddings");
    evc->add_option("--kmeans-runs", evc_kmeans_runs, "k-means realizations per embedding");
    add_config(evc);

    // eval-classify --------------------------------------------------------
    auto* evf = app.add_subcommand("eval-classify", "node classification protocol");
    std::string evf_input, evf_labels, evf_output;
    PipelineFlags evf_flags;
    evf_flags.d = 128;
    double evf_train_fraction = 0.5;
    int evf_splits = 10;
    evf->add_option("--input", evf_input, "edge list file")->required();
    evf->add_option("--labels", evf_labels, "label file")->required();
    evf->add_option("--output", evf_output, "JSON report path (stdout when omitted)");
    evf_flags.add_embedding_flags(evf);
    evf->add_option("--train-fraction", evf_train_fraction, "train split fraction");
    evf->add_option("--splits", evf_splits, "number of shuffled splits");
    add_config(evf);

    // eval-linkpred ----------------------------------------------------------
    auto* evl = app.add_subcommand("eval-linkpred", "link prediction protocol");
    std::string evl_input, evl_output, evl_operator = "hadamard";
    PipelineFlags evl_flags;
    evl_flags.d = 128;
    double evl_removal = 0.3;
    int evl_reps = 10;
    evl->add_option("--input", evl_input, "edge list file")->required();
    evl->add_option("--output", evl_output, "JSON report path (stdout when omitted)");
    evl_flags.add_embedding_flags(evl);
    evl->add_option("--operator", evl_operator, "pair feature operator")
        ->check(CLI::IsMember({"average", "hadamard", "l1", "l2"}));
    evl->add_option("--removal-fraction", evl_removal, "fraction of edges hidden for testing");
    evl->add_option("--repetitions", evl_reps, "independent split/embed repetitions");
    add_config(evl);

    // recon-demo -----------------------------------------------------------
    auto* demo = app.add_subcommand("recon-demo", "factorize the +/-5 similarity of a random "
                                                  "graph; compare against plain SVD");
    int demo_n = 25, demo_d = 8, demo_iterations = 3000;
    double demo_p = 0.1, demo_lr = 0.1;
    std::uint64_t demo_seed = 0;
    std::string demo_output;
    demo->add_option("--n", demo_n, "node count");
    demo->add_option("--p", demo_p, "edge probability");
    demo->add_option("--d", demo_d, "factorization rank");
    demo->add_option("--iterations", demo_iterations, "optimizer iterations");
    demo->add_option("--lr", demo_lr, "optimizer step size");
    demo->add_option("--seed", demo_seed, "root seed");
    demo->add_option("--output", demo_output, "output path prefix")->required();
    add_config(demo);

    // sweep -------------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "rerun one evaluation task across parameter values");
    std::string sw_input, sw_labels, sw_output, sw_parameter, sw_values, sw_task = "cluster";
    std::string sw_operator = "hadamard";
    PipelineFlags sw_flags;
    sw_flags.d = 128;
    double sw_train_fraction = 0.5, sw_removal = 0.3;
    int sw_splits = 10, sw_reps = 10, sw_embed_reps = 5, sw_kmeans_runs = 10;
    sweep->add_option("--input", sw_input, "edge list file")->required();
    sweep->add_option("--labels", sw_labels, "label file (cluster/classify tasks)");
    sweep->add_option("--output", sw_output, "CSV output path")->required();
    sweep->add_option("--parameter", sw_parameter, "swept parameter")
        ->required()
        ->check(CLI::IsMember({"eta", "percentile", "max_target", "d", "horizon", "targets"}));
    sweep->add_option("--values", sw_values, "comma-separated parameter values")->required();
    sweep->add_option("--task", sw_task, "evaluation task")
        ->check(CLI::IsMember({"cluster", "classify", "linkpred"}));
    sw_flags.add_embedding_flags(sweep);
    sweep->add_option("--train-fraction", sw_train_fraction, "classify: train split fraction");
    sweep->add_option("--splits", sw_splits, "classify: number of splits");
    sweep->add_option("--operator", sw_operator, "linkpred: pair feature operator")
        ->check(CLI::IsMember({"average", "hadamard", "l1", "l2"}));
    sweep->add_option("--removal-fraction", sw_removal, "linkpred: hidden edge fraction");
    sweep->add_option("--repetitions", sw_reps, "linkpred: repetitions");
    sweep->add_option("--embed-reps", sw_embed_reps, "cluster: independent embeddings");
    sweep->add_option("--kmeans-runs", sw_kmeans_runs, "cluster: k-means realizations");
    add_config(sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        for (CLI::App* cmd : app.get_subcommands())
            if (!config_paths[cmd->get_name()].empty())
                apply_config_file(cmd, config_paths[cmd->get_name()]);
        if (prep->parsed())
            return run_prep(prep_input, prep_output, prep_merge);
        if (distance->parsed())
            return run_distance(dist_input, dist_output, dist_flags, dist_symmetrize, dist_csv);
        if (embed->parsed())
            return run_embed(embed_input, embed_output, embed_flags, embed_trace);
        if (evc->parsed())
            return run_eval_cluster(evc_input, evc_labels, evc_output, evc_flags, evc_embed_reps,
                                    evc_kmeans_runs);
        if (evf->parsed())
            return run_eval_classify(evf_input, evf_labels, evf_output, evf_flags,
                                     evf_train_fraction, evf_splits);
        if (evl->parsed())
            return run_eval_linkpred(evl_input, evl_output, evl_flags, evl_operator, evl_removal,
                                     evl_reps);
        if (demo->parsed())
            return run_recon_demo(demo_n, demo_p, demo_d, demo_iterations, demo_lr, demo_seed,
                                  demo_output);
        if (sweep->parsed())
            return run_sweep(sw_input, sw_labels, sw_output, sw_flags, sw_parameter, sw_values,
                             sw_task, sw_train_fraction, sw_splits, sw_operator, sw_removal,
                             sw_reps, sw_embed_reps, sw_kmeans_runs);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
