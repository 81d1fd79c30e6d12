#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace fegraph {

struct Edge {
    int u = 0;
    int v = 0;
    double w = 1.0;
};

struct Neighbor {
    int node = 0;
    double weight = 0.0;
};

// How repeated occurrences of the same unordered pair are merged at load
// time. Sum treats repeats as parallel edges; Max keeps the heaviest, which
// collapses a directed edge list into its undirected support.
enum class MergeRule { Sum, Max };

// Undirected weighted graph with contiguous node indices. Edges are stored
// once with u < v (u < v fails only for self-loops, which preprocess()
// removes); adjacency lists are sorted by neighbor index.
struct Graph {
    int n = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<Neighbor>> adj;
    std::vector<double> degree;          // weighted degree, kept in sync with adj
    std::vector<std::string> node_ids;   // original tokens; empty when synthetic

    int edge_count() const { return static_cast<int>(edges.size()); }
    bool has_edge(int u, int v) const;
    double total_volume() const;         // sum of weighted degrees

    Eigen::MatrixXd adjacency() const;
    Eigen::MatrixXd transition() const;  // row-stochastic D^-1 A
    Eigen::MatrixXd costs() const;       // 1/w per edge, +inf off-edge, 0 diagonal
};

// Builds adjacency/degree from an edge set and validates it (indices in
// range, strictly positive finite weights, no duplicate pairs).
Graph make_graph(int n, std::vector<Edge> edges, std::vector<std::string> node_ids = {});

// Whitespace-separated "src dst [weight]" lines; '#' starts a comment line.
// Tokens are node names: a token beginning with a digit must be a plain
// nonnegative integer, and a leading '-' is rejected outright. Names are
// mapped to indices in order of first appearance.
Graph load_edge_list(std::istream& in, MergeRule merge = MergeRule::Sum);
Graph load_edge_list_file(const std::string& path, MergeRule merge = MergeRule::Sum);

// Drops self-loops, restricts to the largest connected component (ties
// broken by smallest contained node index), and reindexes nodes so that the
// original index order is preserved. Idempotent.
Graph preprocess(const Graph& g);

bool is_connected(const Graph& g);

// Connected components as sorted index lists, ordered by smallest member.
std::vector<std::vector<int>> connected_components(const Graph& g);

// Induced subgraph on `nodes` (sorted ascending); new index i corresponds to
// nodes[i].
Graph induced_subgraph(const Graph& g, const std::vector<int>& nodes);

// Edge split for link prediction. train_graph is the largest component G' of
// the graph after removing floor(fraction * |E|) uniformly chosen edges;
// induced_graph is the subgraph of the *original* graph on G''s nodes, the
// universe that negative pairs must avoid. All pair lists use train_graph
// indices; original_nodes maps them back.
struct EdgeSplit {
    Graph train_graph;
    Graph induced_graph;
    std::vector<std::pair<int, int>> test_positive_pairs;
    std::vector<std::pair<int, int>> negative_pairs_train;
    std::vector<std::pair<int, int>> negative_pairs_test;
    std::vector<int> original_nodes;
    std::uint64_t seed = 0;
};

EdgeSplit split_edges_for_link_prediction(const Graph& g, double removal_fraction,
                                          std::uint64_t seed);

} // namespace fegraph
