#include "fegraph/graph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <deque>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "fegraph/errors.hpp"
#include "fegraph/rng.hpp"

namespace fegraph {

namespace {

std::string line_tag(std::size_t lineno) {
    return "line " + std::to_string(lineno) + ": ";
}

bool parse_weight(const std::string& token, double& out) {
    std::size_t used = 0;
    try {
        out = std::stod(token, &used);
    } catch (const std::exception&) {
        return false;
    }
    return used == token.size();
}

// Node tokens are arbitrary names, but anything that starts like a number
// must actually be one: a plain nonnegative integer. This catches column
// slips such as a weight landing in the id position.
void check_node_token(const std::string& token, std::size_t lineno) {
    if (token.front() == '-')
        throw ParseError(line_tag(lineno) + "invalid node id '" + token + "'");
    if (std::isdigit(static_cast<unsigned char>(token.front()))) {
        for (char c : token)
            if (!std::isdigit(static_cast<unsigned char>(c)))
                throw ParseError(line_tag(lineno) + "invalid node id '" + token + "'");
    }
}

} // namespace

bool Graph::has_edge(int u, int v) const {
    const auto& nbrs = adj[u];
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), v,
                               [](const Neighbor& a, int b) { return a.node < b; });
    return it != nbrs.end() && it->node == v;
}

double Graph::total_volume() const {
    double vol = 0.0;
    for (double d : degree)
        vol += d;
    return vol;
}

Eigen::MatrixXd Graph::adjacency() const {
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (const Edge& e : edges) {
        a(e.u, e.v) += e.w;
        if (e.u != e.v)
            a(e.v, e.u) += e.w;
    }
    return a;
}

Eigen::MatrixXd Graph::transition() const {
    Eigen::MatrixXd p = adjacency();
    for (int i = 0; i < n; ++i) {
        if (degree[i] <= 0.0)
            throw ValidationError("transition: node " + std::to_string(i) +
                                  " has zero degree");
        p.row(i) /= degree[i];
    }
    return p;
}

Eigen::MatrixXd Graph::costs() const {
    const double inf = std::numeric_limits<double>::infinity();
    Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, inf);
    for (int i = 0; i < n; ++i)
        c(i, i) = 0.0;
    for (const Edge& e : edges) {
        c(e.u, e.v) = 1.0 / e.w;
        c(e.v, e.u) = 1.0 / e.w;
    }
    return c;
}

Graph make_graph(int n, std::vector<Edge> edges, std::vector<std::string> node_ids) {
    if (n < 0)
        throw ValidationError("make_graph: negative node count");
    if (!node_ids.empty() && static_cast<int>(node_ids.size()) != n)
        throw ValidationError("make_graph: node_ids size mismatch");
    Graph g;
    g.n = n;
    g.node_ids = std::move(node_ids);
    g.adj.resize(n);
    g.degree.assign(n, 0.0);
    for (Edge& e : edges) {
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            throw ValidationError("make_graph: edge endpoint out of range");
        if (!(e.w > 0.0) || !std::isfinite(e.w))
            throw ValidationError("make_graph: edge weight must be positive and finite");
        if (e.u > e.v)
            std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
        return std::tie(a.u, a.v) < std::tie(b.u, b.v);
    });
    for (std::size_t i = 1; i < edges.size(); ++i)
        if (edges[i].u == edges[i - 1].u && edges[i].v == edges[i - 1].v)
            throw ValidationError("make_graph: duplicate edge");
    for (const Edge& e : edges) {
        g.adj[e.u].push_back({e.v, e.w});
        if (e.u != e.v)
            g.adj[e.v].push_back({e.u, e.w});
        g.degree[e.u] += e.w;
        if (e.u != e.v)
            g.degree[e.v] += e.w;
    }
    for (auto& nbrs : g.adj)
        std::sort(nbrs.begin(), nbrs.end(),
                  [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
    g.edges = std::move(edges);
    return g;
}

Graph load_edge_list(std::istream& in, MergeRule merge) {
    std::unordered_map<std::string, int> index;
    std::vector<std::string> names;
    std::map<std::pair<int, int>, double> merged;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok)
            tokens.push_back(tok);
        if (tokens.empty() || tokens.front().front() == '#')
            continue;
        if (tokens.size() != 2 && tokens.size() != 3)
            throw ParseError(line_tag(lineno) + "expected 'src dst [weight]'");
        check_node_token(tokens[0], lineno);
        check_node_token(tokens[1], lineno);
        double w = 1.0;
        if (tokens.size() == 3) {
            if (!parse_weight(tokens[2], w))
                throw ParseError(line_tag(lineno) + "invalid weight '" + tokens[2] + "'");
            if (!std::isfinite(w) || w <= 0.0)
                throw ValidationError(line_tag(lineno) + "weight must be positive, got '" +
                                      tokens[2] + "'");
        }
        auto id_of = [&](const std::string& name) {
            auto [it, inserted] = index.emplace(name, static_cast<int>(names.size()));
            if (inserted)
                names.push_back(name);
            return it->second;
        };
        int u = id_of(tokens[0]);
        int v = id_of(tokens[1]);
        if (u > v)
            std::swap(u, v);
        auto [it, inserted] = merged.emplace(std::make_pair(u, v), w);
        if (!inserted)
            it->second = merge == MergeRule::Sum ? it->second + w : std::max(it->second, w);
    }
    std::vector<Edge> edges;
    edges.reserve(merged.size());
    for (const auto& [pair, w] : merged)
        edges.push_back({pair.first, pair.second, w});
    const int n = static_cast<int>(names.size());
    return make_graph(n, std::move(edges), std::move(names));
}

Graph load_edge_list_file(const std::string& path, MergeRule merge) {
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot open edge list '" + path + "'");
    return load_edge_list(in, merge);
}

std::vector<std::vector<int>> connected_components(const Graph& g) {
    std::vector<int> comp(g.n, -1);
    std::vector<std::vector<int>> out;
    for (int s = 0; s < g.n; ++s) {
        if (comp[s] != -1)
            continue;
        const int id = static_cast<int>(out.size());
        out.emplace_back();
        std::deque<int> queue{s};
        comp[s] = id;
        while (!queue.empty()) {
            const int u = queue.front();
            queue.pop_front();
            out[id].push_back(u);
            for (const Neighbor& nb : g.adj[u]) {
                if (comp[nb.node] == -1) {
                    comp[nb.node] = id;
                    queue.push_back(nb.node);
                }
            }
        }
        std::sort(out[id].begin(), out[id].end());
    }
    return out;
}

bool is_connected(const Graph& g) {
    return g.n > 0 && connected_components(g).size() == 1;
}

Graph induced_subgraph(const Graph& g, const std::vector<int>& nodes) {
    std::unordered_map<int, int> to_new;
    to_new.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (nodes[i] < 0 || nodes[i] >= g.n)
            throw ValidationError("induced_subgraph: node out of range");
        if (i > 0 && nodes[i] <= nodes[i - 1])
            throw ValidationError("induced_subgraph: nodes must be sorted and distinct");
        to_new[nodes[i]] = static_cast<int>(i);
    }
    std::vector<Edge> edges;
    for (const Edge& e : g.edges) {
        auto iu = to_new.find(e.u);
        auto iv = to_new.find(e.v);
        if (iu != to_new.end() && iv != to_new.end())
            edges.push_back({iu->second, iv->second, e.w});
    }
    std::vector<std::string> ids;
    if (!g.node_ids.empty()) {
        ids.reserve(nodes.size());
        for (int v : nodes)
            ids.push_back(g.node_ids[v]);
    }
    return make_graph(static_cast<int>(nodes.size()), std::move(edges), std::move(ids));
}

Graph preprocess(const Graph& g) {
    std::vector<Edge> kept;
    kept.reserve(g.edges.size());
    for (const Edge& e : g.edges)
        if (e.u != e.v)
            kept.push_back(e);
    Graph simple = make_graph(g.n, std::move(kept), g.node_ids);
    auto comps = connected_components(simple);
    if (comps.empty())
        throw ValidationError("preprocess: empty graph");
    // Largest component; the component list is ordered by smallest member,
    // so stable max-by-size breaks ties toward the smallest index.
    std::size_t best = 0;
    for (std::size_t i = 1; i < comps.size(); ++i)
        if (comps[i].size() > comps[best].size())
            best = i;
    if (comps[best].size() < 2)
        throw ValidationError("preprocess: largest component has no edges");
    return induced_subgraph(simple, comps[best]);
}

EdgeSplit split_edges_for_link_prediction(const Graph& g, double removal_fraction,
                                          std::uint64_t seed) {
    if (!(removal_fraction > 0.0) || !(removal_fraction < 1.0))
        throw ValidationError("split_edges: removal fraction must be in (0, 1)");
    const Graph base = preprocess(g);
    const int m = base.edge_count();
    const int removed_count = static_cast<int>(std::floor(removal_fraction * m));

    Rng rng(seed);
    std::vector<std::uint64_t> order(m);
    for (int i = 0; i < m; ++i)
        order[i] = static_cast<std::uint64_t>(i);
    rng.shuffle(order);

    std::vector<bool> removed(m, false);
    for (int i = 0; i < removed_count; ++i)
        removed[order[i]] = true;

    std::vector<Edge> kept;
    kept.reserve(m - removed_count);
    for (int i = 0; i < m; ++i)
        if (!removed[i])
            kept.push_back(base.edges[i]);
    Graph remainder = make_graph(base.n, std::move(kept), base.node_ids);
    auto comps = connected_components(remainder);
    std::size_t best = 0;
    for (std::size_t i = 1; i < comps.size(); ++i)
        if (comps[i].size() > comps[best].size())
            best = i;
    if (comps[best].size() < 2)
        throw ValidationError("split_edges: removal leaves no usable component");
    const std::vector<int>& nodes = comps[best];

    EdgeSplit split;
    split.seed = seed;
    split.original_nodes = nodes;
    split.train_graph = induced_subgraph(remainder, nodes);
    split.induced_graph = induced_subgraph(base, nodes);

    std::unordered_map<int, int> to_new;
    to_new.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        to_new[nodes[i]] = static_cast<int>(i);
    for (int i = 0; i < m; ++i) {
        if (!removed[i])
            continue;
        const Edge& e = base.edges[i];
        auto iu = to_new.find(e.u);
        auto iv = to_new.find(e.v);
        if (iu != to_new.end() && iv != to_new.end())
            split.test_positive_pairs.emplace_back(iu->second, iv->second);
    }
    std::sort(split.test_positive_pairs.begin(), split.test_positive_pairs.end());

    // Negatives: distinct non-edges of the induced original graph, drawn
    // uniformly; train and test sets are disjoint by construction.
    const std::int64_t np = split.train_graph.n;
    const std::int64_t total_pairs = np * (np - 1) / 2;
    const std::int64_t universe = total_pairs - split.induced_graph.edge_count();
    const std::int64_t want_train = split.train_graph.edge_count();
    const std::int64_t want_test = static_cast<std::int64_t>(split.test_positive_pairs.size());
    if (want_train + want_test > universe)
        throw ValidationError("split_edges: not enough non-edges for negative sampling");

    std::vector<std::pair<int, int>> picked;
    picked.reserve(static_cast<std::size_t>(want_train + want_test));
    if (universe <= 2 * (want_train + want_test)) {
        // Dense regime: enumerate the universe and take a random prefix.
        std::vector<std::pair<int, int>> pool;
        pool.reserve(static_cast<std::size_t>(universe));
        for (int u = 0; u < np; ++u)
            for (int v = u + 1; v < np; ++v)
                if (!split.induced_graph.has_edge(u, v))
                    pool.emplace_back(u, v);
        const auto idx = rng.sample_without_replacement(pool.size(),
                                                        static_cast<std::uint64_t>(want_train + want_test));
        for (std::uint64_t i : idx)
            picked.push_back(pool[i]);
    } else {
        std::unordered_set<std::int64_t> seen;
        while (picked.size() < static_cast<std::size_t>(want_train + want_test)) {
            int u = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(np)));
            int v = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(np)));
            if (u == v)
                continue;
            if (u > v)
                std::swap(u, v);
            if (split.induced_graph.has_edge(u, v))
                continue;
            if (!seen.insert(static_cast<std::int64_t>(u) * np + v).second)
                continue;
            picked.emplace_back(u, v);
        }
    }
    split.negative_pairs_train.assign(picked.begin(), picked.begin() + want_train);
    split.negative_pairs_test.assign(picked.begin() + want_train, picked.end());
    return split;
}

} // namespace fegraph
