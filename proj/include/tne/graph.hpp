#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "tne/util.hpp"

namespace tne {

using NodeId = std::uint32_t;

struct EdgeListStats {
    std::size_t self_loops_dropped = 0;
    std::size_t duplicates_dropped = 0;
};

/// Immutable undirected graph with contiguous node ids and a token dictionary.
/// Safe for unrestricted concurrent reads once built.
class Graph {
public:
    Graph() = default;

    NodeId node_count() const { return static_cast<NodeId>(adjacency_.size()); }
    std::size_t edge_count() const { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {adjacency_[v].data(), adjacency_[v].size()};
    }
    std::size_t degree(NodeId v) const { return adjacency_[v].size(); }

    bool has_edge(NodeId u, NodeId v) const {
        const auto& adj = adjacency_[u];
        return std::binary_search(adj.begin(), adj.end(), v);
    }

    const std::string& token(NodeId v) const { return tokens_[v]; }
    const std::vector<std::string>& tokens() const { return tokens_; }

    std::optional<NodeId> index_of(const std::string& token) const {
        auto it = index_.find(token);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    // Edges as (u, v) with u < v, ordered by index pair; the canonical form
    // used for serialization and splits.
    std::vector<std::pair<NodeId, NodeId>> edges() const {
        std::vector<std::pair<NodeId, NodeId>> out;
        out.reserve(edge_count_);
        for (NodeId u = 0; u < node_count(); ++u)
            for (NodeId v : adjacency_[u])
                if (u < v) out.emplace_back(u, v);
        return out;
    }

    /// Build from an explicit token list and edge set (indices into tokens).
    /// Isolated tokens are kept; self-loops and duplicates are rejected here
    /// because callers of this path already hold clean edges.
    static Graph from_edges(std::vector<std::string> tokens,
                            const std::vector<std::pair<NodeId, NodeId>>& edges) {
        Graph g;
        g.tokens_ = std::move(tokens);
        g.adjacency_.assign(g.tokens_.size(), {});
        for (NodeId i = 0; i < g.node_count(); ++i) {
            if (!g.index_.emplace(g.tokens_[i], i).second)
                throw std::invalid_argument("duplicate token in dictionary: " + g.tokens_[i]);
        }
        for (auto [u, v] : edges) {
            if (u >= g.node_count() || v >= g.node_count())
                throw std::invalid_argument("edge index out of range");
            if (u == v) throw std::invalid_argument("self-loop in edge set");
            g.adjacency_[u].push_back(v);
            g.adjacency_[v].push_back(u);
        }
        g.finalize_adjacency();
        return g;
    }

    friend Graph load_edge_list(std::istream& in, bool directed_input, EdgeListStats* stats);

private:
    void finalize_adjacency() {
        edge_count_ = 0;
        for (auto& adj : adjacency_) {
            std::sort(adj.begin(), adj.end());
            if (std::adjacent_find(adj.begin(), adj.end()) != adj.end())
                throw std::invalid_argument("duplicate edge in edge set");
            edge_count_ += adj.size();
        }
        edge_count_ /= 2;
    }

    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, NodeId> index_;
    std::size_t edge_count_ = 0;
};

/// Parse an edge-list stream: one edge per line, two whitespace-separated
/// tokens, '#' comment lines ignored. Tokens get dense indices in first-seen
/// order; self-loops and duplicate edges are dropped and counted. Nodes whose
/// only lines were dropped stay in the dictionary with degree zero.
inline Graph load_edge_list(std::istream& in, bool directed_input = false,
                            EdgeListStats* stats = nullptr) {
    Graph g;
    EdgeListStats local;
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<NodeId, NodeId>> edges;

    auto intern = [&](const std::string& tok) -> NodeId {
        auto [it, inserted] = g.index_.emplace(tok, static_cast<NodeId>(g.tokens_.size()));
        if (inserted) g.tokens_.push_back(tok);
        return it->second;
    };

    while (std::getline(in, line)) {
        ++line_no;
        auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto parts = split_ws(body);
        if (parts.size() != 2)
            throw std::invalid_argument("edge list parse error at line " + std::to_string(line_no) +
                                        ": expected two tokens, got " + std::to_string(parts.size()));
        NodeId u = intern(parts[0]);
        NodeId v = intern(parts[1]);
        if (u == v) {
            ++local.self_loops_dropped;
            continue;
        }
        edges.emplace_back(std::min(u, v), std::max(u, v));
    }
    if (g.tokens_.empty()) throw std::invalid_argument("empty graph: no edges in input");

    std::sort(edges.begin(), edges.end());
    g.adjacency_.assign(g.tokens_.size(), {});
    std::pair<NodeId, NodeId> prev{0, 0};
    bool first = true;
    for (auto e : edges) {
        if (!first && e == prev) {
            ++local.duplicates_dropped;
            continue;
        }
        first = false;
        prev = e;
        g.adjacency_[e.first].push_back(e.second);
        g.adjacency_[e.second].push_back(e.first);
    }
    // directed input differs only in bookkeeping expectations: a->b and b->a
    // collapse to one undirected edge (counted above as a duplicate)
    (void)directed_input;
    g.finalize_adjacency();
    if (stats) *stats = local;
    return g;
}

inline Graph load_edge_list_file(const std::string& path, bool directed_input = false,
                                 EdgeListStats* stats = nullptr) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open edge list: " + path);
    return load_edge_list(in, directed_input, stats);
}

/// Canonical serialization: one line per edge, token pair, ordered by index.
/// Degree-zero nodes are not representable in an edge list; round-tripping is
/// exact for graphs where every node has at least one edge.
inline void write_edge_list(std::ostream& out, const Graph& g) {
    for (auto [u, v] : g.edges()) out << g.token(u) << ' ' << g.token(v) << '\n';
}

inline bool is_connected(const Graph& g) {
    const NodeId n = g.node_count();
    if (n == 0) throw std::invalid_argument("is_connected: empty graph");
    std::vector<char> seen(n, 0);
    std::vector<NodeId> stack{0};
    seen[0] = 1;
    NodeId visited = 1;
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : g.neighbors(u)) {
            if (!seen[v]) {
                seen[v] = 1;
                ++visited;
                stack.push_back(v);
            }
        }
    }
    return visited == n;
}

/// Per-node label sets for multi-label classification.
struct LabelSet {
    std::vector<std::vector<std::uint32_t>> node_labels;  // indexed by node id; empty = unlabeled
    std::vector<std::string> label_tokens;
    std::uint32_t label_count = 0;

    std::size_t labeled_node_count() const {
        std::size_t n = 0;
        for (const auto& l : node_labels) n += !l.empty();
        return n;
    }
};

/// Parse "node-token label-token..." lines against an existing graph.
/// Tokens that are not graph nodes are an error, reported all at once.
inline LabelSet load_labels(std::istream& in, const Graph& graph) {
    LabelSet ls;
    ls.node_labels.assign(graph.node_count(), {});
    std::unordered_map<std::string, std::uint32_t> label_index;
    std::vector<std::string> unknown;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        auto parts = split_ws(body);
        if (parts.size() < 2)
            throw std::invalid_argument("label parse error at line " + std::to_string(line_no) +
                                        ": expected node token plus at least one label");
        auto node = graph.index_of(parts[0]);
        if (!node) {
            unknown.push_back(parts[0]);
            continue;
        }
        for (std::size_t i = 1; i < parts.size(); ++i) {
            auto [it, inserted] =
                label_index.emplace(parts[i], static_cast<std::uint32_t>(ls.label_tokens.size()));
            if (inserted) ls.label_tokens.push_back(parts[i]);
            auto& labels = ls.node_labels[*node];
            if (std::find(labels.begin(), labels.end(), it->second) == labels.end())
                labels.push_back(it->second);
        }
    }
    if (!unknown.empty()) {
        std::string msg = "label file references unknown node tokens:";
        for (const auto& t : unknown) msg += ' ' + t;
        throw std::invalid_argument(msg);
    }
    for (auto& labels : ls.node_labels) std::sort(labels.begin(), labels.end());
    ls.label_count = static_cast<std::uint32_t>(ls.label_tokens.size());
    return ls;
}

inline LabelSet load_labels_file(const std::string& path, const Graph& graph) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file: " + path);
    return load_labels(in, graph);
}

}  // namespace tne
