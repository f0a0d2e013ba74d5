#pragma once

#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "tne/graph.hpp"
#include "tne/rng.hpp"
#include "tne/topic_types.hpp"

namespace tne {

struct LouvainResult {
    TopicAssignment assignment;
    TopicPosterior posterior;
    std::vector<double> level_modularity;  // after each improving level
    double final_modularity = 0.0;
};

/// Newman modularity of a hard partition of an unweighted graph.
inline double modularity(const Graph& graph, std::span<const std::int32_t> communities) {
    const double m2 = 2.0 * static_cast<double>(graph.edge_count());
    if (m2 == 0.0) return 0.0;
    std::int32_t max_c = 0;
    for (auto c : communities) max_c = std::max(max_c, c);
    std::vector<double> internal(max_c + 1, 0.0), total(max_c + 1, 0.0);
    for (NodeId u = 0; u < graph.node_count(); ++u) {
        total[communities[u]] += static_cast<double>(graph.degree(u));
        for (NodeId v : graph.neighbors(u))
            if (communities[u] == communities[v]) internal[communities[u]] += 1.0;
    }
    double q = 0.0;
    for (std::size_t c = 0; c < internal.size(); ++c)
        q += internal[c] / m2 - (total[c] / m2) * (total[c] / m2);
    return q;
}

namespace detail {

// Aggregated weighted graph used between Louvain levels. Self weights hold
// collapsed intra-community edges, counted once.
struct LevelGraph {
    std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;
    std::vector<double> self_weight;
    std::vector<double> strength;  // sum of incident weights, self-loops twice
    double m2 = 0.0;

    std::size_t size() const { return adj.size(); }

    static LevelGraph from_graph(const Graph& g) {
        LevelGraph lg;
        lg.adj.resize(g.node_count());
        lg.self_weight.assign(g.node_count(), 0.0);
        lg.strength.assign(g.node_count(), 0.0);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            lg.adj[u].reserve(g.degree(u));
            for (NodeId v : g.neighbors(u)) lg.adj[u].emplace_back(v, 1.0);
            lg.strength[u] = static_cast<double>(g.degree(u));
            lg.m2 += lg.strength[u];
        }
        return lg;
    }
};

struct LevelOutcome {
    std::vector<std::uint32_t> community;  // per level-node, renumbered dense
    std::uint32_t community_count = 0;
    bool improved = false;
};

inline LevelOutcome louvain_one_level(const LevelGraph& lg, Rng& rng) {
    const std::size_t n = lg.size();
    std::vector<std::uint32_t> n2c(n);
    std::iota(n2c.begin(), n2c.end(), 0u);
    std::vector<double> tot(lg.strength);  // sum of strengths per community

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    rng.shuffle(order);

    // scratch: weight from the current node to each neighbor community
    std::vector<double> neigh_weight(n, -1.0);
    std::vector<std::uint32_t> neigh_comm;
    LevelOutcome out;

    bool moved_any_pass = true;
    while (moved_any_pass) {
        moved_any_pass = false;
        for (std::uint32_t u : order) {
            const std::uint32_t old_c = n2c[u];
            neigh_comm.clear();
            neigh_weight[old_c] = 0.0;
            neigh_comm.push_back(old_c);
            for (auto [v, w] : lg.adj[u]) {
                std::uint32_t c = n2c[v];
                if (neigh_weight[c] < 0.0) {
                    neigh_weight[c] = 0.0;
                    neigh_comm.push_back(c);
                }
                if (v != u) neigh_weight[c] += w;
            }
            tot[old_c] -= lg.strength[u];
            // gain of joining c (up to a constant): w_uc - k_u * tot_c / m2
            std::uint32_t best_c = old_c;
            double best_gain = neigh_weight[old_c] - lg.strength[u] * tot[old_c] / lg.m2;
            for (std::uint32_t c : neigh_comm) {
                if (c == old_c) continue;
                double gain = neigh_weight[c] - lg.strength[u] * tot[c] / lg.m2;
                if (gain > best_gain + 1e-12) {  // strict improvement only; ties stay put
                    best_gain = gain;
                    best_c = c;
                }
            }
            tot[best_c] += lg.strength[u];
            n2c[u] = best_c;
            if (best_c != old_c) {
                moved_any_pass = true;
                out.improved = true;
            }
            for (std::uint32_t c : neigh_comm) neigh_weight[c] = -1.0;
        }
    }

    // renumber communities densely in order of first appearance
    std::vector<std::uint32_t> renum(n, UINT32_MAX);
    out.community.resize(n);
    for (std::size_t u = 0; u < n; ++u) {
        if (renum[n2c[u]] == UINT32_MAX) renum[n2c[u]] = out.community_count++;
        out.community[u] = renum[n2c[u]];
    }
    return out;
}

inline LevelGraph aggregate(const LevelGraph& lg, const LevelOutcome& part) {
    LevelGraph next;
    next.adj.resize(part.community_count);
    next.self_weight.assign(part.community_count, 0.0);
    next.strength.assign(part.community_count, 0.0);
    next.m2 = lg.m2;
    std::vector<double> row(part.community_count, 0.0);
    std::vector<std::vector<double>> inter(part.community_count);
    for (auto& r : inter) r.assign(part.community_count, 0.0);
    for (std::size_t u = 0; u < lg.size(); ++u) {
        std::uint32_t cu = part.community[u];
        next.self_weight[cu] += lg.self_weight[u];
        for (auto [v, w] : lg.adj[u]) {
            std::uint32_t cv = part.community[v];
            if (cu == cv)
                next.self_weight[cu] += w * 0.5;  // each intra edge visited twice
            else
                inter[cu][cv] += w;
        }
    }
    for (std::uint32_t c = 0; c < part.community_count; ++c) {
        for (std::uint32_t d = 0; d < part.community_count; ++d)
            if (inter[c][d] > 0.0) next.adj[c].emplace_back(d, inter[c][d]);
        next.strength[c] = 2.0 * next.self_weight[c];
        for (auto [d, w] : next.adj[c]) next.strength[c] += w;
    }
    return next;
}

}  // namespace detail

/// Greedy modularity optimization: local moves plus graph aggregation,
/// repeated until a level yields no gain. P(v|k) rows are indicator/size.
inline LouvainResult louvain_fit(const Graph& graph, std::uint64_t seed) {
    LouvainResult result;
    const NodeId n = graph.node_count();
    std::vector<std::int32_t> node_comm(n);
    std::iota(node_comm.begin(), node_comm.end(), 0);

    if (graph.edge_count() > 0) {
        auto lg = detail::LevelGraph::from_graph(graph);
        std::vector<std::uint32_t> projection(n);
        std::iota(projection.begin(), projection.end(), 0u);
        int level = 0;
        while (true) {
            Rng rng(mix_seed({seed, 0x6c6f757661696eULL, static_cast<std::uint64_t>(level)}));
            auto outcome = detail::louvain_one_level(lg, rng);
            if (!outcome.improved) break;
            for (NodeId v = 0; v < n; ++v) projection[v] = outcome.community[projection[v]];
            for (NodeId v = 0; v < n; ++v) node_comm[v] = static_cast<std::int32_t>(projection[v]);
            result.level_modularity.push_back(modularity(graph, node_comm));
            lg = detail::aggregate(lg, outcome);
            ++level;
        }
    }

    // final dense renumbering by first appearance over node order
    std::vector<std::int32_t> renum;
    std::uint32_t k_count = 0;
    {
        std::int32_t max_c = 0;
        for (auto c : node_comm) max_c = std::max(max_c, c);
        renum.assign(max_c + 1, -1);
        for (NodeId v = 0; v < n; ++v) {
            if (renum[node_comm[v]] < 0) renum[node_comm[v]] = static_cast<std::int32_t>(k_count++);
            node_comm[v] = renum[node_comm[v]];
        }
    }

    result.final_modularity = modularity(graph, node_comm);
    result.assignment.per_node = std::move(node_comm);
    result.assignment.topic_count = k_count;
    result.assignment.backend = TopicBackend::louvain;

    auto& post = result.posterior;
    post.topic_count = k_count;
    post.vocab = n;
    post.backend = TopicBackend::louvain;
    post.phi.assign(static_cast<std::size_t>(k_count) * n, 0.0);
    std::vector<std::uint32_t> sizes(k_count, 0);
    for (NodeId v = 0; v < n; ++v) sizes[result.assignment.per_node[v]]++;
    for (NodeId v = 0; v < n; ++v) {
        auto k = static_cast<std::uint32_t>(result.assignment.per_node[v]);
        post.phi[static_cast<std::size_t>(k) * n + v] = 1.0 / sizes[k];
    }
    return result;
}

}  // namespace tne
