#pragma once

#include <atomic>
#include <cstdint>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <vector>

#include "tne/graph.hpp"
#include "tne/rng.hpp"

namespace tne {

enum class WalkStrategy { uniform, biased };

struct WalkParams {
    int walks_per_node = 80;   // n
    int walk_length = 10;      // L
    WalkStrategy strategy = WalkStrategy::uniform;
    double p = 1.0;
    double q = 1.0;
    std::uint64_t seed = 42;
    bool alias_cache = false;  // precompute second-order alias tables per (prev, cur)
    int threads = 1;
};

struct WalkCorpus {
    std::vector<std::vector<NodeId>> walks;
    WalkParams params;

    std::size_t size() const { return walks.size(); }
    std::size_t token_count() const {
        std::size_t n = 0;
        for (const auto& w : walks) n += w.size();
        return n;
    }
};

/// Next-step distribution over adj(cur). With no previous node the step is
/// uniform; otherwise node2vec weights: 1/p back to prev, 1 to common
/// neighbors of prev, 1/q to the rest.
inline std::vector<double> transition_distribution(const Graph& graph,
                                                   std::optional<NodeId> prev, NodeId cur,
                                                   double p, double q) {
    auto adj = graph.neighbors(cur);
    std::vector<double> probs(adj.size());
    if (adj.empty()) return probs;
    if (!prev) {
        double u = 1.0 / static_cast<double>(adj.size());
        for (auto& x : probs) x = u;
        return probs;
    }
    double total = 0.0;
    for (std::size_t i = 0; i < adj.size(); ++i) {
        double w;
        if (adj[i] == *prev)
            w = 1.0 / p;
        else if (graph.has_edge(*prev, adj[i]))
            w = 1.0;
        else
            w = 1.0 / q;
        probs[i] = w;
        total += w;
    }
    for (auto& x : probs) x /= total;
    return probs;
}

namespace detail {

// Alias tables for every (prev -> cur) pair plus first-step tables; the
// standard node2vec preprocessing. Memory is O(sum_v deg(v)^2).
struct SecondOrderAliasCache {
    std::unordered_map<std::uint64_t, AliasTable> second;
    std::vector<AliasTable> first;

    static std::uint64_t key(NodeId prev, NodeId cur) {
        return (static_cast<std::uint64_t>(prev) << 32) | cur;
    }

    void build(const Graph& graph, double p, double q) {
        first.resize(graph.node_count());
        std::vector<double> uniform_w;
        for (NodeId v = 0; v < graph.node_count(); ++v) {
            uniform_w.assign(graph.degree(v), 1.0);
            first[v].build(uniform_w);
            for (NodeId prev : graph.neighbors(v)) {
                auto probs = transition_distribution(graph, prev, v, p, q);
                second.emplace(key(prev, v), AliasTable(probs));
            }
        }
    }
};

inline std::vector<NodeId> simulate_walk(const Graph& graph, NodeId start, const WalkParams& wp,
                                         Rng& rng, const SecondOrderAliasCache* cache) {
    std::vector<NodeId> walk;
    walk.reserve(wp.walk_length);
    walk.push_back(start);
    NodeId cur = start;
    std::optional<NodeId> prev;
    std::vector<double> probs;
    while (static_cast<int>(walk.size()) < wp.walk_length) {
        auto adj = graph.neighbors(cur);
        if (adj.empty()) break;
        NodeId next;
        if (wp.strategy == WalkStrategy::uniform || !prev) {
            next = adj[rng.uniform_int(adj.size())];
        } else if (cache) {
            const auto& table = cache->second.at(SecondOrderAliasCache::key(*prev, cur));
            next = adj[table.sample(rng)];
        } else {
            probs = transition_distribution(graph, prev, cur, wp.p, wp.q);
            next = adj[rng.sample_discrete(probs)];
        }
        prev = cur;
        cur = next;
        walk.push_back(cur);
    }
    return walk;
}

}  // namespace detail

/// Generate walks_per_node walks from every node. Each pass visits nodes in a
/// seeded shuffled order; every walk draws from its own RNG stream derived
/// from (seed, pass, start node), so any thread count reproduces the
/// sequential corpus byte for byte.
inline constexpr std::uint64_t kShuffleSalt = 0x73687566666c65ULL;  // stream id for pass shuffles
inline constexpr std::uint64_t kWalkSalt = 0x77616c6bULL;           // stream id for walk simulation

inline WalkCorpus generate_walks(const Graph& graph, const WalkParams& params) {
    if (params.walks_per_node < 1 || params.walk_length < 1)
        throw std::invalid_argument("generate_walks: n and L must be >= 1");
    if (params.strategy == WalkStrategy::biased && (params.p <= 0.0 || params.q <= 0.0))
        throw std::invalid_argument("generate_walks: p and q must be positive");

    const NodeId n_nodes = graph.node_count();
    detail::SecondOrderAliasCache cache;
    const bool use_cache = params.alias_cache && params.strategy == WalkStrategy::biased;
    if (use_cache) cache.build(graph, params.p, params.q);

    WalkCorpus corpus;
    corpus.params = params;
    corpus.walks.resize(static_cast<std::size_t>(params.walks_per_node) * n_nodes);

    std::vector<NodeId> order(n_nodes);
    std::vector<NodeId> starts(corpus.walks.size());
    std::vector<std::uint32_t> pass_of(corpus.walks.size());
    for (int pass = 0; pass < params.walks_per_node; ++pass) {
        std::iota(order.begin(), order.end(), NodeId{0});
        Rng shuffle_rng(mix_seed({params.seed, kShuffleSalt, static_cast<std::uint64_t>(pass)}));
        shuffle_rng.shuffle(order);
        for (NodeId i = 0; i < n_nodes; ++i) {
            std::size_t slot = static_cast<std::size_t>(pass) * n_nodes + i;
            starts[slot] = order[i];
            pass_of[slot] = static_cast<std::uint32_t>(pass);
        }
    }

    auto run_slot = [&](std::size_t slot) {
        Rng rng(mix_seed({params.seed, kWalkSalt, pass_of[slot], starts[slot]}));
        corpus.walks[slot] =
            detail::simulate_walk(graph, starts[slot], params, rng, use_cache ? &cache : nullptr);
    };

    const int threads = std::max(1, params.threads);
    if (threads == 1) {
        for (std::size_t s = 0; s < corpus.walks.size(); ++s) run_slot(s);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t)
            pool.emplace_back([&] {
                for (std::size_t s = next.fetch_add(1); s < corpus.walks.size();
                     s = next.fetch_add(1))
                    run_slot(s);
            });
        for (auto& th : pool) th.join();
    }
    return corpus;
}

/// Corpus text format: one walk per line, space-separated dictionary tokens.
inline void write_corpus(std::ostream& out, const WalkCorpus& corpus, const Graph& graph) {
    for (const auto& walk : corpus.walks) {
        for (std::size_t i = 0; i < walk.size(); ++i) {
            if (i) out << ' ';
            out << graph.token(walk[i]);
        }
        out << '\n';
    }
}

inline WalkCorpus read_corpus(std::istream& in, const Graph& graph) {
    WalkCorpus corpus;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto body = trim(line);
        if (body.empty()) continue;
        auto parts = split_ws(body);
        std::vector<NodeId> walk;
        walk.reserve(parts.size());
        for (const auto& tok : parts) {
            auto id = graph.index_of(tok);
            if (!id)
                throw std::invalid_argument("corpus line " + std::to_string(line_no) +
                                            ": unknown node token " + tok);
            walk.push_back(*id);
        }
        corpus.walks.push_back(std::move(walk));
    }
    return corpus;
}

}  // namespace tne
