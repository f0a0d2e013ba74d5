#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <unordered_set>
#include <vector>

#include "tne/graph.hpp"
#include "tne/logreg.hpp"
#include "tne/rng.hpp"

namespace tne {

// ---- multi-label node classification ----------------------------------------

struct ClassificationReport {
    struct Row {
        double ratio;
        int trial;
        double micro_f1;
        double macro_f1;
    };
    struct Aggregate {
        double ratio;
        double micro_mean, micro_std;
        double macro_mean, macro_std;
    };
    std::vector<Row> rows;
    std::vector<Aggregate> aggregates;
};

struct F1Counts {
    std::vector<std::uint64_t> tp, fp, fn;  // per label

    explicit F1Counts(std::uint32_t label_count)
        : tp(label_count, 0), fp(label_count, 0), fn(label_count, 0) {}

    double micro() const {
        std::uint64_t t = 0, p = 0, n = 0;
        for (std::size_t l = 0; l < tp.size(); ++l) {
            t += tp[l];
            p += fp[l];
            n += fn[l];
        }
        double denom = 2.0 * t + p + n;
        return denom > 0.0 ? 2.0 * t / denom : 0.0;
    }
    double macro() const {
        double sum = 0.0;
        for (std::size_t l = 0; l < tp.size(); ++l) {
            double denom = 2.0 * static_cast<double>(tp[l]) + fp[l] + fn[l];
            sum += denom > 0.0 ? 2.0 * tp[l] / denom : 0.0;
        }
        return tp.empty() ? 0.0 : sum / static_cast<double>(tp.size());
    }
};

/// Score every label for a test node and keep the top r by score, where r is
/// the node's true label count; score ties break toward the lower label id.
inline std::vector<std::uint32_t> top_r_labels(const std::vector<double>& scores, std::size_t r) {
    std::vector<std::uint32_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    order.resize(std::min(r, order.size()));
    std::sort(order.begin(), order.end());
    return order;
}

/// The Fig. 2 / Table 2 protocol: per trial, a seeded split of the labeled
/// nodes at each training ratio, a one-vs-rest L2 logistic regression on the
/// embedding features, top-r prediction, Micro/Macro-F1.
inline ClassificationReport classify_eval(const double* features, std::uint32_t n_rows,
                                          std::uint32_t dim, const LabelSet& labels,
                                          const std::vector<double>& ratios, int trials,
                                          double l2, std::uint64_t seed) {
    for (double r : ratios)
        if (!(r > 0.0 && r < 1.0))
            throw std::invalid_argument("classify_eval: ratios must lie in (0,1)");
    if (trials < 1) throw std::invalid_argument("classify_eval: trials must be >= 1");

    std::vector<std::uint32_t> labeled;
    for (std::uint32_t v = 0; v < n_rows && v < labels.node_labels.size(); ++v)
        if (!labels.node_labels[v].empty()) labeled.push_back(v);
    if (labeled.size() < 2) throw std::invalid_argument("classify_eval: fewer than two labeled nodes");

    ClassificationReport report;
    LogregOptions opts;
    opts.l2 = l2;

    for (double ratio : ratios) {
        std::vector<double> micros, macros;
        for (int trial = 0; trial < trials; ++trial) {
            std::vector<std::uint32_t> order = labeled;
            Rng rng(mix_seed({seed, 0x747269616cULL, static_cast<std::uint64_t>(trial)}));
            rng.shuffle(order);
            auto train_n = static_cast<std::size_t>(ratio * static_cast<double>(order.size()));
            train_n = std::clamp<std::size_t>(train_n, 1, order.size() - 1);

            std::vector<double> train_X;
            std::vector<std::vector<std::uint32_t>> train_y;
            train_X.reserve(train_n * dim);
            train_y.reserve(train_n);
            for (std::size_t i = 0; i < train_n; ++i) {
                const double* row = features + static_cast<std::size_t>(order[i]) * dim;
                train_X.insert(train_X.end(), row, row + dim);
                train_y.push_back(labels.node_labels[order[i]]);
            }
            OvrModel model =
                logreg_ovr_fit(train_X.data(), train_n, dim, train_y, labels.label_count, opts);

            F1Counts counts(labels.label_count);
            std::vector<double> scores;
            for (std::size_t i = train_n; i < order.size(); ++i) {
                const std::uint32_t v = order[i];
                const auto& truth = labels.node_labels[v];
                model.score_row(features + static_cast<std::size_t>(v) * dim, scores);
                auto predicted = top_r_labels(scores, truth.size());
                for (auto l : predicted)
                    if (std::binary_search(truth.begin(), truth.end(), l))
                        counts.tp[l]++;
                    else
                        counts.fp[l]++;
                for (auto l : truth)
                    if (!std::binary_search(predicted.begin(), predicted.end(), l)) counts.fn[l]++;
            }
            report.rows.push_back({ratio, trial, counts.micro(), counts.macro()});
            micros.push_back(counts.micro());
            macros.push_back(counts.macro());
        }
        auto stats = [](const std::vector<double>& xs) {
            double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
            double var = 0.0;
            for (double x : xs) var += (x - mean) * (x - mean);
            return std::pair<double, double>{mean, std::sqrt(var / xs.size())};
        };
        auto [mm, ms] = stats(micros);
        auto [am, as] = stats(macros);
        report.aggregates.push_back({ratio, mm, ms, am, as});
    }
    return report;
}

// ---- link prediction ---------------------------------------------------------

struct EdgeSplit {
    Graph train_graph;  // residual graph, original dictionary preserved
    std::vector<std::pair<NodeId, NodeId>> test_pos;
    std::vector<std::pair<NodeId, NodeId>> test_neg;
    std::vector<std::pair<NodeId, NodeId>> train_neg;
    double ratio = 0.0;
    std::size_t requested = 0;  // removal quota ceil(ratio * |E|)
    bool shortfall = false;     // fewer removable edges than requested
};

/// Remove ceil(ratio*|E|) edges in seeded random order, skipping any removal
/// that would disconnect the residual graph. Negatives are uniform non-edges
/// of the original graph, disjoint between the train and test sets.
inline EdgeSplit edge_split(const Graph& graph, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("edge_split: ratio must be in (0,1)");
    if (!is_connected(graph)) throw std::invalid_argument("edge_split: graph must be connected");

    const NodeId n = graph.node_count();
    auto all_edges = graph.edges();
    Rng rng(mix_seed({seed, 0x73706c6974ULL}));
    rng.shuffle(all_edges);

    std::vector<std::vector<NodeId>> adj(n);
    for (NodeId u = 0; u < n; ++u) {
        auto nb = graph.neighbors(u);
        adj[u].assign(nb.begin(), nb.end());
    }
    auto erase_edge = [&](NodeId u, NodeId v) {
        adj[u].erase(std::find(adj[u].begin(), adj[u].end(), v));
        adj[v].erase(std::find(adj[v].begin(), adj[v].end(), u));
    };

    std::vector<std::uint32_t> visit_mark(n, 0);
    std::uint32_t visit_tag = 0;
    std::vector<NodeId> stack;
    auto still_reachable = [&](NodeId from, NodeId to) {
        ++visit_tag;
        stack.clear();
        stack.push_back(from);
        visit_mark[from] = visit_tag;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : adj[u]) {
                if (v == to) return true;
                if (visit_mark[v] != visit_tag) {
                    visit_mark[v] = visit_tag;
                    stack.push_back(v);
                }
            }
        }
        return false;
    };

    EdgeSplit split;
    split.ratio = ratio;
    split.requested = static_cast<std::size_t>(std::ceil(ratio * static_cast<double>(graph.edge_count())));

    for (auto [u, v] : all_edges) {
        if (split.test_pos.size() >= split.requested) break;
        erase_edge(u, v);
        if ((adj[u].empty() || adj[v].empty()) || !still_reachable(u, v)) {
            adj[u].push_back(v);  // bridge at this point; keep it
            adj[v].push_back(u);
            continue;
        }
        split.test_pos.emplace_back(u, v);
    }
    split.shortfall = split.test_pos.size() < split.requested;

    std::vector<std::pair<NodeId, NodeId>> residual;
    residual.reserve(graph.edge_count() - split.test_pos.size());
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : adj[u])
            if (u < v) residual.emplace_back(u, v);
    split.train_graph = Graph::from_edges(graph.tokens(), residual);

    // uniform non-edges of the ORIGINAL graph, no self-loops, all disjoint
    std::unordered_set<std::uint64_t> taken;
    auto key = [n](NodeId a, NodeId b) {
        return static_cast<std::uint64_t>(std::min(a, b)) * n + std::max(a, b);
    };
    auto sample_negatives = [&](std::size_t count, std::vector<std::pair<NodeId, NodeId>>& out) {
        const double possible =
            0.5 * static_cast<double>(n) * (n - 1) - static_cast<double>(graph.edge_count());
        if (static_cast<double>(count) + static_cast<double>(taken.size()) > possible)
            throw std::invalid_argument("edge_split: not enough non-edges to sample negatives");
        out.reserve(count);
        while (out.size() < count) {
            auto a = static_cast<NodeId>(rng.uniform_int(n));
            auto b = static_cast<NodeId>(rng.uniform_int(n));
            if (a == b || graph.has_edge(a, b)) continue;
            if (!taken.insert(key(a, b)).second) continue;
            out.emplace_back(std::min(a, b), std::max(a, b));
        }
    };
    sample_negatives(split.test_pos.size(), split.test_neg);
    sample_negatives(split.train_graph.edge_count(), split.train_neg);
    return split;
}

enum class EdgeOp { hadamard, average, weighted_l1, weighted_l2 };

inline const char* edge_op_name(EdgeOp op) {
    switch (op) {
        case EdgeOp::hadamard: return "hadamard";
        case EdgeOp::average: return "average";
        case EdgeOp::weighted_l1: return "weighted_l1";
        case EdgeOp::weighted_l2: return "weighted_l2";
    }
    return "?";
}

inline EdgeOp edge_op_from_name(const std::string& name) {
    if (name == "hadamard") return EdgeOp::hadamard;
    if (name == "average") return EdgeOp::average;
    if (name == "weighted_l1") return EdgeOp::weighted_l1;
    if (name == "weighted_l2") return EdgeOp::weighted_l2;
    throw std::invalid_argument("unknown edge operator: " + name);
}

inline void edge_features(std::span<const double> u, std::span<const double> v, EdgeOp op,
                          double* out) {
    if (u.size() != v.size()) throw std::invalid_argument("edge_features: dimension mismatch");
    switch (op) {
        case EdgeOp::hadamard:
            for (std::size_t k = 0; k < u.size(); ++k) out[k] = u[k] * v[k];
            break;
        case EdgeOp::average:
            for (std::size_t k = 0; k < u.size(); ++k) out[k] = 0.5 * (u[k] + v[k]);
            break;
        case EdgeOp::weighted_l1:
            for (std::size_t k = 0; k < u.size(); ++k) out[k] = std::abs(u[k] - v[k]);
            break;
        case EdgeOp::weighted_l2:
            for (std::size_t k = 0; k < u.size(); ++k) out[k] = (u[k] - v[k]) * (u[k] - v[k]);
            break;
    }
}

inline std::vector<double> edge_features(std::span<const double> u, std::span<const double> v,
                                         EdgeOp op) {
    std::vector<double> out(u.size());
    edge_features(u, v, op, out.data());
    return out;
}

/// Rank-statistic AUC with ties counted one half.
inline double auc_rank(std::span<const double> pos_scores, std::span<const double> neg_scores) {
    if (pos_scores.empty() || neg_scores.empty())
        throw std::invalid_argument("auc_rank: need both positive and negative scores");
    struct Entry {
        double score;
        bool positive;
    };
    std::vector<Entry> entries;
    entries.reserve(pos_scores.size() + neg_scores.size());
    for (double s : pos_scores) entries.push_back({s, true});
    for (double s : neg_scores) entries.push_back({s, false});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.score < b.score; });
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i;
        while (j < entries.size() && entries[j].score == entries[i].score) ++j;
        double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // ranks are 1-based
        for (std::size_t t = i; t < j; ++t)
            if (entries[t].positive) rank_sum_pos += avg_rank;
        i = j;
    }
    const double np = static_cast<double>(pos_scores.size());
    const double nn = static_cast<double>(neg_scores.size());
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

struct LinkPredictionReport {
    std::vector<std::pair<EdgeOp, double>> auc;
};

/// Fit a binary classifier on train pos/neg edge features per operator and
/// score the held-out pairs. The embedding must come from the train graph;
/// the pipeline enforces that ordering.
inline LinkPredictionReport linkpred_eval(const EdgeSplit& split, const double* features,
                                          std::uint32_t dim, const std::vector<EdgeOp>& operators,
                                          double l2, std::uint64_t seed) {
    (void)seed;  // the optimizer is deterministic; kept for interface stability
    LinkPredictionReport report;
    const auto train_pos = split.train_graph.edges();
    const std::size_t n_train = train_pos.size() + split.train_neg.size();

    LogregOptions opts;
    opts.l2 = l2;
    std::vector<double> X(n_train * dim);
    std::vector<std::uint8_t> y(n_train);
    auto fill_row = [&](std::span<const double> a, std::span<const double> b, EdgeOp op,
                        std::size_t row) { edge_features(a, b, op, X.data() + row * dim); };
    auto row_of = [&](NodeId v) {
        return std::span<const double>(features + static_cast<std::size_t>(v) * dim, dim);
    };

    for (EdgeOp op : operators) {
        std::size_t r = 0;
        for (auto [u, v] : train_pos) {
            fill_row(row_of(u), row_of(v), op, r);
            y[r++] = 1;
        }
        for (auto [u, v] : split.train_neg) {
            fill_row(row_of(u), row_of(v), op, r);
            y[r++] = 0;
        }
        LogisticModel model = logreg_fit_binary(X.data(), n_train, dim, y.data(), opts);

        std::vector<double> pos_scores, neg_scores, feat(dim);
        pos_scores.reserve(split.test_pos.size());
        neg_scores.reserve(split.test_neg.size());
        for (auto [u, v] : split.test_pos) {
            edge_features(row_of(u), row_of(v), op, feat.data());
            pos_scores.push_back(model.score(feat.data()));
        }
        for (auto [u, v] : split.test_neg) {
            edge_features(row_of(u), row_of(v), op, feat.data());
            neg_scores.push_back(model.score(feat.data()));
        }
        report.auc.emplace_back(op, auc_rank(pos_scores, neg_scores));
    }
    return report;
}

}  // namespace tne
