#include <catch2/catch_amalgamated.hpp>

#include "tne/eval.hpp"

#include <algorithm>
#include <set>

using namespace tne;

namespace {

std::string data_path(const std::string& name) { return std::string(TNE_DATA_DIR) + "/" + name; }

Graph cycle_graph(NodeId n) {
    std::vector<std::string> tokens;
    for (NodeId i = 0; i < n; ++i) tokens.push_back(std::to_string(i));
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i < n; ++i) edges.emplace_back(std::min(i, (i + 1) % n), std::max(i, (i + 1) % n));
    std::sort(edges.begin(), edges.end());
    return Graph::from_edges(tokens, edges);
}

Graph path_graph(NodeId n) {
    std::vector<std::string> tokens;
    for (NodeId i = 0; i < n; ++i) tokens.push_back(std::to_string(i));
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return Graph::from_edges(tokens, edges);
}

}  // namespace

// ---- classification ----------------------------------------------------------

TEST_CASE("one-hot label features classify perfectly", "[eval]") {
    const std::uint32_t n = 24, labels_n = 3;
    std::vector<double> features(n * labels_n, 0.0);
    LabelSet ls;
    ls.label_count = labels_n;
    ls.node_labels.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) {
        std::uint32_t l = v % labels_n;
        features[v * labels_n + l] = 1.0;
        ls.node_labels[v] = {l};
    }
    auto report = classify_eval(features.data(), n, labels_n, ls, {0.3, 0.5}, 5, 0.01, 7);
    for (const auto& row : report.rows) {
        REQUIRE(row.micro_f1 == Catch::Approx(1.0));
        REQUIRE(row.macro_f1 == Catch::Approx(1.0));
    }
    REQUIRE(report.rows.size() == 10);
    REQUIRE(report.aggregates.size() == 2);
}

TEST_CASE("noise features on balanced labels sit at chance level", "[eval]") {
    Rng rng(127);
    const std::uint32_t n = 200, d = 8;
    std::vector<double> features(n * d);
    for (auto& x : features) x = rng.uniform() * 2.0 - 1.0;
    LabelSet ls;
    ls.label_count = 2;
    ls.node_labels.resize(n);
    for (std::uint32_t v = 0; v < n; ++v) ls.node_labels[v] = {v % 2};
    auto report = classify_eval(features.data(), n, d, ls, {0.5}, 50, 1.0, 3);
    REQUIRE(report.aggregates[0].micro_mean == Catch::Approx(0.5).margin(0.05));
}

TEST_CASE("micro F1 equals micro precision and recall under top-r", "[eval]") {
    // predicted label count == true label count per node, so FP == FN
    Rng rng(131);
    for (int rep = 0; rep < 20; ++rep) {
        const std::uint32_t label_count = 4;
        F1Counts counts(label_count);
        for (int node = 0; node < 30; ++node) {
            std::size_t r = 1 + rng.uniform_int(3);
            std::set<std::uint32_t> truth, pred;
            while (truth.size() < r) truth.insert(static_cast<std::uint32_t>(rng.uniform_int(label_count)));
            while (pred.size() < r) pred.insert(static_cast<std::uint32_t>(rng.uniform_int(label_count)));
            for (auto l : pred)
                truth.count(l) ? counts.tp[l]++ : counts.fp[l]++;
            for (auto l : truth)
                if (!pred.count(l)) counts.fn[l]++;
        }
        std::uint64_t tp = 0, fp = 0, fn = 0;
        for (std::uint32_t l = 0; l < label_count; ++l) {
            tp += counts.tp[l];
            fp += counts.fp[l];
            fn += counts.fn[l];
        }
        REQUIRE(fp == fn);
        if (tp + fp > 0) {
            double precision = static_cast<double>(tp) / (tp + fp);
            double recall = static_cast<double>(tp) / (tp + fn);
            REQUIRE(counts.micro() == Catch::Approx(precision));
            REQUIRE(counts.micro() == Catch::Approx(recall));
        }
    }
}

TEST_CASE("top-r breaks score ties toward lower label ids", "[eval]") {
    std::vector<double> scores{0.5, 0.9, 0.5, 0.1};
    auto top2 = top_r_labels(scores, 2);
    REQUIRE(top2 == std::vector<std::uint32_t>{0, 1});
}

TEST_CASE("classification rejects bad ratios", "[eval]") {
    std::vector<double> features(8, 0.0);
    LabelSet ls;
    ls.label_count = 2;
    ls.node_labels = {{0}, {1}, {0}, {1}};
    REQUIRE_THROWS_AS(classify_eval(features.data(), 4, 2, ls, {1.5}, 1, 1.0, 1),
                      std::invalid_argument);
}

// ---- edge split ----------------------------------------------------------------

TEST_CASE("trees have no removable edges", "[eval]") {
    auto g = path_graph(8);
    auto split = edge_split(g, 0.5, 11);
    REQUIRE(split.test_pos.empty());
    REQUIRE(split.shortfall);
    REQUIRE(split.requested == 4);
    REQUIRE(split.train_graph.edge_count() == 7);
}

TEST_CASE("any cycle admits exactly one removal", "[eval]") {
    // exhaustive over seeds: whatever order the edges come in, the first
    // removal turns the cycle into a path of bridges
    auto g = cycle_graph(6);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        auto split = edge_split(g, 0.5, seed);
        REQUIRE(split.test_pos.size() == 1);
        REQUIRE(split.shortfall);  // quota was 3
        REQUIRE(split.requested == 3);
        REQUIRE(is_connected(split.train_graph));
        REQUIRE(split.train_graph.edge_count() == 5);
    }
}

TEST_CASE("split invariants on the karate graph", "[eval][datasets]") {
    auto g = load_edge_list_file(data_path("karate.edgelist"));
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        auto split = edge_split(g, 0.5, seed);
        REQUIRE(is_connected(split.train_graph));
        REQUIRE(split.train_graph.node_count() == g.node_count());
        REQUIRE(split.test_pos.size() + split.train_graph.edge_count() == g.edge_count());
        REQUIRE(split.test_neg.size() == split.test_pos.size());
        REQUIRE(split.train_neg.size() == split.train_graph.edge_count());

        std::set<std::pair<NodeId, NodeId>> seen;
        for (auto e : split.test_pos) {
            REQUIRE(g.has_edge(e.first, e.second));
            REQUIRE_FALSE(split.train_graph.has_edge(e.first, e.second));
            seen.insert(e);
        }
        for (auto e : split.test_neg) {
            REQUIRE_FALSE(g.has_edge(e.first, e.second));
            REQUIRE(e.first != e.second);
            REQUIRE(seen.insert(e).second);
        }
        for (auto e : split.train_neg) {
            REQUIRE_FALSE(g.has_edge(e.first, e.second));
            REQUIRE(e.first != e.second);
            REQUIRE(seen.insert(e).second);  // disjoint from test negatives
        }
    }
}

TEST_CASE("split requires a connected graph", "[eval]") {
    std::vector<std::string> tokens{"a", "b", "c", "d"};
    auto g = Graph::from_edges(tokens, {{0, 1}, {2, 3}});
    REQUIRE_THROWS_AS(edge_split(g, 0.5, 1), std::invalid_argument);
    auto g2 = cycle_graph(4);
    REQUIRE_THROWS_AS(edge_split(g2, 0.0, 1), std::invalid_argument);
}

// ---- edge features ---------------------------------------------------------------

TEST_CASE("edge operators: hand-worked values", "[eval]") {
    std::vector<double> u{1.0, 2.0}, v{3.0, -1.0};
    REQUIRE(edge_features(u, v, EdgeOp::hadamard) == std::vector<double>{3.0, -2.0});
    REQUIRE(edge_features(u, v, EdgeOp::average) == std::vector<double>{2.0, 0.5});
    REQUIRE(edge_features(u, v, EdgeOp::weighted_l1) == std::vector<double>{2.0, 3.0});
    REQUIRE(edge_features(u, v, EdgeOp::weighted_l2) == std::vector<double>{4.0, 9.0});
}

TEST_CASE("identical endpoints zero out the difference operators", "[eval]") {
    std::vector<double> u{0.3, -0.7, 2.0};
    REQUIRE(edge_features(u, u, EdgeOp::weighted_l1) == std::vector<double>(3, 0.0));
    REQUIRE(edge_features(u, u, EdgeOp::weighted_l2) == std::vector<double>(3, 0.0));
}

TEST_CASE("all operators are symmetric", "[eval]") {
    Rng rng(137);
    for (int rep = 0; rep < 10; ++rep) {
        std::vector<double> u(6), v(6);
        for (auto& x : u) x = rng.uniform() * 4.0 - 2.0;
        for (auto& x : v) x = rng.uniform() * 4.0 - 2.0;
        for (auto op : {EdgeOp::hadamard, EdgeOp::average, EdgeOp::weighted_l1, EdgeOp::weighted_l2})
            REQUIRE(edge_features(u, v, op) == edge_features(v, u, op));
    }
    std::vector<double> short_vec{1.0};
    std::vector<double> long_vec{1.0, 2.0};
    REQUIRE_THROWS_AS(edge_features(short_vec, long_vec, EdgeOp::hadamard), std::invalid_argument);
}

// ---- AUC --------------------------------------------------------------------------

TEST_CASE("auc of perfectly separated scores is 1", "[eval]") {
    std::vector<double> pos{2.0, 3.0, 4.0}, neg{-1.0, 0.0, 1.0};
    REQUIRE(auc_rank(pos, neg) == Catch::Approx(1.0));
    REQUIRE(auc_rank(neg, pos) == Catch::Approx(0.0));
}

TEST_CASE("random scores sit near one half", "[eval]") {
    Rng rng(139);
    std::vector<double> pos(1000), neg(1000);
    for (auto& x : pos) x = rng.uniform();
    for (auto& x : neg) x = rng.uniform();
    REQUIRE(auc_rank(pos, neg) == Catch::Approx(0.5).margin(0.03));
}

TEST_CASE("ties count one half", "[eval]") {
    std::vector<double> pos{1.0, 1.0}, neg{1.0, 1.0};
    REQUIRE(auc_rank(pos, neg) == Catch::Approx(0.5));
}

TEST_CASE("auc is invariant under strictly monotone transforms", "[eval]") {
    Rng rng(149);
    std::vector<double> pos(200), neg(300);
    for (auto& x : pos) x = rng.uniform() * 3.0 + 0.2;
    for (auto& x : neg) x = rng.uniform() * 3.0;
    double base = auc_rank(pos, neg);
    auto transform = [](std::vector<double> xs) {
        for (auto& x : xs) x = std::exp(2.0 * x) - 5.0;
        return xs;
    };
    REQUIRE(auc_rank(transform(pos), transform(neg)) == Catch::Approx(base).epsilon(1e-12));
}

// ---- link prediction end-to-end ----------------------------------------------------

TEST_CASE("adjacency-revealing features beat noise on a small graph", "[eval]") {
    // embedding = rows of the adjacency matrix: hadamard features of connected
    // pairs overlap heavily, so the classifier should do well
    auto g = load_edge_list_file(data_path("karate.edgelist"));
    auto split = edge_split(g, 0.3, 5);
    const std::uint32_t d = g.node_count();
    std::vector<double> features(static_cast<std::size_t>(d) * d, 0.0);
    for (NodeId u = 0; u < d; ++u) {
        features[static_cast<std::size_t>(u) * d + u] = 1.0;
        for (NodeId v : split.train_graph.neighbors(u))
            features[static_cast<std::size_t>(u) * d + v] = 1.0;
    }
    auto report = linkpred_eval(split, features.data(), d,
                                {EdgeOp::hadamard, EdgeOp::average, EdgeOp::weighted_l1,
                                 EdgeOp::weighted_l2},
                                0.01, 3);
    REQUIRE(report.auc.size() == 4);
    for (auto [op, auc] : report.auc) {
        REQUIRE(auc >= 0.0);
        REQUIRE(auc <= 1.0);
    }
    auto hadamard = std::find_if(report.auc.begin(), report.auc.end(),
                                 [](auto& p) { return p.first == EdgeOp::hadamard; });
    REQUIRE(hadamard->second > 0.6);
}
