#include <catch2/catch_amalgamated.hpp>

#include "tne/graph.hpp"
#include "tne/louvain.hpp"

#include <set>

using namespace tne;

namespace {

std::string data_path(const std::string& name) { return std::string(TNE_DATA_DIR) + "/" + name; }

// independent modularity oracle: Q = sum_c [ e_c / m - (d_c / 2m)^2 ]
// with e_c = intra-community edges and d_c = total degree of the community
double modularity_oracle(const Graph& g, const std::vector<std::int32_t>& comm) {
    const double m = static_cast<double>(g.edge_count());
    std::map<std::int32_t, double> intra, deg;
    for (auto [u, v] : g.edges())
        if (comm[u] == comm[v]) intra[comm[u]] += 1.0;
    for (NodeId v = 0; v < g.node_count(); ++v) deg[comm[v]] += static_cast<double>(g.degree(v));
    double q = 0.0;
    for (const auto& [c, d] : deg) q += intra[c] / m - (d / (2.0 * m)) * (d / (2.0 * m));
    return q;
}

Graph two_triangles() {
    std::vector<std::string> tokens{"a", "b", "c", "d", "e", "f"};
    return Graph::from_edges(tokens, {{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}});
}

}  // namespace

TEST_CASE("two disjoint triangles become two communities", "[louvain]") {
    auto result = louvain_fit(two_triangles(), 1);
    REQUIRE(result.assignment.topic_count == 2);
    REQUIRE(result.assignment.per_node[0] == result.assignment.per_node[1]);
    REQUIRE(result.assignment.per_node[1] == result.assignment.per_node[2]);
    REQUIRE(result.assignment.per_node[3] == result.assignment.per_node[4]);
    REQUIRE(result.assignment.per_node[4] == result.assignment.per_node[5]);
    REQUIRE(result.assignment.per_node[0] != result.assignment.per_node[3]);
}

TEST_CASE("a single clique collapses into one community", "[louvain]") {
    std::vector<std::string> tokens{"a", "b", "c", "d", "e"};
    std::vector<std::pair<NodeId, NodeId>> edges;
    for (NodeId u = 0; u < 5; ++u)
        for (NodeId v = u + 1; v < 5; ++v) edges.emplace_back(u, v);
    auto result = louvain_fit(Graph::from_edges(tokens, edges), 7);
    REQUIRE(result.assignment.topic_count == 1);
}

TEST_CASE("karate modularity beats 0.40 under the oracle", "[louvain][datasets]") {
    auto g = load_edge_list_file(data_path("karate.edgelist"));
    auto result = louvain_fit(g, 42);
    double q = modularity_oracle(g, result.assignment.per_node);
    REQUIRE(q >= 0.40);
    REQUIRE(result.final_modularity == Catch::Approx(q).epsilon(1e-9));
}

TEST_CASE("modularity strictly increases across levels", "[louvain]") {
    auto g = load_edge_list_file(data_path("karate.edgelist"));
    for (std::uint64_t seed : {1ull, 2ull, 3ull, 42ull}) {
        auto result = louvain_fit(g, seed);
        REQUIRE(!result.level_modularity.empty());
        for (std::size_t i = 1; i < result.level_modularity.size(); ++i)
            REQUIRE(result.level_modularity[i] > result.level_modularity[i - 1]);
    }
}

TEST_CASE("posterior rows are indicator over community size", "[louvain]") {
    auto result = louvain_fit(two_triangles(), 3);
    const auto& post = result.posterior;
    for (std::uint32_t k = 0; k < post.topic_count; ++k) {
        double row = 0.0;
        for (NodeId v = 0; v < 6; ++v) {
            double p = post.p_v_given_k(v, k);
            bool member = result.assignment.per_node[v] == static_cast<std::int32_t>(k);
            REQUIRE(p == (member ? Catch::Approx(1.0 / 3.0) : Catch::Approx(0.0)));
            row += p;
        }
        REQUIRE(row == Catch::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("isolated nodes keep their own singleton communities", "[louvain]") {
    std::vector<std::string> tokens{"a", "b", "c", "iso"};
    auto g = Graph::from_edges(tokens, {{0, 1}, {1, 2}, {0, 2}});
    auto result = louvain_fit(g, 9);
    REQUIRE(result.assignment.topic_count == 2);
    std::set<std::int32_t> triangle{result.assignment.per_node[0], result.assignment.per_node[1],
                                    result.assignment.per_node[2]};
    REQUIRE(triangle.size() == 1);
    REQUIRE(result.assignment.per_node[3] != result.assignment.per_node[0]);
}

TEST_CASE("louvain is deterministic per seed", "[louvain]") {
    auto g = load_edge_list_file(data_path("karate.edgelist"));
    auto a = louvain_fit(g, 5);
    auto b = louvain_fit(g, 5);
    REQUIRE(a.assignment.per_node == b.assignment.per_node);
    REQUIRE(a.final_modularity == b.final_modularity);
}
