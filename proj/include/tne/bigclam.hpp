#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "tne/graph.hpp"
#include "tne/rng.hpp"
#include "tne/topic_types.hpp"

namespace tne {

struct BigClamParams {
    std::uint32_t community_count = 80;
    int iterations = 500;
    double step = 0.05;   // initial line-search step
    double tol = 1e-6;    // relative objective change for convergence
    std::uint64_t seed = 42;
};

struct BigClamResult {
    TopicAssignment assignment;
    TopicPosterior posterior;
    std::vector<double> membership;       // V x K nonnegative F
    std::vector<double> objective_trace;  // after every pass
    bool converged = false;
};

namespace detail {

// dot products clipped away from zero so log(1 - exp(-d)) stays finite
inline constexpr double kMinDot = 1e-10;

inline double edge_loglik(double dot) {
    return std::log(1.0 - std::exp(-std::max(dot, kMinDot)));
}

}  // namespace detail

/// L(F) = sum_{(u,v) in E} log(1 - exp(-F_u . F_v)) - sum_{(u,v) not in E} F_u . F_v
inline double bigclam_objective(const Graph& graph, std::span<const double> F, std::uint32_t K) {
    const NodeId n = graph.node_count();
    std::vector<double> col_sum(K, 0.0);
    double sq_sum = 0.0;
    for (NodeId u = 0; u < n; ++u)
        for (std::uint32_t k = 0; k < K; ++k) {
            double x = F[static_cast<std::size_t>(u) * K + k];
            col_sum[k] += x;
            sq_sum += x * x;
        }
    double edge_term = 0.0, edge_dots = 0.0;
    for (NodeId u = 0; u < n; ++u)
        for (NodeId v : graph.neighbors(u)) {
            if (v <= u) continue;
            double dot = 0.0;
            for (std::uint32_t k = 0; k < K; ++k)
                dot += F[static_cast<std::size_t>(u) * K + k] * F[static_cast<std::size_t>(v) * K + k];
            edge_term += detail::edge_loglik(dot);
            edge_dots += dot;
        }
    double all_pairs = 0.0;
    for (std::uint32_t k = 0; k < K; ++k) all_pairs += col_sum[k] * col_sum[k];
    all_pairs = 0.5 * (all_pairs - sq_sum);
    return edge_term - (all_pairs - edge_dots);
}

/// Nonnegative community affiliations by projected gradient ascent with
/// row-wise backtracking line search; the objective never decreases across
/// accepted steps.
inline BigClamResult bigclam_fit(const Graph& graph, const BigClamParams& params) {
    if (params.community_count < 1) throw std::invalid_argument("bigclam: K must be >= 1");
    const NodeId n = graph.node_count();
    const std::uint32_t K = params.community_count;

    Rng rng(mix_seed({params.seed, 0x626967636c616dULL}));
    std::vector<double> F(static_cast<std::size_t>(n) * K);
    for (auto& x : F) x = rng.uniform();

    std::vector<double> col_sum(K, 0.0);
    for (NodeId u = 0; u < n; ++u)
        for (std::uint32_t k = 0; k < K; ++k) col_sum[k] += F[static_cast<std::size_t>(u) * K + k];

    BigClamResult result;
    std::vector<std::uint32_t> order(n);
    std::vector<double> grad(K), nbr_sum(K), candidate(K);
    double objective = bigclam_objective(graph, F, K);
    result.objective_trace.push_back(objective);

    for (int iter = 0; iter < params.iterations; ++iter) {
        std::iota(order.begin(), order.end(), 0u);
        Rng pass_rng(mix_seed({params.seed, 0x70617373ULL, static_cast<std::uint64_t>(iter)}));
        pass_rng.shuffle(order);

        for (std::uint32_t u : order) {
            double* fu = F.data() + static_cast<std::size_t>(u) * K;
            auto nbrs = graph.neighbors(u);
            std::fill(nbr_sum.begin(), nbr_sum.end(), 0.0);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = 0; i < nbrs.size(); ++i) {
                const double* fv = F.data() + static_cast<std::size_t>(nbrs[i]) * K;
                double dot = 0.0;
                for (std::uint32_t k = 0; k < K; ++k) dot += fu[k] * fv[k];
                // d/dF_u log(1-exp(-dot)) = F_v * exp(-dot)/(1-exp(-dot)) = F_v/(exp(dot)-1)
                double coef = 1.0 / (std::exp(std::max(dot, detail::kMinDot)) - 1.0 + 1e-12);
                for (std::uint32_t k = 0; k < K; ++k) {
                    nbr_sum[k] += fv[k];
                    grad[k] += fv[k] * coef;
                }
            }
            // non-edge part: -(col_sum - F_u - sum of neighbor rows)
            for (std::uint32_t k = 0; k < K; ++k) grad[k] -= col_sum[k] - fu[k] - nbr_sum[k];

            // local objective for row u (terms that depend on F_u)
            auto local_value = [&](const double* row) {
                double val = 0.0;
                for (std::size_t i = 0; i < nbrs.size(); ++i) {
                    const double* fv = F.data() + static_cast<std::size_t>(nbrs[i]) * K;
                    double dot = 0.0;
                    for (std::uint32_t k = 0; k < K; ++k) dot += row[k] * fv[k];
                    val += detail::edge_loglik(dot);
                }
                for (std::uint32_t k = 0; k < K; ++k)
                    val -= row[k] * (col_sum[k] - fu[k] - nbr_sum[k]);
                return val;
            };

            const double before = local_value(fu);
            double step = params.step;
            for (int half = 0; half < 16; ++half, step *= 0.5) {
                for (std::uint32_t k = 0; k < K; ++k)
                    candidate[k] = std::max(0.0, fu[k] + step * grad[k]);
                if (local_value(candidate.data()) > before) {
                    for (std::uint32_t k = 0; k < K; ++k) {
                        col_sum[k] += candidate[k] - fu[k];
                        fu[k] = candidate[k];
                    }
                    break;
                }
            }
        }

        double next_objective = bigclam_objective(graph, F, K);
        result.objective_trace.push_back(next_objective);
        if (std::abs(next_objective - objective) <= params.tol * (std::abs(objective) + 1e-12)) {
            result.converged = true;
            objective = next_objective;
            break;
        }
        objective = next_objective;
    }

    result.membership = F;
    result.assignment.backend = TopicBackend::bigclam;
    result.assignment.topic_count = K;
    result.assignment.per_node.resize(n);
    for (NodeId v = 0; v < n; ++v) {
        const double* fv = F.data() + static_cast<std::size_t>(v) * K;
        std::uint32_t best = 0;
        for (std::uint32_t k = 1; k < K; ++k)
            if (fv[k] > fv[best]) best = k;  // ties keep the lowest k
        result.assignment.per_node[v] = static_cast<std::int32_t>(best);
    }

    auto& post = result.posterior;
    post.topic_count = K;
    post.vocab = n;
    post.backend = TopicBackend::bigclam;
    post.phi.resize(static_cast<std::size_t>(K) * n);
    for (std::uint32_t k = 0; k < K; ++k) {
        double total = 0.0;
        for (NodeId v = 0; v < n; ++v) total += F[static_cast<std::size_t>(v) * K + k];
        for (NodeId v = 0; v < n; ++v)
            post.phi[static_cast<std::size_t>(k) * n + v] =
                total > 0.0 ? F[static_cast<std::size_t>(v) * K + k] / total : 1.0 / n;
    }
    return result;
}

}  // namespace tne
