#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tne/sgns.hpp"
#include "tne/topic_types.hpp"

namespace tne {

enum class FusionStrategy { max, min, wmean };

inline const char* fusion_name(FusionStrategy s) {
    switch (s) {
        case FusionStrategy::max: return "max";
        case FusionStrategy::min: return "min";
        case FusionStrategy::wmean: return "wmean";
    }
    return "?";
}

inline FusionStrategy fusion_from_name(const std::string& name) {
    if (name == "max") return FusionStrategy::max;
    if (name == "min") return FusionStrategy::min;
    if (name == "wmean") return FusionStrategy::wmean;
    throw std::invalid_argument("unknown fusion strategy: " + name);
}

/// Concatenate each node vector with a topic vector chosen (max/min) or
/// weighted (wmean) by the node's posterior column P(v|.). The node half of
/// every output row is the node embedding, bit for bit.
inline EmbeddingMatrix fuse(const EmbeddingMatrix& node_emb, const EmbeddingMatrix& topic_emb,
                            const TopicPosterior& posterior, FusionStrategy strategy) {
    if (node_emb.dim != topic_emb.dim)
        throw std::invalid_argument("fuse: node and topic dimensions differ");
    if (posterior.topic_count != topic_emb.vocab)
        throw std::invalid_argument("fuse: posterior K does not match topic vocabulary");
    if (posterior.vocab != node_emb.vocab)
        throw std::invalid_argument("fuse: posterior vocabulary does not match node count");

    const std::uint32_t d = node_emb.dim;
    const std::uint32_t K = posterior.topic_count;
    EmbeddingMatrix omega;
    omega.vocab = node_emb.vocab;
    omega.dim = 2 * d;
    omega.tokens = node_emb.tokens;
    omega.data.resize(static_cast<std::size_t>(omega.vocab) * omega.dim);

    std::vector<double> weights(K);
    for (std::uint32_t v = 0; v < node_emb.vocab; ++v) {
        double* row = omega.row(v);
        const double* nrow = node_emb.row(v);
        for (std::uint32_t k = 0; k < d; ++k) row[k] = nrow[k];

        double* topic_part = row + d;
        if (strategy == FusionStrategy::wmean) {
            double total = 0.0;
            for (std::uint32_t k = 0; k < K; ++k) {
                weights[k] = posterior.p_v_given_k(v, k);
                total += weights[k];
            }
            if (std::abs(total - 1.0) > 1e-6) {  // renormalize drifting posterior columns
                if (total <= 0.0)
                    for (auto& w : weights) w = 1.0 / K;
                else
                    for (auto& w : weights) w /= total;
            }
            for (std::uint32_t k = 0; k < d; ++k) topic_part[k] = 0.0;
            for (std::uint32_t k = 0; k < K; ++k) {
                const double* trow = topic_emb.row(k);
                for (std::uint32_t j = 0; j < d; ++j) topic_part[j] += weights[k] * trow[j];
            }
        } else {
            std::uint32_t pick = 0;
            double best = posterior.p_v_given_k(v, 0);
            for (std::uint32_t k = 1; k < K; ++k) {
                double p = posterior.p_v_given_k(v, k);
                bool better = strategy == FusionStrategy::max ? p > best : p < best;
                if (better) {  // ties keep the lowest k
                    best = p;
                    pick = k;
                }
            }
            const double* trow = topic_emb.row(pick);
            for (std::uint32_t k = 0; k < d; ++k) topic_part[k] = trow[k];
        }
    }
    return omega;
}

inline EmbeddingMatrix fuse_max(const EmbeddingMatrix& n, const EmbeddingMatrix& t,
                                const TopicPosterior& p) {
    return fuse(n, t, p, FusionStrategy::max);
}
inline EmbeddingMatrix fuse_min(const EmbeddingMatrix& n, const EmbeddingMatrix& t,
                                const TopicPosterior& p) {
    return fuse(n, t, p, FusionStrategy::min);
}
inline EmbeddingMatrix fuse_wmean(const EmbeddingMatrix& n, const EmbeddingMatrix& t,
                                  const TopicPosterior& p) {
    return fuse(n, t, p, FusionStrategy::wmean);
}

}  // namespace tne
