#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "tne/rng.hpp"
#include "tne/topic_types.hpp"
#include "tne/walks.hpp"

namespace tne {

struct LdaParams {
    std::uint32_t topic_count = 80;
    double alpha = -1.0;  // < 0 means the 50/K default
    double beta = 0.01;
    int iterations = 1000;
    int burn_in = 200;
    std::uint64_t seed = 42;
    bool track_theta = false;

    double resolved_alpha() const { return alpha < 0.0 ? 50.0 / topic_count : alpha; }
};

/// Collapsed Gibbs sampler over walk-as-document topic assignments.
/// Exposed as a class so tests can step sweeps and inspect count tables.
class LdaSampler {
public:
    LdaSampler(const WalkCorpus& corpus, std::uint32_t vocab, const LdaParams& params)
        : corpus_(&corpus), vocab_(vocab), params_(params), rng_(mix_seed({params.seed, 0x6c6461ULL})) {
        if (params.topic_count < 1) throw std::invalid_argument("lda: K must be >= 1");
        if (params.iterations <= params.burn_in || params.burn_in < 0)
            throw std::invalid_argument("lda: need iterations > burn_in >= 0");
        if (corpus.walks.empty()) throw std::invalid_argument("lda: empty corpus");

        const std::uint32_t K = params.topic_count;
        walk_topic_.assign(corpus.walks.size() * K, 0);
        topic_node_.assign(static_cast<std::size_t>(K) * vocab_, 0);
        topic_total_.assign(K, 0);
        acc_topic_node_.assign(static_cast<std::size_t>(K) * vocab_, 0);
        z_.resize(corpus.walks.size());
        for (std::size_t w = 0; w < corpus.walks.size(); ++w) {
            const auto& walk = corpus.walks[w];
            z_[w].resize(walk.size());
            for (std::size_t i = 0; i < walk.size(); ++i) {
                auto k = static_cast<std::uint16_t>(rng_.uniform_int(K));
                z_[w][i] = k;
                add_count(w, walk[i], k, +1);
            }
        }
        cond_.resize(K);
    }

    void sweep() {
        const std::uint32_t K = params_.topic_count;
        const double alpha = params_.resolved_alpha();
        const double beta = params_.beta;
        const double vbeta = beta * vocab_;
        for (std::size_t w = 0; w < corpus_->walks.size(); ++w) {
            const auto& walk = corpus_->walks[w];
            std::uint32_t* wt = walk_topic_.data() + w * K;
            for (std::size_t i = 0; i < walk.size(); ++i) {
                const NodeId v = walk[i];
                const std::uint16_t old_k = z_[w][i];
                add_count(w, v, old_k, -1);
                double total = 0.0;
                for (std::uint32_t k = 0; k < K; ++k) {
                    double p = (wt[k] + alpha) * (topic_node_[static_cast<std::size_t>(k) * vocab_ + v] + beta) /
                               (topic_total_[k] + vbeta);
                    cond_[k] = p;
                    total += p;
                }
                double u = rng_.uniform() * total;
                std::uint32_t new_k = K - 1;
                double acc = 0.0;
                for (std::uint32_t k = 0; k + 1 < K; ++k) {
                    acc += cond_[k];
                    if (u < acc) { new_k = k; break; }
                }
                z_[w][i] = static_cast<std::uint16_t>(new_k);
                add_count(w, v, new_k, +1);
            }
        }
        ++sweeps_done_;
        if (sweeps_done_ > params_.burn_in) {
            for (std::size_t i = 0; i < topic_node_.size(); ++i) acc_topic_node_[i] += topic_node_[i];
            ++accumulated_sweeps_;
        }
    }

    void run() {
        for (int it = 0; it < params_.iterations; ++it) sweep();
    }

    std::pair<TopicAssignment, TopicPosterior> finalize() const {
        const std::uint32_t K = params_.topic_count;
        TopicAssignment assignment;
        assignment.per_occurrence = z_;
        assignment.topic_count = K;
        assignment.backend = TopicBackend::lda;

        TopicPosterior posterior;
        posterior.topic_count = K;
        posterior.vocab = vocab_;
        posterior.alpha = params_.resolved_alpha();
        posterior.beta = params_.beta;
        posterior.backend = TopicBackend::lda;
        posterior.phi.resize(static_cast<std::size_t>(K) * vocab_);
        const double beta = params_.beta;
        for (std::uint32_t k = 0; k < K; ++k) {
            std::uint64_t row_total = 0;
            const std::uint64_t* row = acc_topic_node_.data() + static_cast<std::size_t>(k) * vocab_;
            for (std::uint32_t v = 0; v < vocab_; ++v) row_total += row[v];
            const double denom = static_cast<double>(row_total) + beta * vocab_;
            for (std::uint32_t v = 0; v < vocab_; ++v)
                posterior.phi[static_cast<std::size_t>(k) * vocab_ + v] = (row[v] + beta) / denom;
        }
        if (params_.track_theta) {
            const double alpha = params_.resolved_alpha();
            posterior.theta.resize(corpus_->walks.size());
            for (std::size_t w = 0; w < corpus_->walks.size(); ++w) {
                const std::uint32_t* wt = walk_topic_.data() + w * K;
                auto& th = posterior.theta[w];
                th.resize(K);
                const double denom = corpus_->walks[w].size() + alpha * K;
                for (std::uint32_t k = 0; k < K; ++k) th[k] = (wt[k] + alpha) / denom;
            }
        }
        return {std::move(assignment), std::move(posterior)};
    }

    // count-table access for invariant checks
    std::uint32_t walk_topic_count(std::size_t w, std::uint32_t k) const {
        return walk_topic_[w * params_.topic_count + k];
    }
    std::uint32_t topic_node_count(std::uint32_t k, NodeId v) const {
        return topic_node_[static_cast<std::size_t>(k) * vocab_ + v];
    }
    std::uint64_t topic_total(std::uint32_t k) const { return topic_total_[k]; }
    int sweeps_done() const { return sweeps_done_; }

private:
    void add_count(std::size_t w, NodeId v, std::uint32_t k, int delta) {
        walk_topic_[w * params_.topic_count + k] += static_cast<std::uint32_t>(delta);
        topic_node_[static_cast<std::size_t>(k) * vocab_ + v] += static_cast<std::uint32_t>(delta);
        topic_total_[k] += static_cast<std::uint64_t>(static_cast<std::int64_t>(delta));
    }

    const WalkCorpus* corpus_;
    std::uint32_t vocab_;
    LdaParams params_;
    Rng rng_;
    std::vector<std::vector<std::uint16_t>> z_;
    std::vector<std::uint32_t> walk_topic_;   // W x K
    std::vector<std::uint32_t> topic_node_;   // K x V
    std::vector<std::uint64_t> topic_total_;  // K
    std::vector<std::uint64_t> acc_topic_node_;
    std::vector<double> cond_;
    int sweeps_done_ = 0;
    int accumulated_sweeps_ = 0;
};

inline std::pair<TopicAssignment, TopicPosterior> lda_fit(const WalkCorpus& corpus,
                                                          std::uint32_t vocab,
                                                          const LdaParams& params) {
    LdaSampler sampler(corpus, vocab, params);
    sampler.run();
    return sampler.finalize();
}

/// log P(w, z | phi, theta) = sum_l log(phi[z_l][v_l] * theta[z_l]).
/// A zero factor yields -infinity.
inline double lda_joint_logprob(std::span<const NodeId> w, std::span<const std::uint16_t> z,
                                const TopicPosterior& posterior, std::span<const double> theta) {
    if (w.size() != z.size()) throw std::invalid_argument("lda_joint_logprob: |w| != |z|");
    double logp = 0.0;
    for (std::size_t l = 0; l < w.size(); ++l) {
        double f = posterior.p_v_given_k(w[l], z[l]) * theta[z[l]];
        if (f <= 0.0) return -std::numeric_limits<double>::infinity();
        logp += std::log(f);
    }
    return logp;
}

}  // namespace tne
