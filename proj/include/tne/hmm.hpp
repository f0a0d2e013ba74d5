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

struct HmmFitParams {
    std::uint32_t topic_count = 80;
    double p0 = 1.0;  // prior over initial distribution
    double a0 = 1.0;  // prior over transition rows
    double b0 = 1.0;  // prior over emission rows
    int iterations = 1000;
    int burn_in = 200;
    std::uint64_t seed = 42;
};

struct HmmFitResult {
    TopicAssignment assignment;
    HmmParams params;        // posterior means from post-burn-in counts
    TopicPosterior posterior;
    std::vector<double> log_likelihood;  // corpus log P(w | sampled params), per sweep
};

/// Bayesian HMM over walks: forward-filtering backward-sampling of the state
/// sequences, conjugate Dirichlet resampling of (pi, a, b). One shared
/// parameter set across all walks.
class HmmSampler {
public:
    HmmSampler(const WalkCorpus& corpus, std::uint32_t vocab, const HmmFitParams& params)
        : corpus_(&corpus), vocab_(vocab), params_(params), rng_(mix_seed({params.seed, 0x686d6dULL})) {
        if (params.topic_count < 1) throw std::invalid_argument("hmm: K must be >= 1");
        if (params.iterations <= params.burn_in || params.burn_in < 0)
            throw std::invalid_argument("hmm: need iterations > burn_in >= 0");
        if (corpus.walks.empty()) throw std::invalid_argument("hmm: empty corpus");

        const std::uint32_t K = params.topic_count;
        pi_ = rng_.dirichlet(params.p0, K);
        trans_.resize(static_cast<std::size_t>(K) * K);
        emit_.resize(static_cast<std::size_t>(K) * vocab_);
        for (std::uint32_t k = 0; k < K; ++k) {
            auto row = rng_.dirichlet(params.a0, K);
            std::copy(row.begin(), row.end(), trans_.begin() + static_cast<std::size_t>(k) * K);
            auto erow = rng_.dirichlet(params.b0, vocab_);
            std::copy(erow.begin(), erow.end(), emit_.begin() + static_cast<std::size_t>(k) * vocab_);
        }
        z_.resize(corpus.walks.size());
        for (std::size_t w = 0; w < corpus.walks.size(); ++w) z_[w].resize(corpus.walks[w].size());

        acc_init_.assign(K, 0);
        acc_trans_.assign(static_cast<std::size_t>(K) * K, 0);
        acc_emit_.assign(static_cast<std::size_t>(K) * vocab_, 0);
    }

    /// One Gibbs sweep; returns log P(corpus | current params) computed by the
    /// scaled forward pass before the parameters are resampled.
    double sweep() {
        const std::uint32_t K = params_.topic_count;
        std::vector<std::uint64_t> count_init(K, 0);
        std::vector<std::uint64_t> count_trans(static_cast<std::size_t>(K) * K, 0);
        std::vector<std::uint64_t> count_emit(static_cast<std::size_t>(K) * vocab_, 0);

        double loglik = 0.0;
        std::vector<double> fwd;       // L x K scaled forward variables
        std::vector<double> weights(K);
        for (std::size_t w = 0; w < corpus_->walks.size(); ++w) {
            const auto& walk = corpus_->walks[w];
            const std::size_t L = walk.size();
            fwd.assign(L * K, 0.0);
            // forward filter with per-step normalization
            double scale = 0.0;
            for (std::uint32_t k = 0; k < K; ++k) {
                double a = pi_[k] * emit_[static_cast<std::size_t>(k) * vocab_ + walk[0]];
                fwd[k] = a;
                scale += a;
            }
            loglik += std::log(scale);
            for (std::uint32_t k = 0; k < K; ++k) fwd[k] /= scale;
            for (std::size_t t = 1; t < L; ++t) {
                scale = 0.0;
                for (std::uint32_t k = 0; k < K; ++k) {
                    double s = 0.0;
                    for (std::uint32_t j = 0; j < K; ++j)
                        s += fwd[(t - 1) * K + j] * trans_[static_cast<std::size_t>(j) * K + k];
                    s *= emit_[static_cast<std::size_t>(k) * vocab_ + walk[t]];
                    fwd[t * K + k] = s;
                    scale += s;
                }
                loglik += std::log(scale);
                for (std::uint32_t k = 0; k < K; ++k) fwd[t * K + k] /= scale;
            }
            // backward sample
            for (std::uint32_t k = 0; k < K; ++k) weights[k] = fwd[(L - 1) * K + k];
            std::uint32_t next = static_cast<std::uint32_t>(rng_.sample_discrete(weights));
            z_[w][L - 1] = static_cast<std::uint16_t>(next);
            for (std::size_t t = L - 1; t-- > 0;) {
                for (std::uint32_t k = 0; k < K; ++k)
                    weights[k] = fwd[t * K + k] * trans_[static_cast<std::size_t>(k) * K + next];
                next = static_cast<std::uint32_t>(rng_.sample_discrete(weights));
                z_[w][t] = static_cast<std::uint16_t>(next);
            }
            // tally
            count_init[z_[w][0]]++;
            for (std::size_t t = 0; t < L; ++t)
                count_emit[static_cast<std::size_t>(z_[w][t]) * vocab_ + walk[t]]++;
            for (std::size_t t = 0; t + 1 < L; ++t)
                count_trans[static_cast<std::size_t>(z_[w][t]) * K + z_[w][t + 1]]++;
        }

        resample_row(pi_, count_init.data(), K, params_.p0);
        for (std::uint32_t k = 0; k < K; ++k) {
            resample_row_at(trans_, static_cast<std::size_t>(k) * K, count_trans.data() + static_cast<std::size_t>(k) * K, K, params_.a0);
            resample_row_at(emit_, static_cast<std::size_t>(k) * vocab_, count_emit.data() + static_cast<std::size_t>(k) * vocab_, vocab_, params_.b0);
        }

        ++sweeps_done_;
        if (sweeps_done_ > params_.burn_in) {
            for (std::uint32_t k = 0; k < K; ++k) acc_init_[k] += count_init[k];
            for (std::size_t i = 0; i < count_trans.size(); ++i) acc_trans_[i] += count_trans[i];
            for (std::size_t i = 0; i < count_emit.size(); ++i) acc_emit_[i] += count_emit[i];
        }
        loglik_trace_.push_back(loglik);
        return loglik;
    }

    void run() {
        for (int it = 0; it < params_.iterations; ++it) sweep();
    }

    HmmFitResult finalize() const {
        const std::uint32_t K = params_.topic_count;
        HmmFitResult result;
        result.assignment.per_occurrence = z_;
        result.assignment.topic_count = K;
        result.assignment.backend = TopicBackend::hmm;
        result.log_likelihood = loglik_trace_;

        auto& p = result.params;
        p.topic_count = K;
        p.vocab = vocab_;
        p.p0 = params_.p0;
        p.a0 = params_.a0;
        p.b0 = params_.b0;
        p.pi = posterior_mean(acc_init_.data(), K, params_.p0);
        p.trans.resize(static_cast<std::size_t>(K) * K);
        p.emit.resize(static_cast<std::size_t>(K) * vocab_);
        for (std::uint32_t k = 0; k < K; ++k) {
            auto trow = posterior_mean(acc_trans_.data() + static_cast<std::size_t>(k) * K, K, params_.a0);
            std::copy(trow.begin(), trow.end(), p.trans.begin() + static_cast<std::size_t>(k) * K);
            auto erow = posterior_mean(acc_emit_.data() + static_cast<std::size_t>(k) * vocab_, vocab_, params_.b0);
            std::copy(erow.begin(), erow.end(), p.emit.begin() + static_cast<std::size_t>(k) * vocab_);
        }

        result.posterior.topic_count = K;
        result.posterior.vocab = vocab_;
        result.posterior.alpha = params_.a0;
        result.posterior.beta = params_.b0;
        result.posterior.backend = TopicBackend::hmm;
        result.posterior.phi = p.emit;  // P(v|k) = posterior-mean emission rows
        return result;
    }

    std::span<const double> pi() const { return pi_; }
    int sweeps_done() const { return sweeps_done_; }

private:
    static std::vector<double> posterior_mean(const std::uint64_t* counts, std::uint32_t n, double prior) {
        std::vector<double> row(n);
        double total = 0.0;
        for (std::uint32_t i = 0; i < n; ++i) total += static_cast<double>(counts[i]);
        const double denom = total + prior * n;
        for (std::uint32_t i = 0; i < n; ++i) row[i] = (counts[i] + prior) / denom;
        return row;
    }

    void resample_row(std::vector<double>& row, const std::uint64_t* counts, std::uint32_t n, double prior) {
        double total = 0.0;
        for (std::uint32_t i = 0; i < n; ++i) {
            row[i] = rng_.gamma(prior + static_cast<double>(counts[i]));
            total += row[i];
        }
        for (std::uint32_t i = 0; i < n; ++i) row[i] /= total;
    }

    void resample_row_at(std::vector<double>& flat, std::size_t offset, const std::uint64_t* counts,
                         std::uint32_t n, double prior) {
        double total = 0.0;
        for (std::uint32_t i = 0; i < n; ++i) {
            flat[offset + i] = rng_.gamma(prior + static_cast<double>(counts[i]));
            total += flat[offset + i];
        }
        for (std::uint32_t i = 0; i < n; ++i) flat[offset + i] /= total;
    }

    const WalkCorpus* corpus_;
    std::uint32_t vocab_;
    HmmFitParams params_;
    Rng rng_;
    std::vector<double> pi_, trans_, emit_;  // current sampled parameters
    std::vector<std::vector<std::uint16_t>> z_;
    std::vector<std::uint64_t> acc_init_, acc_trans_, acc_emit_;
    std::vector<double> loglik_trace_;
    int sweeps_done_ = 0;
};

inline HmmFitResult hmm_fit(const WalkCorpus& corpus, std::uint32_t vocab,
                            const HmmFitParams& params) {
    HmmSampler sampler(corpus, vocab, params);
    sampler.run();
    return sampler.finalize();
}

/// log P(w, z | pi, a, b) of one walk/state pair under the Markov chain:
/// pi_{z1} * prod_{l<L} b_{z_l, v_l} a_{z_l, z_{l+1}} * b_{z_L, v_L}.
inline double hmm_joint_logprob(std::span<const NodeId> w, std::span<const std::uint16_t> z,
                                const HmmParams& params) {
    if (w.size() != z.size()) throw std::invalid_argument("hmm_joint_logprob: |w| != |z|");
    if (w.empty()) return 0.0;
    double logp = 0.0;
    auto mul = [&](double f) {
        if (f <= 0.0) {
            logp = -std::numeric_limits<double>::infinity();
            return false;
        }
        logp += std::log(f);
        return true;
    };
    if (!mul(params.pi[z[0]])) return logp;
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
        if (!mul(params.b(z[l], w[l]))) return logp;
        if (!mul(params.a(z[l], z[l + 1]))) return logp;
    }
    if (!mul(params.b(z[w.size() - 1], w[w.size() - 1]))) return logp;
    return logp;
}

/// Scaled forward algorithm: log P(w | pi, a, b) summed over all state paths.
inline double hmm_forward_loglik(const WalkCorpus& corpus, const HmmParams& params) {
    const std::uint32_t K = params.topic_count;
    double loglik = 0.0;
    std::vector<double> cur(K), nxt(K);
    for (const auto& walk : corpus.walks) {
        if (walk.empty()) continue;
        double scale = 0.0;
        for (std::uint32_t k = 0; k < K; ++k) {
            cur[k] = params.pi[k] * params.b(k, walk[0]);
            scale += cur[k];
        }
        loglik += std::log(scale);
        for (std::uint32_t k = 0; k < K; ++k) cur[k] /= scale;
        for (std::size_t t = 1; t < walk.size(); ++t) {
            scale = 0.0;
            for (std::uint32_t k = 0; k < K; ++k) {
                double s = 0.0;
                for (std::uint32_t j = 0; j < K; ++j) s += cur[j] * params.a(j, k);
                nxt[k] = s * params.b(k, walk[t]);
                scale += nxt[k];
            }
            loglik += std::log(scale);
            for (std::uint32_t k = 0; k < K; ++k) nxt[k] /= scale;
            std::swap(cur, nxt);
        }
    }
    return loglik;
}

}  // namespace tne
