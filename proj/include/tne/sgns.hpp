#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "tne/pairs.hpp"
#include "tne/rng.hpp"
#include "tne/util.hpp"

namespace tne {

struct SgnsParams {
    std::uint32_t dim = 128;
    int negatives = 5;
    double lr0 = 0.025;
    double noise_power = 0.75;
    int epochs = 1;
    std::uint64_t seed = 42;
    int threads = 1;  // 1 = deterministic; >1 = lock-free shared updates
};

/// Input and context matrices of one Skip-Gram training run. The input side
/// is the embedding exported downstream.
struct EmbeddingSet {
    std::uint32_t vocab = 0;
    std::uint32_t dim = 0;
    std::vector<double> input;    // vocab x dim
    std::vector<double> context;  // vocab x dim (over the output vocabulary)
    std::uint64_t trained_pairs = 0;

    double* input_row(std::uint32_t i) { return input.data() + static_cast<std::size_t>(i) * dim; }
    const double* input_row(std::uint32_t i) const { return input.data() + static_cast<std::size_t>(i) * dim; }
    double* context_row(std::uint32_t i) { return context.data() + static_cast<std::size_t>(i) * dim; }
    const double* context_row(std::uint32_t i) const { return context.data() + static_cast<std::size_t>(i) * dim; }
};

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

namespace detail {

inline AliasTable build_noise_table(const PairStream& pairs, double noise_power) {
    std::vector<double> freq(pairs.output_vocab, 0.0);
    for (std::uint32_t y : pairs.outputs) freq[y] += 1.0;
    for (auto& f : freq)
        if (f > 0.0) f = std::pow(f, noise_power);
    return AliasTable(freq);
}

// One positive update plus `negatives` noise updates for pair (x, y), using
// the word2vec gradient; a noise draw equal to y is skipped.
inline void sgns_update(EmbeddingSet& emb, std::uint32_t x, std::uint32_t y, double lr,
                        int negatives, const AliasTable& noise, Rng& rng,
                        std::vector<double>& input_err) {
    const std::uint32_t d = emb.dim;
    double* in = emb.input_row(x);
    input_err.assign(d, 0.0);
    for (int s = 0; s <= negatives; ++s) {
        std::uint32_t target;
        double label;
        if (s == 0) {
            target = y;
            label = 1.0;
        } else {
            target = static_cast<std::uint32_t>(noise.sample(rng));
            if (target == y) continue;
            label = 0.0;
        }
        double* ctx = emb.context_row(target);
        double dot = 0.0;
        for (std::uint32_t k = 0; k < d; ++k) dot += in[k] * ctx[k];
        const double g = (label - sigmoid(dot)) * lr;
        for (std::uint32_t k = 0; k < d; ++k) {
            input_err[k] += g * ctx[k];
            ctx[k] += g * in[k];
        }
    }
    for (std::uint32_t k = 0; k < d; ++k) in[k] += input_err[k];
}

}  // namespace detail

/// Skip-Gram with negative sampling over a fixed pair stream. Input rows are
/// initialized uniform in (-0.5/d, 0.5/d), context rows start at zero, and
/// the learning rate decays linearly from lr0 to lr0/100 over
/// epochs * |pairs| updates.
inline EmbeddingSet sgns_train(const PairStream& pairs, const SgnsParams& params) {
    if (pairs.size() == 0) throw std::invalid_argument("sgns_train: empty pair stream");
    if (params.dim < 1 || params.negatives < 1 || params.epochs < 1)
        throw std::invalid_argument("sgns_train: dim, negatives and epochs must be >= 1");

    EmbeddingSet emb;
    emb.vocab = pairs.input_vocab;
    emb.dim = params.dim;
    emb.input.resize(static_cast<std::size_t>(pairs.input_vocab) * params.dim);
    emb.context.assign(static_cast<std::size_t>(pairs.output_vocab) * params.dim, 0.0);

    Rng init_rng(mix_seed({params.seed, 0x696e6974ULL}));
    for (auto& x : emb.input) x = (init_rng.uniform() - 0.5) / params.dim;

    const AliasTable noise = detail::build_noise_table(pairs, params.noise_power);
    const double total_updates = static_cast<double>(params.epochs) * pairs.size();
    auto lr_at = [&](double done) {
        return params.lr0 * (0.01 + 0.99 * (1.0 - done / total_updates));
    };

    const int threads = std::max(1, params.threads);
    if (threads == 1) {
        Rng rng(mix_seed({params.seed, 0x6e6567ULL}));
        std::vector<double> err(params.dim);
        std::uint64_t done = 0;
        for (int epoch = 0; epoch < params.epochs; ++epoch)
            for (std::size_t i = 0; i < pairs.size(); ++i, ++done)
                detail::sgns_update(emb, pairs.inputs[i], pairs.outputs[i],
                                    lr_at(static_cast<double>(done)), params.negatives, noise, rng,
                                    err);
    } else {
        // benign-race mode: workers share the matrices without locks
        std::vector<std::thread> pool;
        const std::size_t chunk = (pairs.size() + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                const std::size_t begin = static_cast<std::size_t>(t) * chunk;
                const std::size_t end = std::min(pairs.size(), begin + chunk);
                if (begin >= end) return;
                std::vector<double> err(params.dim);
                for (int epoch = 0; epoch < params.epochs; ++epoch) {
                    Rng rng(mix_seed({params.seed, 0x6e6567ULL, static_cast<std::uint64_t>(t),
                                      static_cast<std::uint64_t>(epoch)}));
                    for (std::size_t i = begin; i < end; ++i) {
                        double done = static_cast<double>(epoch) * pairs.size() +
                                      static_cast<double>(i - begin) * threads;
                        detail::sgns_update(emb, pairs.inputs[i], pairs.outputs[i],
                                            lr_at(std::min(done, total_updates)), params.negatives,
                                            noise, rng, err);
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
    }
    emb.trained_pairs = static_cast<std::uint64_t>(params.epochs) * pairs.size();

    for (double x : emb.input)
        if (!std::isfinite(x)) throw std::runtime_error("sgns_train: non-finite input embedding");
    for (double x : emb.context)
        if (!std::isfinite(x)) throw std::runtime_error("sgns_train: non-finite context embedding");
    return emb;
}

/// Mean SGNS loss over the stream with seeded noise draws; a diagnostic for
/// convergence checks, not part of training.
inline double sgns_average_loss(const PairStream& pairs, const EmbeddingSet& emb, int negatives,
                                double noise_power, std::uint64_t seed) {
    const AliasTable noise = detail::build_noise_table(pairs, noise_power);
    Rng rng(mix_seed({seed, 0x6c6f7373ULL}));
    double total = 0.0;
    const std::uint32_t d = emb.dim;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const double* in = emb.input_row(pairs.inputs[i]);
        const double* ctx = emb.context_row(pairs.outputs[i]);
        double dot = 0.0;
        for (std::uint32_t k = 0; k < d; ++k) dot += in[k] * ctx[k];
        total -= std::log(std::max(sigmoid(dot), 1e-300));
        for (int s = 0; s < negatives; ++s) {
            auto target = static_cast<std::uint32_t>(noise.sample(rng));
            if (target == pairs.outputs[i]) continue;
            const double* nctx = emb.context_row(target);
            double ndot = 0.0;
            for (std::uint32_t k = 0; k < d; ++k) ndot += in[k] * nctx[k];
            total -= std::log(std::max(sigmoid(-ndot), 1e-300));
        }
    }
    return total / static_cast<double>(pairs.size());
}

// ---- exported embedding matrices and their text format ---------------------

struct EmbeddingMatrix {
    std::uint32_t vocab = 0;
    std::uint32_t dim = 0;
    std::vector<double> data;  // vocab x dim
    std::vector<std::string> tokens;

    double* row(std::uint32_t i) { return data.data() + static_cast<std::size_t>(i) * dim; }
    const double* row(std::uint32_t i) const { return data.data() + static_cast<std::size_t>(i) * dim; }
};

inline EmbeddingMatrix export_input_matrix(const EmbeddingSet& emb, std::vector<std::string> tokens) {
    if (tokens.size() != emb.vocab)
        throw std::invalid_argument("export_input_matrix: token count does not match vocabulary");
    EmbeddingMatrix m;
    m.vocab = emb.vocab;
    m.dim = emb.dim;
    m.data = emb.input;
    m.tokens = std::move(tokens);
    return m;
}

inline std::vector<std::string> topic_tokens(std::uint32_t k_count) {
    std::vector<std::string> tokens(k_count);
    for (std::uint32_t k = 0; k < k_count; ++k) tokens[k] = "topic_" + std::to_string(k);
    return tokens;
}

/// "<vocab> <dim>" header, then one "token x1 ... xd" line per row.
inline void write_embedding(std::ostream& out, const EmbeddingMatrix& m) {
    out << m.vocab << ' ' << m.dim << '\n';
    char buf[32];
    for (std::uint32_t i = 0; i < m.vocab; ++i) {
        out << m.tokens[i];
        const double* r = m.row(i);
        for (std::uint32_t k = 0; k < m.dim; ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", r[k]);
            out << ' ' << buf;
        }
        out << '\n';
    }
}

inline EmbeddingMatrix read_embedding(std::istream& in) {
    EmbeddingMatrix m;
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("embedding file: missing header");
    auto header = split_ws(line);
    if (header.size() != 2) throw std::invalid_argument("embedding file: malformed header");
    m.vocab = static_cast<std::uint32_t>(std::stoul(header[0]));
    m.dim = static_cast<std::uint32_t>(std::stoul(header[1]));
    m.data.reserve(static_cast<std::size_t>(m.vocab) * m.dim);
    while (std::getline(in, line)) {
        auto body = trim(line);
        if (body.empty()) continue;
        auto parts = split_ws(body);
        if (parts.size() != m.dim + 1)
            throw std::invalid_argument("embedding file: row has wrong width");
        m.tokens.push_back(parts[0]);
        for (std::uint32_t k = 1; k <= m.dim; ++k) m.data.push_back(std::stod(parts[k]));
    }
    if (m.tokens.size() != m.vocab)
        throw std::invalid_argument("embedding file: row count does not match header");
    return m;
}

// ---- the combined node + topic training -------------------------------------

struct TneEmbeddings {
    EmbeddingSet node;
    EmbeddingSet topic;
};

/// Node pairs -> node embedding, topic-substituted pairs -> topic embedding.
/// The two trainings are separable and share no parameters; their RNG streams
/// are derived independently from the same seed.
inline TneEmbeddings train_tne(const WalkCorpus& corpus, const TopicAssignment& assignment,
                               std::uint32_t node_vocab, int gamma, const SgnsParams& params) {
    PairStream node_pairs = generate_node_context_pairs(corpus, gamma, node_vocab);
    SgnsParams node_params = params;
    node_params.seed = mix_seed({params.seed, 0x6e6f6465ULL});
    TneEmbeddings out;
    out.node = sgns_train(node_pairs, node_params);

    PairStream topic_pairs = update_node_context_pairs(node_pairs, assignment);
    SgnsParams topic_params = params;
    topic_params.seed = mix_seed({params.seed, 0x746f706963ULL});
    out.topic = sgns_train(topic_pairs, topic_params);
    return out;
}

}  // namespace tne
