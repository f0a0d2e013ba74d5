#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tne/topic_types.hpp"
#include "tne/walks.hpp"

namespace tne {

/// Ordered (input, output) training pairs plus the corpus occurrence of each
/// pair's center, so topic substitution can find its per-occurrence label.
struct PairStream {
    std::vector<std::uint32_t> inputs;
    std::vector<std::uint32_t> outputs;
    std::vector<std::uint32_t> center_walk;
    std::vector<std::uint16_t> center_pos;
    std::uint32_t input_vocab = 0;
    std::uint32_t output_vocab = 0;
    int window = 0;

    std::size_t size() const { return inputs.size(); }
};

/// Emit (v_i, v_j) for every position i and every j != i within the gamma
/// window, clipped to walk boundaries. The center v_i is the input.
inline PairStream generate_node_context_pairs(const WalkCorpus& corpus, int gamma,
                                              std::uint32_t node_vocab) {
    if (gamma < 1) throw std::invalid_argument("generate_node_context_pairs: gamma must be >= 1");
    PairStream ps;
    ps.input_vocab = node_vocab;
    ps.output_vocab = node_vocab;
    ps.window = gamma;
    for (std::size_t w = 0; w < corpus.walks.size(); ++w) {
        const auto& walk = corpus.walks[w];
        const std::size_t L = walk.size();
        for (std::size_t i = 0; i < L; ++i) {
            const std::size_t lo = i >= static_cast<std::size_t>(gamma) ? i - gamma : 0;
            const std::size_t hi = std::min(L - 1, i + static_cast<std::size_t>(gamma));
            for (std::size_t j = lo; j <= hi; ++j) {
                if (j == i) continue;  // standard Skip-Gram: no self-pairs
                ps.inputs.push_back(walk[i]);
                ps.outputs.push_back(walk[j]);
                ps.center_walk.push_back(static_cast<std::uint32_t>(w));
                ps.center_pos.push_back(static_cast<std::uint16_t>(i));
            }
        }
    }
    return ps;
}

/// Replace each pair's center with its occurrence topic label, turning node
/// context pairs into (topic, node) pairs for the topic embedding training.
inline PairStream update_node_context_pairs(const PairStream& pairs,
                                            const TopicAssignment& assignment) {
    PairStream out;
    out.outputs = pairs.outputs;
    out.center_walk = pairs.center_walk;
    out.center_pos = pairs.center_pos;
    out.output_vocab = pairs.output_vocab;
    out.window = pairs.window;
    out.input_vocab = assignment.topic_count;
    out.inputs.resize(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const std::uint32_t w = pairs.center_walk[i];
        const std::uint16_t pos = pairs.center_pos[i];
        if (w >= assignment.per_occurrence.size() || pos >= assignment.per_occurrence[w].size())
            throw std::invalid_argument("update_node_context_pairs: no topic assignment for walk " +
                                        std::to_string(w) + " position " + std::to_string(pos));
        out.inputs[i] = assignment.per_occurrence[w][pos];
    }
    return out;
}

}  // namespace tne
