#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "tne/util.hpp"
#include "tne/walks.hpp"

namespace tne {

enum class TopicBackend { lda, hmm, louvain, bigclam };

inline const char* backend_name(TopicBackend b) {
    switch (b) {
        case TopicBackend::lda: return "lda";
        case TopicBackend::hmm: return "hmm";
        case TopicBackend::louvain: return "louvain";
        case TopicBackend::bigclam: return "bigclam";
    }
    return "?";
}

inline TopicBackend backend_from_name(const std::string& name) {
    if (name == "lda") return TopicBackend::lda;
    if (name == "hmm") return TopicBackend::hmm;
    if (name == "louvain") return TopicBackend::louvain;
    if (name == "bigclam") return TopicBackend::bigclam;
    throw std::invalid_argument("unknown topic backend: " + name);
}

/// Topic labels per corpus occurrence (walk, position). Structure-based
/// backends carry per-node labels and derive the occurrence view from them.
struct TopicAssignment {
    std::vector<std::vector<std::uint16_t>> per_occurrence;  // aligned with corpus walks
    std::vector<std::int32_t> per_node;                      // empty unless structure-based
    std::uint32_t topic_count = 0;
    TopicBackend backend = TopicBackend::lda;

    bool has_per_node() const { return !per_node.empty(); }

    std::uint16_t at(std::size_t walk, std::size_t pos) const {
        return per_occurrence[walk][pos];
    }
};

/// Expand node-level labels into per-occurrence labels over a corpus.
inline void derive_occurrences(TopicAssignment& assignment, const WalkCorpus& corpus) {
    assignment.per_occurrence.clear();
    assignment.per_occurrence.reserve(corpus.walks.size());
    for (const auto& walk : corpus.walks) {
        std::vector<std::uint16_t> labels(walk.size());
        for (std::size_t i = 0; i < walk.size(); ++i)
            labels[i] = static_cast<std::uint16_t>(assignment.per_node[walk[i]]);
        assignment.per_occurrence.push_back(std::move(labels));
    }
}

/// P(v|k) rows plus the hyperparameters and per-walk mixtures behind them.
struct TopicPosterior {
    std::uint32_t topic_count = 0;
    std::uint32_t vocab = 0;
    std::vector<double> phi;                  // K x V row-major, rows sum to 1
    std::vector<std::vector<double>> theta;   // optional, per walk
    double alpha = 0.0;
    double beta = 0.0;
    TopicBackend backend = TopicBackend::lda;

    double p_v_given_k(NodeId v, std::uint32_t k) const {
        return phi[static_cast<std::size_t>(k) * vocab + v];
    }
    const double* row(std::uint32_t k) const { return phi.data() + static_cast<std::size_t>(k) * vocab; }
};

inline double posterior_p_v_given_k(const TopicPosterior& posterior, NodeId v, std::uint32_t k) {
    if (k >= posterior.topic_count || v >= posterior.vocab)
        throw std::invalid_argument("posterior_p_v_given_k: index out of range");
    return posterior.p_v_given_k(v, k);
}

/// Shared HMM parameters: initial distribution, K x K transitions, K x V
/// emissions. Every row is a probability vector.
struct HmmParams {
    std::uint32_t topic_count = 0;
    std::uint32_t vocab = 0;
    std::vector<double> pi;     // K
    std::vector<double> trans;  // K x K row-major
    std::vector<double> emit;   // K x V row-major
    double p0 = 1.0, a0 = 1.0, b0 = 1.0;

    double a(std::uint32_t from, std::uint32_t to) const { return trans[static_cast<std::size_t>(from) * topic_count + to]; }
    double b(std::uint32_t k, NodeId v) const { return emit[static_cast<std::size_t>(k) * vocab + v]; }
};

// ---- text formats ----------------------------------------------------------

/// One line per walk, space-separated integer topic labels per position.
inline void write_assignment(std::ostream& out, const TopicAssignment& assignment) {
    for (const auto& walk : assignment.per_occurrence) {
        for (std::size_t i = 0; i < walk.size(); ++i) {
            if (i) out << ' ';
            out << walk[i];
        }
        out << '\n';
    }
}

inline std::vector<std::vector<std::uint16_t>> read_assignment_lines(std::istream& in) {
    std::vector<std::vector<std::uint16_t>> lines;
    std::string line;
    while (std::getline(in, line)) {
        auto body = trim(line);
        if (body.empty()) continue;
        auto parts = split_ws(body);
        std::vector<std::uint16_t> labels;
        labels.reserve(parts.size());
        for (const auto& p : parts) labels.push_back(static_cast<std::uint16_t>(std::stoul(p)));
        lines.push_back(std::move(labels));
    }
    return lines;
}

/// K rows of V floating-point values.
inline void write_posterior(std::ostream& out, const TopicPosterior& posterior) {
    for (std::uint32_t k = 0; k < posterior.topic_count; ++k) {
        const double* r = posterior.row(k);
        for (std::uint32_t v = 0; v < posterior.vocab; ++v) {
            if (v) out << ' ';
            out << format_double(r[v], 17);
        }
        out << '\n';
    }
}

inline TopicPosterior read_posterior(std::istream& in) {
    TopicPosterior p;
    std::string line;
    std::size_t vocab = 0;
    while (std::getline(in, line)) {
        auto body = trim(line);
        if (body.empty()) continue;
        auto parts = split_ws(body);
        if (vocab == 0)
            vocab = parts.size();
        else if (parts.size() != vocab)
            throw std::invalid_argument("posterior rows have inconsistent widths");
        for (const auto& s : parts) p.phi.push_back(std::stod(s));
        ++p.topic_count;
    }
    p.vocab = static_cast<std::uint32_t>(vocab);
    return p;
}

}  // namespace tne
