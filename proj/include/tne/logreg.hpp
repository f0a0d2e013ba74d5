#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace tne {

struct LogregOptions {
    double l2 = 1.0;
    int max_iterations = 1000;
    double tol = 1e-5;  // gradient-norm stopping tolerance
};

struct LogisticModel {
    std::vector<double> weights;
    double intercept = 0.0;
    int iterations = 0;
    double gradient_norm = 0.0;

    double score(const double* x) const {
        double z = intercept;
        for (std::size_t k = 0; k < weights.size(); ++k) z += weights[k] * x[k];
        return z;
    }
    double probability(const double* x) const { return 1.0 / (1.0 + std::exp(-score(x))); }
};

namespace detail {

// mean log-loss + l2*||w||^2/2, intercept unregularized
inline double logreg_loss(const double* X, std::size_t n, std::size_t d,
                          const std::uint8_t* y, const std::vector<double>& w, double b,
                          double l2) {
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* x = X + i * d;
        double z = b;
        for (std::size_t k = 0; k < d; ++k) z += w[k] * x[k];
        // log(1 + exp(z)) - y z, computed stably
        loss += (z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z))) - (y[i] ? z : 0.0);
    }
    loss /= static_cast<double>(n);
    double reg = 0.0;
    for (double v : w) reg += v * v;
    return loss + 0.5 * l2 * reg;
}

}  // namespace detail

/// Binary L2 logistic regression by full-batch gradient descent with a
/// backtracking line search; the loss never increases across iterations.
/// Stops at gradient norm <= tol or max_iterations.
inline LogisticModel logreg_fit_binary(const double* X, std::size_t n, std::size_t d,
                                       const std::uint8_t* y, const LogregOptions& opts,
                                       std::vector<double>* loss_trace = nullptr) {
    if (n == 0) throw std::invalid_argument("logreg: no training rows");
    LogisticModel model;
    model.weights.assign(d, 0.0);
    double& b = model.intercept;

    std::vector<double> grad(d), w_new(d), residual(n);
    double loss = detail::logreg_loss(X, n, d, y, model.weights, b, opts.l2);
    if (loss_trace) loss_trace->push_back(loss);
    double step = 1.0;

    for (int iter = 0; iter < opts.max_iterations; ++iter) {
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = X + i * d;
            double z = b;
            for (std::size_t k = 0; k < d; ++k) z += model.weights[k] * x[k];
            residual[i] = 1.0 / (1.0 + std::exp(-z)) - (y[i] ? 1.0 : 0.0);
        }
        std::fill(grad.begin(), grad.end(), 0.0);
        double grad_b = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double* x = X + i * d;
            for (std::size_t k = 0; k < d; ++k) grad[k] += residual[i] * x[k];
            grad_b += residual[i];
        }
        double gnorm_sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            grad[k] = grad[k] / static_cast<double>(n) + opts.l2 * model.weights[k];
            gnorm_sq += grad[k] * grad[k];
        }
        grad_b /= static_cast<double>(n);
        gnorm_sq += grad_b * grad_b;
        model.gradient_norm = std::sqrt(gnorm_sq);
        model.iterations = iter;
        if (model.gradient_norm <= opts.tol) break;

        bool accepted = false;
        for (int half = 0; half < 50; ++half, step *= 0.5) {
            for (std::size_t k = 0; k < d; ++k) w_new[k] = model.weights[k] - step * grad[k];
            double b_new = b - step * grad_b;
            double cand = detail::logreg_loss(X, n, d, y, w_new, b_new, opts.l2);
            if (cand <= loss - 1e-4 * step * gnorm_sq) {
                model.weights.swap(w_new);
                b = b_new;
                loss = cand;
                accepted = true;
                break;
            }
        }
        if (loss_trace) loss_trace->push_back(loss);
        if (!accepted) break;  // step underflow: no further progress possible
        step *= 2.0;
        if (step > 1e6) step = 1e6;
    }
    return model;
}

/// One-vs-rest wrapper over per-label binary models. A label with no positive
/// training rows falls back to an intercept-only model at its smoothed prior.
struct OvrModel {
    std::vector<LogisticModel> models;  // one per label id
    std::uint32_t label_count = 0;

    void score_row(const double* x, std::vector<double>& out) const {
        out.resize(models.size());
        for (std::size_t l = 0; l < models.size(); ++l) out[l] = models[l].score(x);
    }
};

inline OvrModel logreg_ovr_fit(const double* X, std::size_t n, std::size_t d,
                               const std::vector<std::vector<std::uint32_t>>& row_labels,
                               std::uint32_t label_count, const LogregOptions& opts) {
    if (n < 2) throw std::invalid_argument("logreg_ovr_fit: need at least two rows");
    if (label_count < 2) throw std::invalid_argument("logreg_ovr_fit: need at least two labels");
    OvrModel ovr;
    ovr.label_count = label_count;
    ovr.models.resize(label_count);
    std::vector<std::uint8_t> y(n);
    for (std::uint32_t label = 0; label < label_count; ++label) {
        std::size_t positives = 0;
        for (std::size_t i = 0; i < n; ++i) {
            bool has = false;
            for (auto l : row_labels[i])
                if (l == label) { has = true; break; }
            y[i] = has ? 1 : 0;
            positives += has;
        }
        if (positives == 0) {
            auto& m = ovr.models[label];
            m.weights.assign(d, 0.0);
            double prior = 0.5 / (static_cast<double>(n) + 1.0);
            m.intercept = std::log(prior / (1.0 - prior));
            continue;
        }
        ovr.models[label] = logreg_fit_binary(X, n, d, y.data(), opts);
    }
    return ovr;
}

}  // namespace tne
