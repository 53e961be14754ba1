#include "core/downstream.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace crossforge {

namespace {

void check_columns(const HashedColumns& features, int64_t modulus) {
    for (const auto& col : features)
        for (int32_t v : col)
            if (v < 0 || v >= modulus)
                throw internal_error("hashed cell outside [0, modulus)");
}

int32_t infer_train_classes(std::span<const int32_t> label_ids,
                            std::span<const size_t> rows) {
    int32_t n = 0;
    for (size_t r : rows) n = std::max(n, label_ids[r] + 1);
    return n;
}

} // namespace

EncodedMatrix encode(const HashedColumns& features, int64_t modulus,
                     std::span<const size_t> rows) {
    check_columns(features, modulus);
    EncodedMatrix m;
    m.n_rows = rows.size();
    m.width = features.size() * static_cast<size_t>(modulus);
    m.cells.assign(m.n_rows * m.width, 0.0);
    for (size_t out = 0; out < rows.size(); ++out) {
        const size_t r = rows[out];
        for (size_t f = 0; f < features.size(); ++f) {
            size_t c = f * static_cast<size_t>(modulus) +
                       static_cast<size_t>(features[f][r]);
            m.cells[out * m.width + c] = 1.0;
        }
    }
    return m;
}

double lr_loss_gradient(std::span<const double> weights, const HashedColumns& features,
                        std::span<const int32_t> label_ids, std::span<const size_t> rows,
                        const DownstreamConfig& cfg, int32_t n_classes,
                        std::span<double> grad_out) {
    const size_t f_count = features.size();
    const size_t m = static_cast<size_t>(cfg.modulus);
    const size_t d = f_count * m + 1; // +1 bias row
    const size_t c_count = static_cast<size_t>(n_classes);
    if (weights.size() != d * c_count) throw internal_error("lr weights size mismatch");
    const bool want_grad = !grad_out.empty();
    if (want_grad) {
        if (grad_out.size() != weights.size())
            throw internal_error("lr gradient size mismatch");
        std::fill(grad_out.begin(), grad_out.end(), 0.0);
    }

    const double n = static_cast<double>(rows.size());
    const size_t bias_row = d - 1;
    std::vector<double> logits(c_count), probs(c_count);
    double loss = 0.0;

    for (size_t r : rows) {
        for (size_t c = 0; c < c_count; ++c) logits[c] = weights[bias_row * c_count + c];
        for (size_t f = 0; f < f_count; ++f) {
            const size_t row = f * m + static_cast<size_t>(features[f][r]);
            for (size_t c = 0; c < c_count; ++c) logits[c] += weights[row * c_count + c];
        }
        double mx = logits[0];
        for (size_t c = 1; c < c_count; ++c) mx = std::max(mx, logits[c]);
        double z = 0.0;
        for (size_t c = 0; c < c_count; ++c) {
            probs[c] = std::exp(logits[c] - mx);
            z += probs[c];
        }
        const auto y = static_cast<size_t>(label_ids[r]);
        loss -= (logits[y] - mx) - std::log(z);
        if (want_grad) {
            for (size_t c = 0; c < c_count; ++c) {
                double g = (probs[c] / z - (c == y ? 1.0 : 0.0)) / n;
                grad_out[bias_row * c_count + c] += g;
                for (size_t f = 0; f < f_count; ++f) {
                    const size_t row = f * m + static_cast<size_t>(features[f][r]);
                    grad_out[row * c_count + c] += g;
                }
            }
        }
    }
    loss /= n;

    // L2 on everything except the bias row.
    double reg = 0.0;
    for (size_t row = 0; row < bias_row; ++row) {
        for (size_t c = 0; c < c_count; ++c) {
            const double w = weights[row * c_count + c];
            reg += w * w;
            if (want_grad) grad_out[row * c_count + c] += cfg.l2 * w;
        }
    }
    return loss + 0.5 * cfg.l2 * reg;
}

double lr_loss(std::span<const double> weights, const HashedColumns& features,
               std::span<const int32_t> label_ids, std::span<const size_t> rows,
               const DownstreamConfig& cfg, int32_t n_classes) {
    return lr_loss_gradient(weights, features, label_ids, rows, cfg, n_classes, {});
}

LRModel train_lr(const HashedColumns& features, std::span<const int32_t> label_ids,
                 std::span<const size_t> train_rows, const DownstreamConfig& cfg,
                 int32_t n_classes) {
    check_columns(features, cfg.modulus);
    if (train_rows.empty()) throw data_error("train_lr: no training rows");
    if (n_classes < 2) throw data_error("train_lr: needs at least 2 classes");

    LRModel model;
    model.n_features = features.size();
    model.modulus = cfg.modulus;
    model.n_classes = n_classes;
    const size_t d = features.size() * static_cast<size_t>(cfg.modulus) + 1;
    model.weights.assign(d * static_cast<size_t>(n_classes), 0.0);
    model.epoch_losses.reserve(static_cast<size_t>(cfg.epochs));

    std::vector<double> grad(model.weights.size());
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        double loss = lr_loss_gradient(model.weights, features, label_ids, train_rows,
                                       cfg, n_classes, grad);
        model.epoch_losses.push_back(loss);
        for (size_t i = 0; i < model.weights.size(); ++i)
            model.weights[i] -= cfg.learning_rate * grad[i];
    }
    return model;
}

std::vector<int32_t> predict_lr(const LRModel& model, const HashedColumns& features,
                                std::span<const size_t> rows) {
    const size_t m = static_cast<size_t>(model.modulus);
    const size_t c_count = static_cast<size_t>(model.n_classes);
    const size_t bias_row = model.n_features * m;
    std::vector<double> logits(c_count);
    std::vector<int32_t> pred;
    pred.reserve(rows.size());
    for (size_t r : rows) {
        for (size_t c = 0; c < c_count; ++c)
            logits[c] = model.weights[bias_row * c_count + c];
        for (size_t f = 0; f < model.n_features; ++f) {
            const size_t row = f * m + static_cast<size_t>(features[f][r]);
            for (size_t c = 0; c < c_count; ++c) logits[c] += model.weights[row * c_count + c];
        }
        size_t best = 0;
        for (size_t c = 1; c < c_count; ++c)
            if (logits[c] > logits[best]) best = c; // ties keep the lowest id
        pred.push_back(static_cast<int32_t>(best));
    }
    return pred;
}

ClassificationMetrics train_eval(const HashedColumns& features,
                                 std::span<const int32_t> label_ids, const Split& split,
                                 const DownstreamConfig& cfg) {
    const int32_t n_train_classes = infer_train_classes(label_ids, split.train_indices);
    {
        // The trainer needs at least two classes represented in its rows.
        int32_t distinct = 0;
        std::vector<uint8_t> seen(static_cast<size_t>(n_train_classes), 0);
        for (size_t r : split.train_indices)
            if (!seen[static_cast<size_t>(label_ids[r])]) {
                seen[static_cast<size_t>(label_ids[r])] = 1;
                ++distinct;
            }
        if (distinct < 2) throw data_error("train_eval: single-class training labels");
    }

    LRModel model = train_lr(features, label_ids, split.train_indices, cfg, n_train_classes);
    std::vector<int32_t> pred = predict_lr(model, features, split.test_indices);
    std::vector<int32_t> truth;
    truth.reserve(split.test_indices.size());
    for (size_t r : split.test_indices) truth.push_back(label_ids[r]);
    return classification_metrics(pred, truth);
}

} // namespace crossforge
