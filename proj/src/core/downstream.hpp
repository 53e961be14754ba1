#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "core/dataset.hpp"
#include "core/metrics.hpp"

namespace crossforge {

struct DownstreamConfig {
    double learning_rate = 0.1;
    int epochs = 300;
    double l2 = 1e-4; // applied to weights, not the bias row
    int64_t modulus = 64;
    uint64_t seed = 0; // unused by the zero-init trainer; kept with the hyperparameters
};

// Hashed feature columns over all rows, one span per feature, values in [0, M).
using HashedColumns = std::vector<std::span<const int32_t>>;

// Block one-hot encoding over hashed buckets: width F*M, exactly one 1 per
// feature block per row. Row-major.
struct EncodedMatrix {
    size_t n_rows = 0;
    size_t width = 0;
    std::vector<double> cells;
    double at(size_t r, size_t c) const { return cells[r * width + c]; }
};

EncodedMatrix encode(const HashedColumns& features, int64_t modulus,
                     std::span<const size_t> rows);

// Multinomial logistic regression; weights are (F*M + 1) x C row-major with
// the bias row last. Trained by full-batch gradient descent from zero
// initialization, so the result is a pure function of its inputs.
struct LRModel {
    size_t n_features = 0;
    int64_t modulus = 0;
    int32_t n_classes = 0;
    std::vector<double> weights;
    std::vector<double> epoch_losses; // regularized mean cross-entropy per epoch
};

// Regularized cross-entropy loss and its gradient at the given weights over
// the given rows; the gradient buffer must match weights in size. Exposed so
// tests can check the analytic gradient against finite differences.
double lr_loss(std::span<const double> weights, const HashedColumns& features,
               std::span<const int32_t> label_ids, std::span<const size_t> rows,
               const DownstreamConfig& cfg, int32_t n_classes);
double lr_loss_gradient(std::span<const double> weights, const HashedColumns& features,
                        std::span<const int32_t> label_ids, std::span<const size_t> rows,
                        const DownstreamConfig& cfg, int32_t n_classes,
                        std::span<double> grad_out);

LRModel train_lr(const HashedColumns& features, std::span<const int32_t> label_ids,
                 std::span<const size_t> train_rows, const DownstreamConfig& cfg,
                 int32_t n_classes);

std::vector<int32_t> predict_lr(const LRModel& model, const HashedColumns& features,
                                std::span<const size_t> rows);

// Fit on the train rows, score on the test rows.
ClassificationMetrics train_eval(const HashedColumns& features,
                                 std::span<const int32_t> label_ids, const Split& split,
                                 const DownstreamConfig& cfg);

} // namespace crossforge
