#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace crossforge {

struct ClassificationMetrics {
    double accuracy = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
};

// Plug-in mutual information in bits over the empirical joint distribution of
// two categorical columns (non-negative integer codes). Zero-probability
// cells contribute 0; the result is clamped at 0 against float round-off.
double mutual_information(std::span<const int32_t> x, std::span<const int32_t> y);

// Plug-in entropy in bits, H(x) = I(x, x).
double entropy(std::span<const int32_t> x);

// Mean pairwise mutual information over all ordered feature pairs, diagonal
// included: (1/F^2) * sum_{i,j} I(f_i, f_j).
double redundancy(const std::vector<std::span<const int32_t>>& features);

// Mean mutual information with the label: (1/F) * sum_i I(f_i, y).
double relevance(const std::vector<std::span<const int32_t>>& features,
                 std::span<const int32_t> labels);

// Binary metrics with class id 1 as positive; macro-averaged one-vs-rest for
// more than two classes. Zero-denominator precision/recall are 0, and F is 0
// when P+R is 0.
ClassificationMetrics classification_metrics(std::span<const int32_t> predicted,
                                             std::span<const int32_t> truth);

} // namespace crossforge
