#include "core/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "core/error.hpp"

namespace crossforge {

namespace {

int32_t max_code(std::span<const int32_t> v) {
    int32_t m = -1;
    for (int32_t c : v) {
        if (c < 0) throw data_error("categorical codes must be non-negative");
        m = std::max(m, c);
    }
    return m;
}

} // namespace

double mutual_information(std::span<const int32_t> x, std::span<const int32_t> y) {
    if (x.size() != y.size()) throw data_error("mutual_information: length mismatch");
    if (x.empty()) throw data_error("mutual_information: empty input");

    // Canonical argument order: the accumulation order of the double sum then
    // no longer depends on which column came first, so I(x,y) == I(y,x)
    // bit-for-bit.
    if (std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end()))
        std::swap(x, y);

    const size_t ax = static_cast<size_t>(max_code(x)) + 1;
    const size_t ay = static_cast<size_t>(max_code(y)) + 1;
    const double n = static_cast<double>(x.size());

    double mi = 0.0;
    if (ax * ay <= (1u << 22)) {
        std::vector<int64_t> joint(ax * ay, 0);
        std::vector<int64_t> mx(ax, 0), my(ay, 0);
        for (size_t i = 0; i < x.size(); ++i) {
            ++joint[static_cast<size_t>(x[i]) * ay + static_cast<size_t>(y[i])];
            ++mx[static_cast<size_t>(x[i])];
            ++my[static_cast<size_t>(y[i])];
        }
        for (size_t a = 0; a < ax; ++a) {
            if (mx[a] == 0) continue;
            for (size_t b = 0; b < ay; ++b) {
                int64_t c = joint[a * ay + b];
                if (c == 0) continue;
                double pab = static_cast<double>(c) / n;
                double pa = static_cast<double>(mx[a]) / n;
                double pb = static_cast<double>(my[b]) / n;
                mi += pab * std::log2(pab / (pa * pb));
            }
        }
    } else {
        std::unordered_map<int64_t, int64_t> joint;
        std::unordered_map<int32_t, int64_t> mx, my;
        for (size_t i = 0; i < x.size(); ++i) {
            ++joint[(static_cast<int64_t>(x[i]) << 32) | static_cast<uint32_t>(y[i])];
            ++mx[x[i]];
            ++my[y[i]];
        }
        for (const auto& [key, c] : joint) {
            double pab = static_cast<double>(c) / n;
            double pa = static_cast<double>(mx.at(static_cast<int32_t>(key >> 32))) / n;
            double pb = static_cast<double>(my.at(static_cast<int32_t>(key & 0xffffffff))) / n;
            mi += pab * std::log2(pab / (pa * pb));
        }
    }
    return std::max(mi, 0.0);
}

double entropy(std::span<const int32_t> x) { return mutual_information(x, x); }

double redundancy(const std::vector<std::span<const int32_t>>& features) {
    if (features.empty()) throw data_error("redundancy: empty feature set");
    const size_t f = features.size();
    double sum = 0.0;
    for (size_t i = 0; i < f; ++i) {
        for (size_t j = i; j < f; ++j) {
            double mi = mutual_information(features[i], features[j]);
            sum += (i == j) ? mi : 2.0 * mi;
        }
    }
    return sum / (static_cast<double>(f) * static_cast<double>(f));
}

double relevance(const std::vector<std::span<const int32_t>>& features,
                 std::span<const int32_t> labels) {
    if (features.empty()) throw data_error("relevance: empty feature set");
    double sum = 0.0;
    for (const auto& col : features) sum += mutual_information(col, labels);
    return sum / static_cast<double>(features.size());
}

ClassificationMetrics classification_metrics(std::span<const int32_t> predicted,
                                             std::span<const int32_t> truth) {
    if (predicted.size() != truth.size())
        throw data_error("classification_metrics: length mismatch");
    if (predicted.empty()) throw data_error("classification_metrics: empty input");

    int32_t n_classes = std::max(max_code(predicted), max_code(truth)) + 1;
    n_classes = std::max(n_classes, 2);
    const double n = static_cast<double>(truth.size());

    size_t exact = 0;
    for (size_t i = 0; i < truth.size(); ++i)
        if (predicted[i] == truth[i]) ++exact;

    ClassificationMetrics m;
    m.accuracy = static_cast<double>(exact) / n;

    auto one_vs_rest = [&](int32_t positive) {
        int64_t tp = 0, fp = 0, fn = 0;
        for (size_t i = 0; i < truth.size(); ++i) {
            const bool pred_pos = predicted[i] == positive;
            const bool true_pos = truth[i] == positive;
            if (pred_pos && true_pos) ++tp;
            else if (pred_pos) ++fp;
            else if (true_pos) ++fn;
        }
        double p = (tp + fp) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
        double r = (tp + fn) > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
        double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
        return std::array<double, 3>{p, r, f};
    };

    if (n_classes == 2) {
        auto [p, r, f] = one_vs_rest(1);
        m.precision = p;
        m.recall = r;
        m.f_measure = f;
    } else {
        double p = 0.0, r = 0.0, f = 0.0;
        for (int32_t c = 0; c < n_classes; ++c) {
            auto [pc, rc, fc] = one_vs_rest(c);
            p += pc;
            r += rc;
            f += fc;
        }
        m.precision = p / n_classes;
        m.recall = r / n_classes;
        m.f_measure = f / n_classes;
    }
    return m;
}

} // namespace crossforge
