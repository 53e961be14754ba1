#include "core/state.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"

namespace crossforge {

namespace {

double percentile_sorted(const std::vector<double>& sorted, double p) {
    const size_t n = sorted.size();
    if (n == 1) return sorted[0];
    double rank = p * static_cast<double>(n - 1);
    size_t lo = static_cast<size_t>(rank);
    if (lo + 1 >= n) return sorted[n - 1];
    double frac = rank - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

FeatureRep describe_sorted(std::vector<double>& v) {
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    double sum = 0.0;
    for (double x : v) sum += x;
    const double mean = sum / static_cast<double>(n);
    double sq = 0.0;
    for (double x : v) sq += (x - mean) * (x - mean);
    const double std_pop = std::sqrt(sq / static_cast<double>(n));
    return {static_cast<double>(n), mean,
            std_pop,               v.front(),
            percentile_sorted(v, 0.25), percentile_sorted(v, 0.50),
            percentile_sorted(v, 0.75), v.back()};
}

} // namespace

FeatureRep describe(std::span<const double> values) {
    if (values.empty()) throw data_error("describe: empty input");
    std::vector<double> v(values.begin(), values.end());
    return describe_sorted(v);
}

FeatureRep feature_rep(std::span<const int32_t> hashed_column) {
    if (hashed_column.empty()) throw data_error("feature_rep: empty column");
    std::vector<double> v(hashed_column.begin(), hashed_column.end());
    return describe_sorted(v);
}

StateVector state_vector(const HashedTable& table, std::span<const size_t> rows) {
    const size_t n_features = table.n_features();
    if (n_features == 0 || rows.empty()) throw data_error("state_vector: empty table");

    // Step A: row-wise describe -> n_rows x 8, stored stat-major so step B
    // reads each statistic column contiguously.
    std::vector<std::vector<double>> row_stats(kDescribeStats,
                                               std::vector<double>(rows.size()));
    std::vector<double> row(n_features);
    for (size_t out = 0; out < rows.size(); ++out) {
        const size_t r = rows[out];
        for (size_t f = 0; f < n_features; ++f)
            row[f] = static_cast<double>(table.columns[f][r]);
        std::vector<double> copy = row;
        FeatureRep stats = describe_sorted(copy);
        for (size_t s = 0; s < kDescribeStats; ++s) row_stats[s][out] = stats[s];
    }

    // Step B: describe each statistic column; concatenate column-major.
    StateVector out{};
    for (size_t s = 0; s < kDescribeStats; ++s) {
        std::vector<double> col = row_stats[s];
        FeatureRep meta = describe_sorted(col);
        for (size_t m = 0; m < kDescribeStats; ++m) out[s * kDescribeStats + m] = meta[m];
    }
    return out;
}

StateVector state_vector(const HashedTable& table) {
    std::vector<size_t> rows(table.n_rows());
    for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    return state_vector(table, rows);
}

} // namespace crossforge
