// Test-only reference implementations, kept deliberately independent of the
// library code paths they check: different formulas, different accumulation
// routes, no shared helpers.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace oracle {

// Eight descriptive statistics via direct formulas over a sorted copy,
// accumulated in long double.
inline std::array<double, 8> describe(std::span<const double> values) {
    std::vector<double> v(values.begin(), values.end());
    std::sort(v.begin(), v.end());
    const size_t n = v.size();
    long double sum = 0.0L;
    for (double x : v) sum += x;
    const long double mean = sum / static_cast<long double>(n);
    long double sq = 0.0L;
    for (double x : v) sq += (static_cast<long double>(x) - mean) * (static_cast<long double>(x) - mean);
    auto pct = [&](double p) {
        if (n == 1) return v[0];
        double rank = p * static_cast<double>(n - 1);
        auto lo = static_cast<size_t>(std::floor(rank));
        if (lo + 1 >= n) return v[n - 1];
        double frac = rank - static_cast<double>(lo);
        return v[lo] + frac * (v[lo + 1] - v[lo]);
    };
    return {static_cast<double>(n),
            static_cast<double>(mean),
            static_cast<double>(std::sqrt(sq / static_cast<long double>(n))),
            v.front(),
            pct(0.25),
            pct(0.50),
            pct(0.75),
            v.back()};
}

// Mutual information via the entropy identity I = H(X) + H(Y) - H(X,Y),
// a different algebraic route than the plug-in double sum.
inline double entropy_of_counts(const std::map<int64_t, int64_t>& counts, double n) {
    double h = 0.0;
    for (const auto& [_, c] : counts) {
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

inline double mutual_information(std::span<const int32_t> x, std::span<const int32_t> y) {
    std::map<int64_t, int64_t> cx, cy, cxy;
    for (size_t i = 0; i < x.size(); ++i) {
        ++cx[x[i]];
        ++cy[y[i]];
        ++cxy[(static_cast<int64_t>(x[i]) << 32) | static_cast<uint32_t>(y[i])];
    }
    const double n = static_cast<double>(x.size());
    return entropy_of_counts(cx, n) + entropy_of_counts(cy, n) - entropy_of_counts(cxy, n);
}

// Brute-force ChiMerge simulator: keeps raw (value, label) points per
// interval and recomputes the 2xC statistic from scratch each round.
struct ChiMergeSim {
    std::vector<double> cuts;
    std::vector<size_t> merge_trace;
};

// Cells are summed bin-major (all classes of the first bin, then the
// second), matching the statistic's definition; with any other order,
// mathematically tied pairs can differ in their last bits and flip the
// leftmost-minimum choice.
inline double chi2_of(const std::vector<std::pair<double, int32_t>>& a,
                      const std::vector<std::pair<double, int32_t>>& b,
                      int32_t n_classes) {
    std::vector<double> ca(static_cast<size_t>(n_classes), 0.0);
    std::vector<double> cb(static_cast<size_t>(n_classes), 0.0);
    for (const auto& [_, l] : a) ca[static_cast<size_t>(l)] += 1.0;
    for (const auto& [_, l] : b) cb[static_cast<size_t>(l)] += 1.0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double n = na + nb;
    double chi = 0.0;
    for (const auto& [counts, row_total] : {std::pair{&ca, na}, std::pair{&cb, nb}}) {
        for (int32_t c = 0; c < n_classes; ++c) {
            const double col = ca[static_cast<size_t>(c)] + cb[static_cast<size_t>(c)];
            const double expected = row_total * col / n;
            if (expected <= 0) continue;
            const double diff = (*counts)[static_cast<size_t>(c)] - expected;
            chi += diff * diff / expected;
        }
    }
    return chi;
}

inline ChiMergeSim chimerge(const std::vector<double>& values,
                            const std::vector<int32_t>& labels, size_t max_bins,
                            double threshold) {
    int32_t n_classes = 0;
    for (int32_t l : labels) n_classes = std::max(n_classes, l + 1);

    std::map<double, std::vector<std::pair<double, int32_t>>> grouped;
    for (size_t i = 0; i < values.size(); ++i)
        grouped[values[i]].push_back({values[i], labels[i]});
    std::vector<std::vector<std::pair<double, int32_t>>> intervals;
    for (auto& [_, pts] : grouped) intervals.push_back(std::move(pts));

    ChiMergeSim out;
    while (intervals.size() > 1) {
        size_t best = 0;
        double best_chi = chi2_of(intervals[0], intervals[1], n_classes);
        for (size_t i = 1; i + 1 < intervals.size(); ++i) {
            const double chi = chi2_of(intervals[i], intervals[i + 1], n_classes);
            if (chi < best_chi) {
                best_chi = chi;
                best = i;
            }
        }
        if (!(intervals.size() > max_bins || best_chi < threshold)) break;
        out.merge_trace.push_back(best);
        for (auto& p : intervals[best + 1]) intervals[best].push_back(p);
        intervals.erase(intervals.begin() + static_cast<long>(best) + 1);
    }

    for (size_t i = 0; i + 1 < intervals.size(); ++i) {
        double hi = intervals[i][0].first;
        for (const auto& [v, _] : intervals[i]) hi = std::max(hi, v);
        double lo = intervals[i + 1][0].first;
        for (const auto& [v, _] : intervals[i + 1]) lo = std::min(lo, v);
        out.cuts.push_back(0.5 * (hi + lo));
    }
    return out;
}

// Central finite difference of a scalar function of one coordinate.
template <typename F>
double central_diff(F&& f, double& theta, double h = 1e-6) {
    const double saved = theta;
    theta = saved + h;
    const double up = f();
    theta = saved - h;
    const double down = f();
    theta = saved;
    return (up - down) / (2.0 * h);
}

} // namespace oracle
