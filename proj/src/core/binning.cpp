#include "core/binning.hpp"

#include <algorithm>
#include <map>

#include "core/error.hpp"

namespace crossforge {

double chi_square_critical_005(size_t df) {
    static const double table[10] = {3.841, 5.991,  7.815,  9.488,  11.070,
                                     12.592, 14.067, 15.507, 16.919, 18.307};
    if (df < 1) df = 1;
    if (df > 10) df = 10;
    return table[df - 1];
}

double chi_square_adjacent(const ContingencyPair& pair) {
    if (pair.counts.size() != 2) throw data_error("contingency pair must have 2 bins");
    const size_t n_classes = pair.counts[0].size();
    if (pair.counts[1].size() != n_classes)
        throw data_error("contingency pair rows differ in class count");

    int64_t total = 0;
    std::vector<int64_t> row_totals(2, 0), col_totals(n_classes, 0);
    for (size_t i = 0; i < 2; ++i) {
        for (size_t j = 0; j < n_classes; ++j) {
            int64_t a = pair.counts[i][j];
            if (a < 0) throw data_error("negative contingency count");
            row_totals[i] += a;
            col_totals[j] += a;
            total += a;
        }
    }
    if (total == 0) throw data_error("contingency pair is all zeros");

    double chi = 0.0;
    for (size_t i = 0; i < 2; ++i) {
        for (size_t j = 0; j < n_classes; ++j) {
            double expected = static_cast<double>(row_totals[i]) *
                              static_cast<double>(col_totals[j]) /
                              static_cast<double>(total);
            if (expected <= 0.0) continue;
            double diff = static_cast<double>(pair.counts[i][j]) - expected;
            chi += diff * diff / expected;
        }
    }
    return chi;
}

namespace {

struct Bin {
    double lo;                   // smallest raw value inside
    double hi;                   // largest raw value inside
    std::vector<int64_t> counts; // per class
};

double pair_chi(const Bin& a, const Bin& b) {
    ContingencyPair p;
    p.counts = {a.counts, b.counts};
    return chi_square_adjacent(p);
}

} // namespace

ChiMergeResult fit_chimerge_traced(const std::vector<double>& values,
                                   const std::vector<int32_t>& labels,
                                   const BinningConfig& config,
                                   const std::string& column_name) {
    if (values.empty()) throw data_error("fit_chimerge: empty input");
    if (values.size() != labels.size())
        throw data_error("fit_chimerge: values/labels length mismatch");
    if (config.max_bins < 1) throw data_error("fit_chimerge: max_bins must be >= 1");

    int32_t n_classes = 0;
    for (int32_t l : labels) {
        if (l < 0) throw data_error("fit_chimerge: negative class id");
        n_classes = std::max(n_classes, l + 1);
    }

    // One bin per distinct value, ascending.
    std::map<double, std::vector<int64_t>> grouped;
    for (size_t i = 0; i < values.size(); ++i) {
        auto& c = grouped[values[i]];
        if (c.empty()) c.assign(static_cast<size_t>(n_classes), 0);
        ++c[static_cast<size_t>(labels[i])];
    }
    std::vector<Bin> bins;
    bins.reserve(grouped.size());
    for (auto& [v, counts] : grouped) bins.push_back({v, v, std::move(counts)});

    const double threshold =
        config.chi_threshold
            ? *config.chi_threshold
            : chi_square_critical_005(static_cast<size_t>(std::max(1, n_classes - 1)));

    ChiMergeResult result;
    std::vector<double> chis;
    while (bins.size() > 1) {
        chis.resize(bins.size() - 1);
        for (size_t i = 0; i + 1 < bins.size(); ++i) chis[i] = pair_chi(bins[i], bins[i + 1]);
        size_t min_idx = 0;
        for (size_t i = 1; i < chis.size(); ++i)
            if (chis[i] < chis[min_idx]) min_idx = i;

        const bool over_budget = bins.size() > config.max_bins;
        const bool similar = chis[min_idx] < threshold;
        if (!over_budget && !similar) break;

        result.merge_trace.push_back(min_idx);
        bins[min_idx].hi = bins[min_idx + 1].hi;
        for (size_t j = 0; j < bins[min_idx].counts.size(); ++j)
            bins[min_idx].counts[j] += bins[min_idx + 1].counts[j];
        bins.erase(bins.begin() + static_cast<long>(min_idx) + 1);
    }

    result.spec.column_name = column_name;
    for (size_t i = 0; i + 1 < bins.size(); ++i)
        result.spec.cuts.push_back(0.5 * (bins[i].hi + bins[i + 1].lo));
    return result;
}

BinningSpec fit_chimerge(const std::vector<double>& values,
                         const std::vector<int32_t>& labels,
                         const BinningConfig& config,
                         const std::string& column_name) {
    return fit_chimerge_traced(values, labels, config, column_name).spec;
}

int32_t bin_of(double value, const BinningSpec& spec) {
    // First cut strictly greater than value; bin(v) with cuts[i-1] <= v < cuts[i].
    auto it = std::upper_bound(spec.cuts.begin(), spec.cuts.end(), value);
    return static_cast<int32_t>(it - spec.cuts.begin());
}

std::vector<int32_t> apply_binning(const std::vector<double>& values,
                                   const BinningSpec& spec) {
    std::vector<int32_t> out;
    out.reserve(values.size());
    for (double v : values) out.push_back(bin_of(v, spec));
    return out;
}

} // namespace crossforge
