#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace crossforge {

struct BinningSpec {
    std::string column_name;
    std::vector<double> cuts; // strictly increasing; n_bins = cuts.size() + 1
    size_t n_bins() const { return cuts.size() + 1; }
};

// Two adjacent bins by class: counts[bin][class].
struct ContingencyPair {
    std::vector<std::vector<int64_t>> counts; // 2 x C
};

struct BinningConfig {
    size_t max_bins = 10;
    // Merge threshold; pairs whose chi-square falls below it keep merging.
    // Unset means "use the 0.05-significance critical value for C-1 degrees
    // of freedom" (tabulated below, df clamped to 1..10).
    std::optional<double> chi_threshold;
};

// 0.05-significance chi-square critical value for df in 1..10 (clamped).
double chi_square_critical_005(size_t df);

// Pearson chi-square of a 2 x C adjacent-bin pair. Cells with zero expected
// count contribute 0, which keeps the statistic finite for empty rows or
// class columns.
double chi_square_adjacent(const ContingencyPair& pair);

struct ChiMergeResult {
    BinningSpec spec;
    // Index of the left bin of each merged pair, in merge order, against the
    // bin list as it stood at that moment. Lets tests replay the sequence.
    std::vector<size_t> merge_trace;
};

// Bottom-up ChiMerge: one initial bin per distinct value (ascending), then
// repeatedly merge the adjacent pair with minimal chi-square (leftmost on
// ties) while n_bins > max_bins or the minimal chi-square is below the
// threshold. Cut points are midpoints between adjacent bin boundary values.
ChiMergeResult fit_chimerge_traced(const std::vector<double>& values,
                                   const std::vector<int32_t>& labels,
                                   const BinningConfig& config,
                                   const std::string& column_name = "");

BinningSpec fit_chimerge(const std::vector<double>& values,
                         const std::vector<int32_t>& labels,
                         const BinningConfig& config,
                         const std::string& column_name = "");

// Bin id for one value: bin i covers [cuts[i-1], cuts[i]) with open ends, so
// every real (including values far outside the fitted range) lands somewhere
// and the mapping is monotone.
int32_t bin_of(double value, const BinningSpec& spec);

std::vector<int32_t> apply_binning(const std::vector<double>& values,
                                   const BinningSpec& spec);

} // namespace crossforge
