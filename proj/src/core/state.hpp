#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "core/hashing.hpp"

namespace crossforge {

inline constexpr size_t kDescribeStats = 8;
inline constexpr size_t kStateLength = 64; // 8 statistics x 8 meta-statistics

using FeatureRep = std::array<double, kDescribeStats>;
using StateVector = std::array<double, kStateLength>;

// The eight descriptive statistics, in pinned order:
//   [count, mean, population std, min, p25, p50, p75, max]
// Percentiles interpolate linearly between closest ranks. The input is sorted
// first and every statistic is accumulated over the sorted order, which makes
// the result bit-exact under any permutation of the input.
FeatureRep describe(std::span<const double> values);

FeatureRep feature_rep(std::span<const int32_t> hashed_column);

// Dual summarization: describe() every sample row of the table, then
// describe() each of the eight columns of that matrix. The 8x8 meta matrix is
// concatenated column by column, so the length is 64 for any table shape.
StateVector state_vector(const HashedTable& table);

// Same, restricted to the given rows (e.g. the train split).
StateVector state_vector(const HashedTable& table, std::span<const size_t> rows);

} // namespace crossforge
