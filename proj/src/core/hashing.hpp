#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace crossforge {

struct HashConfig {
    // Bucket count M; every hashed cell lands in [0, M).
    int64_t modulus = 64;
};

// FNV-1a over the raw bytes. Stable across platforms and process restarts.
uint64_t fnv1a64(std::string_view bytes);

// Bucket for one categorical cell. The feature name salts the hash (separated
// from the token by a 0x1f byte) so columns sharing a token vocabulary, e.g.
// the many "0","1",... bin-id columns, do not hash identically.
int64_t hash_category(std::string_view feature_name, std::string_view token,
                      const HashConfig& cfg);

// A table of hashed categorical features, column-major: one vector per
// feature, all values in [0, M).
struct HashedTable {
    std::vector<std::vector<int32_t>> columns;
    size_t n_rows() const { return columns.empty() ? 0 : columns.front().size(); }
    size_t n_features() const { return columns.size(); }
};

// Cell-wise hash of a token table (one token vector per named column).
HashedTable hash_table(const std::vector<std::string>& column_names,
                       const std::vector<std::vector<std::string>>& token_columns,
                       const HashConfig& cfg);

} // namespace crossforge
